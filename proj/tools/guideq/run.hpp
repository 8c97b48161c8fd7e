#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace guideq::cli {

struct RunRequest {
    std::string subcommand;
    std::filesystem::path scenario;
    std::filesystem::path out;
    std::optional<std::string> units;  // "si" or "natural"; scenario setting otherwise
    bool strict = false;
};

/// Worker count from GUIDEQ_THREADS; 0 (hardware concurrency) when unset.
unsigned threads_from_env();

/// Runs one subcommand end to end and writes manifest.json. Returns the
/// process exit code; diagnostics go to stderr.
int run(const RunRequest& request);

}  // namespace guideq::cli
