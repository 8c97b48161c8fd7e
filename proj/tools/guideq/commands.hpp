#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "guideq/core/units.hpp"
#include "scenario.hpp"

namespace guideq::cli {

/// Output directory plus the unit system used for every table written to it.
class Output {
public:
    Output(std::filesystem::path dir, core::UnitMode mode);

    const std::filesystem::path& dir() const { return dir_; }
    bool si() const { return units_.mode() == core::UnitMode::SI; }
    core::UnitMode mode() const { return units_.mode(); }
    double out(double natural, core::Dimension dim) const { return units_.to_external(natural, dim); }
    /// Column name with a unit suffix in SI mode ("x" -> "x_m").
    std::string column(const std::string& name, core::Dimension dim) const;
    /// Path of a new output file, recorded for the manifest.
    std::filesystem::path file(const std::string& relative);
    const std::vector<std::string>& files() const { return files_; }

private:
    std::filesystem::path dir_;
    core::UnitSystem units_;
    std::vector<std::string> files_;
};

struct CommandResult {
    nlohmann::json info;  // subcommand-specific summary for the manifest
    bool passed = true;   // false only for failed acceptance checks
};

CommandResult run_command(const std::string& name, const Scenario& scenario, Output& out, unsigned threads);

const std::vector<std::string>& command_names();

}  // namespace guideq::cli
