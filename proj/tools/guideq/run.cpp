#include "run.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "guideq/errors.hpp"
#include "hash.hpp"
#include "scenario.hpp"

namespace guideq::cli {

namespace {

constexpr const char* version = "1.0.0";

std::string utc_now()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

core::UnitMode output_mode(const RunRequest& r, const Scenario& sc)
{
    if (!r.units) {
        return sc.units.mode();
    }
    if (*r.units == "si") {
        return core::UnitMode::SI;
    }
    if (*r.units == "natural") {
        return core::UnitMode::NaturalElectron;
    }
    throw ValidationError("--units: expected si or natural (got '" + *r.units + "')");
}

void write_manifest(const RunRequest& r, const Scenario& sc, const Output& out, unsigned threads,
                    const CommandResult& result)
{
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& f : out.files()) {
        const auto p = out.dir() / f;
        outputs.push_back({{"file", f}, {"sha256", sha256_file(p)}, {"bytes", std::filesystem::file_size(p)}});
    }
    nlohmann::json m{{"tool", "guideq"},
                     {"version", version},
                     {"subcommand", r.subcommand},
                     {"scenario", {{"path", sc.path.string()}, {"name", sc.name}, {"sha256", sha256_hex(sc.text)}}},
                     {"units", out.si() ? "si" : "natural"},
                     {"threads", threads},
                     {"created_utc", utc_now()},
                     {"warnings", sc.warnings},
                     {"result", result.info},
                     {"outputs", outputs}};
    const auto path = out.dir() / "manifest.json";
    std::ofstream f(path);
    f << m.dump(2) << '\n';
    if (!f) {
        throw IoError("cannot write " + path.string());
    }
}

}  // namespace

unsigned threads_from_env()
{
    const char* v = std::getenv("GUIDEQ_THREADS");
    if (!v || !*v) {
        return 0;
    }
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1 || n > 4096) {
        throw ValidationError(std::string("GUIDEQ_THREADS: expected a positive integer (got '") + v + "')");
    }
    return static_cast<unsigned>(n);
}

int run(const RunRequest& r)
{
    try {
        const unsigned threads = threads_from_env();
        const auto sc = load_scenario(r.scenario, r.strict);
        for (const auto& w : sc.warnings) {
            std::cerr << "warning: " << w << '\n';
        }
        std::error_code ec;
        std::filesystem::create_directories(r.out, ec);
        if (ec) {
            throw IoError("cannot create output directory " + r.out.string() + ": " + ec.message());
        }
        Output out(r.out, output_mode(r, sc));
        const auto result = run_command(r.subcommand, sc, out, threads);
        write_manifest(r, sc, out, threads, result);
        if (!result.passed) {
            std::cerr << "error: acceptance checks failed\n";
            return 3;
        }
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace guideq::cli
