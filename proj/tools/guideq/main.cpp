#include <CLI11.hpp>

#include "commands.hpp"
#include "run.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Guided-wave model of matter: dispersion, ray tracing, tunnelling, orbits, quantum potential"};
    app.require_subcommand(1);
    guideq::cli::RunRequest request;
    std::string units;
    for (const auto& name : guideq::cli::command_names()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--scenario", request.scenario, "scenario JSON file")->required();
        sub->add_option("--out", request.out, "output directory")->required();
        sub->add_option("--units", units, "output units: si or natural")->check(CLI::IsMember({"si", "natural"}));
        sub->add_flag("--strict", request.strict, "reject unknown scenario keys");
        sub->callback([&request, name] { request.subcommand = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (!units.empty()) {
        request.units = units;
    }
    return guideq::cli::run(request);
}
