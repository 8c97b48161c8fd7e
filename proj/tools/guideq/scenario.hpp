#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "guideq/core/particle.hpp"
#include "guideq/core/potential.hpp"
#include "guideq/core/units.hpp"
#include "guideq/scatter/transfer.hpp"
#include "guideq/solvers/evolve.hpp"

namespace guideq::cli {

inline constexpr int schema_version = 1;

/// Conversion of scenario values into natural units. SI scenarios may name a
/// different length or energy unit (nm, eV, ...).
class ScenarioUnits {
public:
    ScenarioUnits() = default;
    ScenarioUnits(core::UnitMode mode, double length_factor, double energy_factor);
    core::UnitMode mode() const { return mode_; }
    /// Multiplier taking a scenario value of this dimension to natural units.
    double factor(core::Dimension dim) const;

private:
    core::UnitMode mode_ = core::UnitMode::NaturalElectron;
    double length_ = 1.0;
    double energy_ = 1.0;
};

struct DispersionBlock {
    double k_min = 0.0;
    double k_max = 0.0;
    int points = 0;
    double potential = 0.0;
};

struct GeometryBlock {
    std::optional<double> omega;
    double wkb_threshold = 1.0;
};

struct TraceBlock {
    double omega = 0.0;
    double duration = 0.0;
    std::optional<double> x0;
};

struct TunnelBlock {
    std::vector<scatter::Segment> segments;  // leads included
    double omega_min = 0.0;
    double omega_max = 0.0;
    int points = 0;
    scatter::WaveRegime regime = scatter::WaveRegime::Schrodinger;
};

struct OrbitsBlock {
    int n_max = 5;
    double coupling = core::si::fine_structure;  // natural units
};

struct TrajectoryBlock {
    double x0 = 0.0;
    double v0 = 0.0;
    double duration = 0.0;
    double dt = 0.0;
    int sample_every = 0;
    bool quantum = true;
    bool bohm_source = false;
};

struct QpotentialBlock {
    double omega = 0.0;
    std::optional<TrajectoryBlock> trajectory;
};

enum class SolverKind { Schrodinger, KleinGordon, Eigen };

struct EvolveBlock {
    SolverKind solver = SolverKind::Schrodinger;
    double x0 = 0.0;
    double sigma = 1.0;
    double k0 = 0.0;
    solvers::EvolutionConfig config;
    int states = 1;
    bool box = false;
};

struct Scenario {
    std::filesystem::path path;
    std::string text;  // raw file contents, hashed into the manifest
    std::string name;
    ScenarioUnits units;
    double mass = 1.0;  // natural units
    std::optional<core::PotentialProfile> potential;
    std::optional<DispersionBlock> dispersion;
    std::optional<GeometryBlock> geometry;
    std::optional<TraceBlock> trace;
    std::optional<TunnelBlock> tunnel;
    std::optional<OrbitsBlock> orbits;
    std::optional<QpotentialBlock> qpotential;
    std::optional<EvolveBlock> evolve;
    std::vector<std::string> warnings;  // unknown keys outside strict mode

    core::Particle particle() const { return core::Particle(mass); }
};

/// Parses and validates a scenario file. Throws ValidationError with the
/// offending field path; IoError when the file cannot be read. In strict
/// mode unknown keys are errors, otherwise they become warnings.
Scenario load_scenario(const std::filesystem::path& path, bool strict);
Scenario parse_scenario(const std::string& text, const std::filesystem::path& origin, bool strict);

}  // namespace guideq::cli
