#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include "guideq/core/particle.hpp"
#include "guideq/core/potential.hpp"
#include "guideq/solvers/wavefield.hpp"

namespace guideq::qpotential {

/// E_kin(x) = omega - omega0 - V(x) on the profile grid.
struct KineticField {
    core::UniformGrid grid;
    std::vector<double> e_kin;
    std::vector<bool> allowed;  // e_kin > 0
    double max_abs = 0.0;

    /// Points closer than 1e-3 max|E_kin| to a turning point (or forbidden).
    bool excluded(std::size_t i) const;
    double turning_tolerance() const { return 1e-3 * max_abs; }
};

KineticField kinetic_field(const core::Particle& particle, double omega, const core::PotentialProfile& profile);

/// WKB density p proportional to E_kin^(-1/2) on the allowed region.
struct DensityField {
    core::UniformGrid grid;
    std::vector<double> p;
    std::vector<bool> allowed;
    std::vector<double> turning_points;
    KineticField kinetic;

    /// Integral of p with E_kin taken linear in each cell, which integrates
    /// the inverse-square-root singularity at turning points exactly.
    double integral() const;
};

DensityField wkb_density(const core::Particle& particle, double omega, const core::PotentialProfile& profile);

enum class USource { LocalFormula, BohmFromAmplitude };

struct QuantumPotentialField {
    core::UniformGrid grid;
    std::vector<double> u;  // NaN where excluded
    std::vector<bool> valid;
    USource source = USource::LocalFormula;
    // Bohm form only: max |U_h - U_2h| / max |U_h| on shared points.
    double half_grid_discrepancy = 0.0;
};

/// U = -(1/8m) E_kin^-1 [V'' + sign (5/4) E_kin^-1 V'^2], with V', V'' from
/// the profile spline. The derivation from R ~ E_kin^(-1/4) gives sign = +1.
QuantumPotentialField quantum_potential_local(const core::Particle& particle, double omega,
                                              const core::PotentialProfile& profile, int sign = +1);

/// U = -R''/(2m R) with fourth-order central differences. Points where R or
/// a stencil neighbour is not positive are excluded. Throws NumericalError
/// when the half-grid estimate disagrees by more than 1e-2 relative.
QuantumPotentialField bohm_quantum_potential(const core::UniformGrid& grid, const std::vector<double>& r,
                                             const core::Particle& particle);

struct SignArbitration {
    int sign = 0;
    double error_plus = 0.0;   // max |U_local(+1) - U_bohm| / max |U_bohm|
    double error_minus = 0.0;
};

/// Compares both signs of the local formula against the Bohm form applied to
/// R = p^(1/2) on points clear of turning points and grid edges.
SignArbitration arbitrate_local_sign(const core::Particle& particle, double omega,
                                     const core::PotentialProfile& profile);

struct PolarWave {
    core::UniformGrid grid;
    std::vector<double> r;
    std::vector<double> s;  // NaN at flagged nodes
    std::vector<bool> defined;
};

/// R = |psi|, S = unwrapped phase (hbar = 1). Nodes with R <= 1e-12 max R
/// are flagged and S is undefined there.
PolarWave polar_decompose(const solvers::WaveField& psi);

struct ResidualNorm {
    double max = 0.0;
    double l2 = 0.0;  // time average of the spatial L2 norm squared, square-rooted
    std::size_t points = 0;
};

/// Residual of dR/dt + (1/2m)(R S'' + 2 R' S') between consecutive slices,
/// centred at the half time with second-order differences.
ResidualNorm continuity_residual(const std::vector<solvers::WaveField>& evolution, const core::Particle& particle);

/// Average of f over a centred window of local width w(x), from the
/// cumulative trapezoid integral.
std::vector<double> local_average(const core::UniformGrid& grid, const std::vector<double>& f,
                                  const std::function<double(double)>& width);

enum class TrajectoryEnd { Completed, ExitedDomain, TurningZone };

struct TrajectorySample {
    double t;
    double x;
    double v;
    double e_mech;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    TrajectoryEnd end = TrajectoryEnd::Completed;
    double dt = 0.0;
};

struct TrajectoryConfig {
    double omega = 0.0;        // needed when the quantum potential is on
    bool quantum = false;
    USource source = USource::LocalFormula;
    double duration = 0.0;
    double dt = 0.0;           // 0 picks T_char / 1000
    std::size_t sample_every = 1;  // 0 keeps about 2000 samples
};

/// Kick-drift-kick integration of m x'' = -d(V + U)/dx.
Trajectory modified_newton_trajectory(const core::Particle& particle, const core::PotentialProfile& profile,
                                      double x0, double v0, const TrajectoryConfig& config);

void write_field_csv(const std::filesystem::path& path, const core::PotentialProfile& profile,
                     const DensityField& density, const QuantumPotentialField& u);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);

}  // namespace guideq::qpotential
