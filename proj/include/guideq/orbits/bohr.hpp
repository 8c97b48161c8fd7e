#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace guideq::orbits {

/// Constants of a two-body Coulomb problem with a fixed nucleus. Natural
/// electron units by default (m = c = hbar = 1, coupling = alpha). The
/// coupling is q^2 / (4 pi eps0), so SI and natural inputs agree.
struct CoulombSystem {
    double mass = 1.0;
    double coupling = 7.2973525693e-3;
    double c = 1.0;
    double hbar = 1.0;

    double planck() const;
    static CoulombSystem hydrogen() { return {}; }
};

struct CircularOrbit {
    int n = 0;  // 0: not quantized
    double radius = 0.0;
    double speed = 0.0;
    double period = 0.0;
    double angular_momentum = 0.0;
    double energy = 0.0;
};

/// Force balance m v^2 / r = e^2 / r^2 at the given radius.
CircularOrbit classical_orbit(const CoulombSystem& sys, double radius);

/// Bohr's levels: r_n = n^2 hbar^2 / (m e^2), E_n = -m e^4 / (2 hbar^2 n^2).
CircularOrbit quantize_nonrelativistic(const CoulombSystem& sys, int n);

/// Solves m v^2 T sqrt(1 - v^2/c^2) = n h together with force balance by
/// bisection on v in (0, c).
CircularOrbit quantize_relativistic(const CoulombSystem& sys, int n);

struct OvertakeEvent {
    double tau = 0.0;              // exact: T v^2 / (c^2 - v^2)
    double tau_approx = 0.0;       // tau << T form: v^2 T / c^2
    double ratio = 0.0;            // tau / tau_approx
    double overtake_distance = 0.0;
    double zigzag_count = 0.0;     // v tau_approx / L
    double overtake_residual = 0.0;  // |v_ph tau - (tau + T) v| / (v_ph tau)
};

OvertakeEvent overtake_time(const CoulombSystem& sys, const CircularOrbit& orbit);

/// Zigzag period h v / (m c^2 sqrt(1 - v^2/c^2)) of the orbiting particle.
double orbit_zigzag_period(const CoulombSystem& sys, double speed);

/// |v tau - n L| / (n L) with the tau << T overtaking time. n <= 0 picks the
/// nearest integer to v tau / L.
double zigzag_consistency(const CoulombSystem& sys, const CircularOrbit& orbit, int n = 0);

/// Photon angular frequency (E_upper - E_lower) / hbar between two orbits.
double transition_frequency(const CoulombSystem& sys, const CircularOrbit& upper,
                            const CircularOrbit& lower);

struct LevelRow {
    int n = 0;
    double radius_m = 0.0;
    double speed_over_c = 0.0;
    double energy_ev = 0.0;
    double angular_momentum_over_hbar = 0.0;
    double tau_over_period = 0.0;
    double relativistic_shift = 0.0;  // (r_rel - r_nr) / r_nr
};

/// Level table for hydrogen-like systems in natural electron units.
std::vector<LevelRow> level_table(const CoulombSystem& sys, int n_max);
void write_level_table_csv(std::span<const LevelRow> rows, const std::filesystem::path& path);

}  // namespace guideq::orbits
