#pragma once

#include <optional>

#include "guideq/core/particle.hpp"

namespace guideq::core {

/// Axial wavenumber of a guided mode. Above cutoff the value is the real
/// propagation constant k; below cutoff it is the decay constant kappa of
/// the evanescent field exp(-kappa x).
struct Wavenumber {
    double value = 0.0;
    bool evanescent = false;
};

/// One point on the relativistic dispersion curve omega^2 = cutoff^2 + (ck)^2.
struct DispersionPoint {
    double omega = 0.0;
    Wavenumber k;
    double group_velocity = 0.0;
    std::optional<double> phase_velocity;  // empty at k = 0 (infinite)
};

double omega_of_k(double k, double cutoff);
Wavenumber k_of_omega(double omega, double cutoff);

/// v_g = c^2 k / omega.
double group_velocity(double omega, double k);
/// v_ph = omega / k; std::nullopt when k = 0 (the phase velocity is infinite).
std::optional<double> phase_velocity(double omega, double k);

DispersionPoint dispersion_point(double k, double cutoff);

/// Local cutoff omega_0 + V / hbar of a guide section at potential V.
double cutoff_with_potential(const Particle& particle, double potential);

/// TE10 width a = pi c / cutoff.
double width_from_cutoff(double cutoff);

struct LowVelocityDispersion {
    double omega = 0.0;
    double relative_error = 0.0;  // against the exact dispersion at cutoff omega_0 + V
};

/// hbar omega = hbar omega_0 + V + (c hbar k)^2 / (2 hbar omega_0).
LowVelocityDispersion schrodinger_dispersion(const Particle& particle, double k, double potential);

}  // namespace guideq::core
