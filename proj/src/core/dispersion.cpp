#include "guideq/core/dispersion.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "guideq/errors.hpp"

namespace guideq::core {

namespace {

void require_positive_cutoff(double cutoff)
{
    if (!(cutoff > 0.0)) {
        throw DomainError("cutoff frequency must be positive (got " + std::to_string(cutoff) + ")");
    }
}

}  // namespace

double omega_of_k(double k, double cutoff)
{
    require_positive_cutoff(cutoff);
    return std::hypot(cutoff, k);
}

Wavenumber k_of_omega(double omega, double cutoff)
{
    require_positive_cutoff(cutoff);
    // Factored form keeps relative accuracy close to cutoff.
    const double diff = std::abs(omega) - cutoff;
    const double sum = std::abs(omega) + cutoff;
    if (diff >= 0.0) {
        return {std::sqrt(diff * sum), false};
    }
    return {std::sqrt(-diff * sum), true};
}

double group_velocity(double omega, double k)
{
    if (!(omega > 0.0)) {
        throw DomainError("group velocity requires omega > 0");
    }
    return k / omega;
}

std::optional<double> phase_velocity(double omega, double k)
{
    if (!(omega > 0.0)) {
        throw DomainError("phase velocity requires omega > 0");
    }
    if (k == 0.0) {
        return std::nullopt;
    }
    return omega / k;
}

DispersionPoint dispersion_point(double k, double cutoff)
{
    DispersionPoint p;
    p.omega = omega_of_k(k, cutoff);
    p.k = {k, false};
    p.group_velocity = group_velocity(p.omega, k);
    p.phase_velocity = phase_velocity(p.omega, k);
    return p;
}

double cutoff_with_potential(const Particle& particle, double potential)
{
    const double cutoff = particle.rest_frequency() + potential;
    if (!(cutoff > 0.0)) {
        throw DomainError("omega_0 + V/hbar = " + std::to_string(cutoff) +
                          " is not positive; guide geometry undefined");
    }
    return cutoff;
}

double width_from_cutoff(double cutoff)
{
    require_positive_cutoff(cutoff);
    return std::numbers::pi / cutoff;
}

LowVelocityDispersion schrodinger_dispersion(const Particle& particle, double k, double potential)
{
    const double w0 = particle.rest_frequency();
    LowVelocityDispersion out;
    out.omega = w0 + potential + k * k / (2.0 * w0);
    const double exact = std::hypot(w0 + potential, k);
    out.relative_error = std::abs(out.omega - exact) / exact;
    return out;
}

}  // namespace guideq::core
