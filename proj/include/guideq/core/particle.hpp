#pragma once

#include <numbers>

#include "guideq/errors.hpp"

namespace guideq::core {

/// Species constants of a single particle in natural units (c = hbar = 1),
/// so rest mass, rest energy and rest frequency coincide numerically.
class Particle {
public:
    explicit Particle(double rest_mass) : mass_(rest_mass)
    {
        if (!(rest_mass > 0.0)) {
            throw DomainError("particle rest mass must be positive");
        }
    }

    static Particle electron() { return Particle(1.0); }

    double rest_mass() const { return mass_; }
    double rest_energy() const { return mass_; }
    double rest_frequency() const { return mass_; }
    /// h / (m0 c); twice the free guide width.
    double compton_wavelength() const { return 2.0 * std::numbers::pi / mass_; }

private:
    double mass_;
};

}  // namespace guideq::core
