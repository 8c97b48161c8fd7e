#pragma once

#include <cstddef>
#include <vector>

#include "guideq/core/particle.hpp"
#include "guideq/core/potential.hpp"
#include "guideq/solvers/wavefield.hpp"

namespace guideq::solvers {

enum class Boundary { Periodic, Absorbing, Dirichlet };

struct EvolutionConfig {
    double dt = 0.0;
    std::size_t n_steps = 0;
    Boundary boundary = Boundary::Absorbing;
    // 0 keeps only the initial and final fields.
    std::size_t snapshot_every = 0;
    // Keep the rest-energy term omega0 in the Schrodinger Hamiltonian. It only
    // rotates the global phase.
    bool rest_phase = true;
    // Sponge layer on each end, as a fraction of the domain length.
    double sponge_fraction = 0.1;
    // Peak sponge strength; 0 picks one from the initial field.
    double sponge_strength = 0.0;
};

/// Crank-Nicolson evolution of i dpsi/dt = (omega0 + V) psi - psi''/(2m).
/// Refuses (NumericalError) when the grid has fewer than 16 points per
/// shortest significant wavelength of the initial field.
std::vector<WaveField> schrodinger_evolve(const WaveField& psi0, const core::PotentialProfile& profile,
                                          const core::Particle& particle, const EvolutionConfig& config);

/// Leapfrog evolution of phi_tt = phi_xx - (omega0 + V)^2 phi (c = 1).
/// Refuses (NumericalError) when dt violates the CFL bound.
std::vector<KGField> klein_gordon_evolve(const std::vector<Complex>& phi0, const std::vector<Complex>& phi_dot0,
                                         const core::UniformGrid& grid, const core::PotentialProfile& profile,
                                         const core::Particle& particle, const EvolutionConfig& config);

/// Time derivative that makes phi a purely positive-frequency Klein-Gordon
/// field, -i omega(k) phi(k), for a uniform cutoff (periodic FFT).
std::vector<Complex> positive_frequency_rate(const std::vector<Complex>& phi, const core::UniformGrid& grid,
                                             double cutoff);

/// Largest dt the leapfrog scheme accepts for this grid and cutoff profile.
double klein_gordon_max_dt(double dx, double max_cutoff);

/// Significant wavenumber bound of a field: |<k>| + 4 sigma_k.
double significant_wavenumber(const WaveField& f);

}  // namespace guideq::solvers
