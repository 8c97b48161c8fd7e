#pragma once

#include <cstddef>
#include <vector>

#include "guideq/core/particle.hpp"
#include "guideq/core/potential.hpp"

namespace guideq::solvers {

struct StationaryStates {
    core::UniformGrid grid;
    std::vector<double> energies;
    // psi normalized so that sum |psi|^2 dx = 1; Dirichlet zero beyond the grid.
    std::vector<std::vector<double>> states;
    std::vector<double> residuals;  // ||H psi - E psi|| / ||psi||
};

/// Lowest n_states eigenpairs of the finite-difference Hamiltonian
/// omega0 + V - d^2/dx^2 / (2m). Without dirichlet_box the profile must rise
/// above every returned level at both ends (DomainError otherwise).
StationaryStates stationary_states(const core::PotentialProfile& profile, const core::Particle& particle,
                                   std::size_t n_states, bool dirichlet_box = false, bool include_rest = false);

}  // namespace guideq::solvers
