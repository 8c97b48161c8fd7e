#include "guideq/solvers/eigen.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "guideq/errors.hpp"

namespace guideq::solvers {

StationaryStates stationary_states(const core::PotentialProfile& profile, const core::Particle& particle,
                                   std::size_t n_states, bool dirichlet_box, bool include_rest)
{
    const auto& grid = profile.grid();
    const std::size_t n = grid.size();
    if (n_states == 0 || n_states > n) {
        throw ValidationError("requested number of states must lie in [1, grid size]");
    }
    const double dx = grid.spacing();
    const double kin = 1.0 / (particle.rest_mass() * dx * dx);
    const double shift = include_rest ? particle.rest_energy() : 0.0;
    const auto v = profile.values();

    std::vector<double> diag(n);
    std::vector<double> off(n, -0.5 * kin);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = v[i] + kin + shift;
    }
    std::vector<double> d = diag;
    std::vector<double> e = off;
    std::vector<double> w(n);
    std::vector<double> z(n * n_states);
    std::vector<lapack_int> support(2 * n_states);
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', static_cast<lapack_int>(n), d.data(),
                                           e.data(), 0.0, 0.0, 1, static_cast<lapack_int>(n_states), 0.0, &found,
                                           w.data(), z.data(), static_cast<lapack_int>(n), support.data());
    if (info != 0 || static_cast<std::size_t>(found) != n_states) {
        std::ostringstream msg;
        msg << "tridiagonal eigensolver failed (info = " << info << ")";
        throw NumericalError(msg.str());
    }

    StationaryStates out;
    out.grid = grid;
    const double scale = 1.0 / std::sqrt(dx);
    for (std::size_t s = 0; s < n_states; ++s) {
        std::vector<double> psi(z.begin() + static_cast<std::ptrdiff_t>(s * n),
                                z.begin() + static_cast<std::ptrdiff_t>((s + 1) * n));
        // Fix the sign so the first significant lobe is positive.
        const auto first = std::find_if(psi.begin(), psi.end(), [](double x) { return std::abs(x) > 1e-8; });
        if (first != psi.end() && *first < 0.0) {
            for (auto& x : psi) {
                x = -x;
            }
        }
        double res = 0.0;
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double h = diag[i] * psi[i];
            if (i > 0) {
                h += off[i] * psi[i - 1];
            }
            if (i + 1 < n) {
                h += off[i] * psi[i + 1];
            }
            const double r = h - w[s] * psi[i];
            res += r * r;
            nrm += psi[i] * psi[i];
        }
        out.residuals.push_back(std::sqrt(res / nrm));
        for (auto& x : psi) {
            x *= scale;
        }
        out.energies.push_back(w[s]);
        out.states.push_back(std::move(psi));
    }

    if (!dirichlet_box) {
        const double rim = std::min(v.front(), v.back()) + shift;
        if (out.energies.back() >= rim) {
            std::ostringstream msg;
            msg << "profile does not confine the requested states: level " << out.energies.back()
                << " reaches the boundary potential " << rim << " (pass the Dirichlet box flag to accept)";
            throw DomainError(msg.str());
        }
    }
    return out;
}

}  // namespace guideq::solvers
