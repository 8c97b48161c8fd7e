#include "guideq/solvers/evolve.hpp"

#include <gsl/gsl_fft_complex.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "guideq/errors.hpp"

namespace guideq::solvers {

namespace {

bool same_grid(const core::UniformGrid& a, const core::UniformGrid& b)
{
    return a.size() == b.size() && std::abs(a.front() - b.front()) <= 1e-12 * a.spacing() &&
           std::abs(a.spacing() - b.spacing()) <= 1e-12 * a.spacing();
}

// Potential on the field grid. Points outside the profile take the nearest
// end value.
std::vector<double> potential_on(const core::UniformGrid& grid, const core::PotentialProfile& profile)
{
    const auto values = profile.values();
    if (same_grid(grid, profile.grid())) {
        return {values.begin(), values.end()};
    }
    std::vector<double> v(grid.size());
    const auto& pg = profile.grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        if (x <= pg.front()) {
            v[i] = values.front();
        } else if (x >= pg.back()) {
            v[i] = values.back();
        } else {
            v[i] = profile(x);
        }
    }
    return v;
}

std::vector<double> sponge_profile(const core::UniformGrid& grid, double fraction, double strength)
{
    std::vector<double> w(grid.size(), 0.0);
    const double width = fraction * (grid.back() - grid.front());
    if (!(width > 0.0)) {
        return w;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double depth = std::max(grid.front() + width - grid[i], grid[i] - (grid.back() - width));
        if (depth > 0.0) {
            const double s = depth / width;
            w[i] = strength * s * s;
        }
    }
    return w;
}

void check_config(const EvolutionConfig& config, std::size_t n)
{
    if (!(config.dt > 0.0) || !std::isfinite(config.dt)) {
        throw ValidationError("time step must be positive");
    }
    if (n < 3) {
        throw ValidationError("evolution grid needs at least 3 points");
    }
    if (config.boundary == Boundary::Absorbing && !(config.sponge_fraction > 0.0 && config.sponge_fraction < 0.5)) {
        throw ValidationError("sponge fraction must lie in (0, 0.5)");
    }
}

// Solver for a constant tridiagonal system with uniform off-diagonal `off`
// and diagonal `diag`; the periodic variant adds corner entries equal to `off`
// and is handled by Sherman-Morrison.
class TridiagonalSolver {
public:
    TridiagonalSolver(std::vector<Complex> diag, Complex off, bool periodic)
        : off_(off), periodic_(periodic), n_(diag.size())
    {
        if (periodic_) {
            // A = B + u v^T with u = (gamma, 0, ..., off), v = (1, 0, ..., off/gamma).
            gamma_ = -diag[0];
            diag[0] -= gamma_;
            diag[n_ - 1] -= off_ * off_ / gamma_;
        }
        factor(diag);
        if (periodic_) {
            std::vector<Complex> u(n_, Complex{});
            u[0] = gamma_;
            u[n_ - 1] = off_;
            z_ = u;
            solve_plain(z_);
        }
    }

    void solve(std::vector<Complex>& rhs) const
    {
        solve_plain(rhs);
        if (periodic_) {
            const Complex vy = rhs[0] + off_ / gamma_ * rhs[n_ - 1];
            const Complex vz = z_[0] + off_ / gamma_ * z_[n_ - 1];
            const Complex f = vy / (1.0 + vz);
            for (std::size_t i = 0; i < n_; ++i) {
                rhs[i] -= f * z_[i];
            }
        }
    }

private:
    void factor(const std::vector<Complex>& diag)
    {
        cprime_.resize(n_);
        inv_denom_.resize(n_);
        Complex denom = diag[0];
        inv_denom_[0] = 1.0 / denom;
        cprime_[0] = off_ * inv_denom_[0];
        for (std::size_t i = 1; i < n_; ++i) {
            denom = diag[i] - off_ * cprime_[i - 1];
            if (std::abs(denom) == 0.0) {
                throw NumericalError("singular tridiagonal system");
            }
            inv_denom_[i] = 1.0 / denom;
            cprime_[i] = off_ * inv_denom_[i];
        }
    }

    void solve_plain(std::vector<Complex>& d) const
    {
        d[0] *= inv_denom_[0];
        for (std::size_t i = 1; i < n_; ++i) {
            d[i] = (d[i] - off_ * d[i - 1]) * inv_denom_[i];
        }
        for (std::size_t i = n_ - 1; i-- > 0;) {
            d[i] -= cprime_[i] * d[i + 1];
        }
    }

    Complex off_;
    bool periodic_;
    std::size_t n_;
    Complex gamma_{};
    std::vector<Complex> cprime_;
    std::vector<Complex> inv_denom_;
    std::vector<Complex> z_;
};

bool keep_snapshot(const EvolutionConfig& config, std::size_t step)
{
    return step == config.n_steps || (config.snapshot_every > 0 && step % config.snapshot_every == 0);
}

// <k> and <k^2> of a field from central differences (Dirichlet ends).
std::pair<double, double> wavenumber_moments(const WaveField& f)
{
    const std::size_t n = f.psi.size();
    const double dx = f.grid.spacing();
    double k1 = 0.0;
    double k2 = 0.0;
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex left = i > 0 ? f.psi[i - 1] : Complex{};
        const Complex right = i + 1 < n ? f.psi[i + 1] : Complex{};
        const Complex d = (right - left) / (2.0 * dx);
        k1 += std::imag(std::conj(f.psi[i]) * d);
        k2 += std::norm(d);
        w += std::norm(f.psi[i]);
    }
    return {k1 / w, k2 / w};
}

}  // namespace

double significant_wavenumber(const WaveField& f)
{
    const auto [k1, k2] = wavenumber_moments(f);
    return std::abs(k1) + 4.0 * std::sqrt(std::max(0.0, k2 - k1 * k1));
}

std::vector<WaveField> schrodinger_evolve(const WaveField& psi0, const core::PotentialProfile& profile,
                                          const core::Particle& particle, const EvolutionConfig& config)
{
    const std::size_t n = psi0.psi.size();
    if (n != psi0.grid.size()) {
        throw ValidationError("wave field samples do not match its grid");
    }
    check_config(config, n);
    const double norm0 = psi0.norm();
    if (std::abs(norm0 - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg << "initial wave function is not normalized (norm = " << norm0 << ")";
        throw ValidationError(msg.str());
    }
    const double dx = psi0.grid.spacing();
    const double k_max = significant_wavenumber(psi0);
    if (k_max * dx > 2.0 * std::numbers::pi / 16.0) {
        std::ostringstream msg;
        msg << "grid does not resolve the initial field: shortest wavelength " << 2.0 * std::numbers::pi / k_max
            << " spans " << 2.0 * std::numbers::pi / (k_max * dx) << " points (need 16)";
        throw NumericalError(msg.str());
    }

    const double m = particle.rest_mass();
    const std::vector<double> v = potential_on(psi0.grid, profile);
    std::vector<double> w(n, 0.0);
    if (config.boundary == Boundary::Absorbing) {
        double strength = config.sponge_strength;
        if (strength <= 0.0) {
            const auto [k1, k2] = wavenumber_moments(psi0);
            (void)k1;
            strength = std::max(k2 / (2.0 * m), 1e-3 / (m * dx * dx * static_cast<double>(n)));
        }
        w = sponge_profile(psi0.grid, config.sponge_fraction, strength);
    }

    const Complex half_step{0.0, 0.5 * config.dt};
    const double kin = 1.0 / (m * dx * dx);
    const Complex off_h{-0.5 * kin, 0.0};
    std::vector<Complex> h_diag(n);
    std::vector<Complex> lhs_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        h_diag[i] = Complex{v[i] + kin, -w[i]};
        lhs_diag[i] = 1.0 + half_step * h_diag[i];
    }
    const bool periodic = config.boundary == Boundary::Periodic;
    const TridiagonalSolver solver(lhs_diag, half_step * off_h, periodic);
    const Complex rest = config.rest_phase ? std::polar(1.0, -particle.rest_frequency() * config.dt) : Complex{1.0};

    std::vector<WaveField> out;
    out.push_back(psi0);
    WaveField cur = psi0;
    std::vector<Complex> rhs(n);
    for (std::size_t step = 1; step <= config.n_steps; ++step) {
        for (std::size_t i = 0; i < n; ++i) {
            Complex nb{};
            if (i > 0) {
                nb += cur.psi[i - 1];
            } else if (periodic) {
                nb += cur.psi[n - 1];
            }
            if (i + 1 < n) {
                nb += cur.psi[i + 1];
            } else if (periodic) {
                nb += cur.psi[0];
            }
            rhs[i] = cur.psi[i] - half_step * (h_diag[i] * cur.psi[i] + off_h * nb);
        }
        solver.solve(rhs);
        for (std::size_t i = 0; i < n; ++i) {
            cur.psi[i] = rhs[i] * rest;
            if (!std::isfinite(cur.psi[i].real()) || !std::isfinite(cur.psi[i].imag())) {
                throw NumericalError("non-finite wave function during Schrodinger evolution");
            }
        }
        cur.t = psi0.t + config.dt * static_cast<double>(step);
        if (keep_snapshot(config, step)) {
            out.push_back(cur);
        }
    }
    return out;
}

double klein_gordon_max_dt(double dx, double max_cutoff)
{
    // Leapfrog stability for phi_tt = D2 phi - Omega^2 phi needs
    // dt^2 (4/dx^2 + Omega^2) <= 4; the light-cone CFL dt <= dx is stricter
    // unless the cutoff is resolved poorly.
    const double stability = 2.0 / std::sqrt(4.0 / (dx * dx) + max_cutoff * max_cutoff);
    return std::min(dx, stability);
}

std::vector<Complex> positive_frequency_rate(const std::vector<Complex>& phi, const core::UniformGrid& grid,
                                             double cutoff)
{
    const std::size_t n = phi.size();
    if (n != grid.size() || n < 2) {
        throw ValidationError("field samples do not match the grid");
    }
    std::vector<double> data(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        data[2 * i] = phi[i].real();
        data[2 * i + 1] = phi[i].imag();
    }
    gsl_fft_complex_wavetable* table = gsl_fft_complex_wavetable_alloc(n);
    gsl_fft_complex_workspace* work = gsl_fft_complex_workspace_alloc(n);
    gsl_fft_complex_forward(data.data(), 1, n, table, work);
    const double length = grid.spacing() * static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double index = j <= n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
        const double k = 2.0 * std::numbers::pi * index / length;
        const Complex c{data[2 * j], data[2 * j + 1]};
        const Complex r = Complex{0.0, -std::hypot(cutoff, k)} * c;
        data[2 * j] = r.real();
        data[2 * j + 1] = r.imag();
    }
    gsl_fft_complex_inverse(data.data(), 1, n, table, work);
    gsl_fft_complex_workspace_free(work);
    gsl_fft_complex_wavetable_free(table);
    std::vector<Complex> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = Complex{data[2 * i], data[2 * i + 1]};
    }
    return out;
}

std::vector<KGField> klein_gordon_evolve(const std::vector<Complex>& phi0, const std::vector<Complex>& phi_dot0,
                                         const core::UniformGrid& grid, const core::PotentialProfile& profile,
                                         const core::Particle& particle, const EvolutionConfig& config)
{
    const std::size_t n = grid.size();
    if (phi0.size() != n || phi_dot0.size() != n) {
        throw ValidationError("field samples do not match the grid");
    }
    check_config(config, n);
    const double dx = grid.spacing();
    const double dt = config.dt;
    const std::vector<double> v = potential_on(grid, profile);
    std::vector<double> omega2(n);
    double max_cutoff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = particle.rest_frequency() + v[i];
        omega2[i] = c * c;
        max_cutoff = std::max(max_cutoff, std::abs(c));
    }
    const double dt_max = klein_gordon_max_dt(dx, max_cutoff);
    if (dt > dt_max) {
        std::ostringstream msg;
        msg << "CFL violation: dt = " << dt << " exceeds the stable limit " << dt_max << " (dx/c = " << dx << ")";
        throw NumericalError(msg.str());
    }
    const bool periodic = config.boundary == Boundary::Periodic;
    std::vector<double> gamma(n, 0.0);
    if (config.boundary == Boundary::Absorbing) {
        const double strength = config.sponge_strength > 0.0 ? config.sponge_strength : max_cutoff;
        gamma = sponge_profile(grid, config.sponge_fraction, strength);
    }

    // A phi = -D2 phi + Omega^2 phi, the operator in phi_tt = -A phi.
    auto apply = [&](const std::vector<Complex>& f, std::vector<Complex>& out) {
        const double inv = 1.0 / (dx * dx);
        for (std::size_t i = 0; i < n; ++i) {
            Complex left{};
            Complex right{};
            if (i > 0) {
                left = f[i - 1];
            } else if (periodic) {
                left = f[n - 1];
            }
            if (i + 1 < n) {
                right = f[i + 1];
            } else if (periodic) {
                right = f[0];
            }
            out[i] = -(left - 2.0 * f[i] + right) * inv + omega2[i] * f[i];
        }
    };
    // Conserved leapfrog energy between levels a (older) and b (newer).
    std::vector<Complex> scratch(n);
    auto energy = [&](const std::vector<Complex>& a, const std::vector<Complex>& b) {
        apply(a, scratch);
        double kinetic = 0.0;
        double potential = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            kinetic += std::norm((b[i] - a[i]) / dt);
            potential += std::real(std::conj(b[i]) * scratch[i]);
        }
        return 0.5 * (kinetic + potential) * dx;
    };

    std::vector<Complex> prev = phi0;
    std::vector<Complex> cur(n);
    std::vector<Complex> next(n);
    std::vector<Complex> force(n);
    apply(prev, force);
    for (std::size_t i = 0; i < n; ++i) {
        cur[i] = prev[i] + dt * phi_dot0[i] - 0.5 * dt * dt * force[i];
    }

    std::vector<KGField> out;
    KGField first{grid, phi0, phi_dot0, 0.0, energy(prev, cur)};
    out.push_back(first);
    for (std::size_t step = 1; step <= config.n_steps; ++step) {
        apply(cur, force);
        for (std::size_t i = 0; i < n; ++i) {
            const double g = gamma[i] * dt;
            next[i] = (2.0 * cur[i] - (1.0 - g) * prev[i] - dt * dt * force[i]) / (1.0 + g);
            if (!std::isfinite(next[i].real()) || !std::isfinite(next[i].imag())) {
                throw NumericalError("non-finite field during Klein-Gordon evolution");
            }
        }
        if (keep_snapshot(config, step)) {
            KGField f;
            f.grid = grid;
            f.phi = cur;
            f.phi_dot.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                f.phi_dot[i] = (next[i] - prev[i]) / (2.0 * dt);
            }
            f.t = dt * static_cast<double>(step);
            f.energy = energy(cur, next);
            out.push_back(std::move(f));
        }
        std::swap(prev, cur);
        std::swap(cur, next);
    }
    return out;
}

}  // namespace guideq::solvers
