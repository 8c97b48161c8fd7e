#pragma once

#include <complex>
#include <vector>

#include "guideq/core/grid.hpp"

namespace guideq::solvers {

using Complex = std::complex<double>;

/// Complex wave function sampled on a uniform grid at time t.
struct WaveField {
    core::UniformGrid grid;
    std::vector<Complex> psi;
    double t = 0.0;

    /// Integral of |psi|^2 dx (rectangle rule on the grid).
    double norm() const;
    double probability(double x_min, double x_max) const;
    double mean_position() const;
    /// Standard deviation of x under |psi|^2.
    double position_spread() const;
    std::vector<double> density() const;
};

/// Klein-Gordon field and its time derivative at time t.
struct KGField {
    core::UniformGrid grid;
    std::vector<Complex> phi;
    std::vector<Complex> phi_dot;
    double t = 0.0;
    double energy = 0.0;  // discrete conserved energy of the leapfrog scheme
};

/// Normalized Gaussian packet exp(-(x-x0)^2 / (4 sigma^2) + i k0 x); sigma is
/// the standard deviation of |psi|^2.
WaveField gaussian_packet(const core::UniformGrid& grid, double x0, double sigma, double k0);

/// Discrete Fourier amplitude: sum of f(x) exp(-i k x) dx over the grid.
Complex fourier_component(const std::vector<Complex>& f, const core::UniformGrid& grid, double k);

}  // namespace guideq::solvers
