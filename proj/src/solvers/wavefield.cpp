#include "guideq/solvers/wavefield.hpp"

#include <cmath>
#include <numbers>

namespace guideq::solvers {

double WaveField::norm() const
{
    double s = 0.0;
    for (const auto& z : psi) {
        s += std::norm(z);
    }
    return s * grid.spacing();
}

double WaveField::probability(double x_min, double x_max) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double x = grid[i];
        if (x >= x_min && x <= x_max) {
            s += std::norm(psi[i]);
        }
    }
    return s * grid.spacing();
}

double WaveField::mean_position() const
{
    double s = 0.0;
    double w = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double p = std::norm(psi[i]);
        s += p * grid[i];
        w += p;
    }
    return s / w;
}

double WaveField::position_spread() const
{
    const double mean = mean_position();
    double s = 0.0;
    double w = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double p = std::norm(psi[i]);
        const double d = grid[i] - mean;
        s += p * d * d;
        w += p;
    }
    return std::sqrt(s / w);
}

std::vector<double> WaveField::density() const
{
    std::vector<double> out(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        out[i] = std::norm(psi[i]);
    }
    return out;
}

WaveField gaussian_packet(const core::UniformGrid& grid, double x0, double sigma, double k0)
{
    WaveField f;
    f.grid = grid;
    f.psi.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = grid[i] - x0;
        f.psi[i] = std::polar(std::exp(-d * d / (4.0 * sigma * sigma)), k0 * grid[i]);
    }
    const double scale = 1.0 / std::sqrt(f.norm());
    for (auto& z : f.psi) {
        z *= scale;
    }
    return f;
}

Complex fourier_component(const std::vector<Complex>& f, const core::UniformGrid& grid, double k)
{
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < f.size(); ++i) {
        s += f[i] * std::polar(1.0, -k * grid[i]);
    }
    return s * grid.spacing();
}

}  // namespace guideq::solvers
