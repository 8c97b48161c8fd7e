#include "guideq/core/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "guideq/errors.hpp"

namespace guideq::core {

UniformGrid::UniformGrid(double x_min, double x_max, std::size_t n)
    : x0_(x_min), n_(n)
{
    if (n < 2) {
        throw ValidationError("grid needs at least two points");
    }
    if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
        throw ValidationError("grid bounds must be finite with x_max > x_min");
    }
    dx_ = (x_max - x_min) / static_cast<double>(n - 1);
}

UniformGrid UniformGrid::from_samples(std::span<const double> x)
{
    if (x.size() < 2) {
        throw ValidationError("grid needs at least two points");
    }
    UniformGrid grid(x.front(), x.back(), x.size());
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i > 0 && !(x[i] > x[i - 1])) {
            throw ValidationError("grid not strictly increasing at index " + std::to_string(i));
        }
        const double tol = 1e-12 * grid.dx_ + 8.0 * eps * std::abs(x[i]);
        if (std::abs(x[i] - grid[i]) > tol) {
            throw ValidationError("grid spacing not uniform at x = " + std::to_string(x[i]));
        }
    }
    return grid;
}

std::vector<double> UniformGrid::points() const
{
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        out[i] = (*this)[i];
    }
    return out;
}

UniformGrid UniformGrid::coarsened() const
{
    UniformGrid g;
    g.x0_ = x0_;
    g.dx_ = 2.0 * dx_;
    g.n_ = (n_ + 1) / 2;
    return g;
}

}  // namespace guideq::core
