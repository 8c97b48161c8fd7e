#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace guideq::core {

/// Uniformly spaced, strictly increasing sample positions.
class UniformGrid {
public:
    UniformGrid() = default;
    UniformGrid(double x_min, double x_max, std::size_t n);

    /// Adopts explicit sample positions; throws ValidationError unless they
    /// are strictly increasing with uniform spacing (1e-12 relative).
    static UniformGrid from_samples(std::span<const double> x);

    std::size_t size() const { return n_; }
    double spacing() const { return dx_; }
    double front() const { return x0_; }
    double back() const { return x0_ + dx_ * static_cast<double>(n_ - 1); }
    double operator[](std::size_t i) const { return x0_ + dx_ * static_cast<double>(i); }
    bool contains(double x) const { return x >= front() && x <= back(); }

    std::vector<double> points() const;

    /// Grid with every other point removed (same span when size is odd).
    UniformGrid coarsened() const;

private:
    double x0_ = 0.0;
    double dx_ = 1.0;
    std::size_t n_ = 0;
};

}  // namespace guideq::core
