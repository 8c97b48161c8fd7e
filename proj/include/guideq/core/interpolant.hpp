#pragma once

#include <memory>
#include <span>
#include <vector>

#include "guideq/core/grid.hpp"

namespace guideq::core {

enum class Interpolation { Linear, CubicSpline };

/// Immutable 1-D interpolant over a uniform grid. Cheap to copy; safe to
/// evaluate concurrently. Evaluation outside the grid throws DomainError.
class Interpolant {
public:
    Interpolant() = default;
    Interpolant(UniformGrid grid, std::vector<double> values,
                Interpolation kind = Interpolation::CubicSpline);

    const UniformGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    Interpolation kind() const { return kind_; }

    double operator()(double x) const { return value(x); }
    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

private:
    void check_range(double x) const;

    UniformGrid grid_;
    std::vector<double> values_;
    Interpolation kind_ = Interpolation::CubicSpline;
    struct Spline;
    std::shared_ptr<const Spline> spline_;
};

}  // namespace guideq::core
