#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "guideq/core/interpolant.hpp"

namespace guideq::core {

/// Sampled potential energy V(x) on a uniform grid (natural units).
/// Finite everywhere; hard walls are expressed as large finite values.
class PotentialProfile {
public:
    PotentialProfile(UniformGrid grid, std::vector<double> values,
                     Interpolation interpolation = Interpolation::CubicSpline);

    /// Samples an analytic V(x) on the grid.
    static PotentialProfile sample(const UniformGrid& grid, const std::function<double(double)>& v,
                                   Interpolation interpolation = Interpolation::CubicSpline);

    const UniformGrid& grid() const { return field_.grid(); }
    std::span<const double> values() const { return field_.values(); }
    Interpolation interpolation() const { return field_.kind(); }
    const Interpolant& interpolant() const { return field_; }

    double operator()(double x) const { return field_.value(x); }
    double gradient(double x) const { return field_.derivative(x); }
    double curvature(double x) const { return field_.second_derivative(x); }

    double min_value() const;
    double max_value() const;

private:
    Interpolant field_;
};

/// Reads a two-column CSV (x, V) with a header row. An optional comment line
/// `# units: <length>,<energy>` declares the units of the columns; without it
/// the values are taken as natural units.
PotentialProfile load_profile_csv(const std::filesystem::path& path,
                                  Interpolation interpolation = Interpolation::CubicSpline);

}  // namespace guideq::core
