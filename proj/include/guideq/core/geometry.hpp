#pragma once

#include <span>
#include <vector>

#include "guideq/core/interpolant.hpp"
#include "guideq/core/particle.hpp"
#include "guideq/core/potential.hpp"

namespace guideq::core {

/// Width profile of the equivalent TE10 guide: a(x) * cutoff(x) = pi c at
/// every sample. Off-grid queries interpolate the cutoff and derive the
/// width from it, so the identity holds everywhere.
class GuideGeometry {
public:
    GuideGeometry(UniformGrid grid, std::vector<double> cutoff,
                  Interpolation interpolation = Interpolation::CubicSpline);

    const UniformGrid& grid() const { return cutoff_.grid(); }
    std::span<const double> cutoff() const { return cutoff_.values(); }
    std::span<const double> width() const { return width_; }

    double cutoff_at(double x) const;
    double width_at(double x) const;
    double max_cutoff() const;

private:
    Interpolant cutoff_;
    std::vector<double> width_;
};

/// Maps V(x) to the guide: cutoff omega_0 + V/hbar and width pi c / cutoff.
/// Throws DomainError naming the first x where the cutoff is not positive.
GuideGeometry potential_to_geometry(const Particle& particle, const PotentialProfile& profile);

/// Uniform guide of the given cutoff over [x_min, x_max].
GuideGeometry uniform_geometry(double cutoff, double x_min, double x_max, std::size_t n = 2);

struct WkbValidity {
    std::vector<double> metric;        // |da/dx| * lambda_guide / a; NaN where excluded
    std::vector<bool> below_cutoff;    // excluded from the metric
    std::vector<bool> non_wkb;         // metric >= threshold
    double max_metric = 0.0;           // over evaluated points
};

/// Per-sample slowly-varying check of the guide at frequency omega. The
/// threshold only sets the `non_wkb` report flag; nothing is enforced.
WkbValidity wkb_validity(const GuideGeometry& geometry, double omega, double threshold = 1.0);

}  // namespace guideq::core
