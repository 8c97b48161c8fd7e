#include "guideq/core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "guideq/core/dispersion.hpp"
#include "guideq/errors.hpp"

namespace guideq::core {

GuideGeometry::GuideGeometry(UniformGrid grid, std::vector<double> cutoff,
                             Interpolation interpolation)
{
    width_.resize(cutoff.size());
    for (std::size_t i = 0; i < cutoff.size(); ++i) {
        if (!(cutoff[i] > 0.0)) {
            throw DomainError("guide cutoff not positive at x = " + std::to_string(grid[i]));
        }
        width_[i] = width_from_cutoff(cutoff[i]);
    }
    cutoff_ = Interpolant(std::move(grid), std::move(cutoff), interpolation);
}

double GuideGeometry::cutoff_at(double x) const
{
    const double w = cutoff_.value(x);
    if (!(w > 0.0)) {
        throw DomainError("interpolated guide cutoff not positive at x = " + std::to_string(x));
    }
    return w;
}

double GuideGeometry::width_at(double x) const
{
    return width_from_cutoff(cutoff_at(x));
}

double GuideGeometry::max_cutoff() const
{
    const auto c = cutoff();
    return *std::max_element(c.begin(), c.end());
}

GuideGeometry potential_to_geometry(const Particle& particle, const PotentialProfile& profile)
{
    const auto& grid = profile.grid();
    const auto v = profile.values();
    std::vector<double> cutoff(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            cutoff[i] = cutoff_with_potential(particle, v[i]);
        } catch (const DomainError& e) {
            throw DomainError("geometry undefined at x = " + std::to_string(grid[i]) + ": " + e.what());
        }
    }
    return GuideGeometry(grid, std::move(cutoff), profile.interpolation());
}

GuideGeometry uniform_geometry(double cutoff, double x_min, double x_max, std::size_t n)
{
    return GuideGeometry(UniformGrid(x_min, x_max, n), std::vector<double>(n, cutoff),
                         Interpolation::Linear);
}

WkbValidity wkb_validity(const GuideGeometry& geometry, double omega, double threshold)
{
    const auto& grid = geometry.grid();
    const auto a = geometry.width();
    const auto cutoff = geometry.cutoff();
    const std::size_t n = grid.size();
    const double dx = grid.spacing();

    WkbValidity out;
    out.metric.assign(n, std::numeric_limits<double>::quiet_NaN());
    out.below_cutoff.assign(n, false);
    out.non_wkb.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const Wavenumber k = k_of_omega(omega, cutoff[i]);
        if (k.evanescent || k.value == 0.0) {
            out.below_cutoff[i] = true;
            continue;
        }
        double slope = 0.0;
        if (i == 0) {
            slope = (a[1] - a[0]) / dx;
        } else if (i + 1 == n) {
            slope = (a[n - 1] - a[n - 2]) / dx;
        } else {
            slope = (a[i + 1] - a[i - 1]) / (2.0 * dx);
        }
        const double guide_wavelength = 2.0 * std::numbers::pi / k.value;
        out.metric[i] = std::abs(slope) * guide_wavelength / a[i];
        out.non_wkb[i] = out.metric[i] >= threshold;
        out.max_metric = std::max(out.max_metric, out.metric[i]);
    }
    return out;
}

}  // namespace guideq::core
