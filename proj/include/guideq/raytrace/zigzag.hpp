#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "guideq/core/geometry.hpp"
#include "guideq/core/particle.hpp"

namespace guideq::raytrace {

/// One ray sample. The guide occupies 0 <= y <= a(x); phi is measured from
/// the transverse direction, so the axial speed is c sin(phi).
struct RayState {
    double x = 0.0;
    double y = 0.0;
    int transverse_sign = -1;  // +1 moving towards the top wall y = a(x)
    int axial_sign = +1;
    double phi = 0.0;
    double t = 0.0;
    double clock_phase = 0.0;  // accumulated cutoff * cos(phi) * dt
};

enum class TraceOutcome { Completed, ExitedDomain, TurningPoint };

struct TurningEvent {
    double x = 0.0;
    double t = 0.0;
};

struct ZigzagTrace {
    double omega = 0.0;
    std::vector<RayState> states;
    std::vector<std::size_t> reflections;  // indices into states of wall hits
    std::vector<TurningEvent> turning_points;
    TraceOutcome outcome = TraceOutcome::Completed;
    double effective_velocity = 0.0;  // (x_end - x_start) / (t_end - t_start)
};

struct TraceOptions {
    /// Sub-segment refinement threshold on the relative width change.
    double max_width_change = 1e-3;
    /// Sub-segment refinement threshold on the change of sin(phi).
    double max_sin_change = 1e-3;
    /// At a turning point, reflect the axial motion and continue; otherwise
    /// stop and report the turning point.
    bool reverse_at_turning_point = true;
    std::size_t max_segments = 20'000'000;
};

/// Zigzag angle phi = arcsin(v_g / c) for the local dispersion at x.
/// Throws DomainError when omega is at or below the local cutoff.
double local_angle(double omega, const core::GuideGeometry& geometry, double x);

/// Default launch: y = a(x)/2, moving towards the bottom wall, positive axial direction.
RayState initial_state(const core::GuideGeometry& geometry, double omega, double x);

/// Advances the ray at speed c with specular wall reflections; phi is
/// re-evaluated from the local dispersion at every reflection and at every
/// refinement sub-step.
ZigzagTrace trace(double omega, const core::GuideGeometry& geometry, const RayState& initial,
                  double duration, const TraceOptions& options = {});

/// Zigzag period L = lambda tan(phi) with lambda = 2 pi c / cutoff (free guide: the
/// Compton wavelength). Throws DomainError for v_g outside [0, c).
double zigzag_period(const core::Particle& particle, double group_velocity);
double zigzag_period_at_cutoff(double cutoff, double group_velocity);

/// Moving-clock frequency omega_0 cos(phi) = omega_0 sqrt(1 - (v_g/c)^2).
double clock_frequency(const core::Particle& particle, double group_velocity);

struct TraceStatistics {
    std::size_t reflection_count = 0;
    double period_length = 0.0;      // 2 x mean axial advance between reflections
    double bounce_frequency = 0.0;   // 2 pi / (2 x mean time between reflections)
    std::vector<double> half_period_velocity;  // mean dx/dt between consecutive reflections
    std::vector<double> half_period_x;         // midpoints of those intervals
};

TraceStatistics trace_statistics(const ZigzagTrace& trace);

/// CSV with columns t, x, y, phi, v_eff (instantaneous axial velocity).
void write_trace_csv(const ZigzagTrace& trace, const std::filesystem::path& path);

}  // namespace guideq::raytrace
