#include "guideq/raytrace/zigzag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "guideq/core/dispersion.hpp"
#include "guideq/errors.hpp"
#include "guideq/io/csv.hpp"

namespace guideq::raytrace {

using core::GuideGeometry;

namespace {

void require_subluminal(double v)
{
    if (!(v >= 0.0 && v < 1.0)) {
        throw DomainError("group velocity must satisfy 0 <= v_g < c (got " + std::to_string(v) + ")");
    }
}

// sin(phi) at x, or a negative value when x is at or beyond a turning point.
double sin_angle(double omega, const GuideGeometry& g, double x)
{
    const auto k = core::k_of_omega(omega, g.cutoff_at(x));
    if (k.evanescent || k.value == 0.0) {
        return -1.0;
    }
    return k.value / omega;
}

struct Segment {
    double dt = 0.0;
    double x = 0.0;
    double y = 0.0;
    bool hits_wall = false;
};

}  // namespace

double local_angle(double omega, const GuideGeometry& geometry, double x)
{
    const double s = sin_angle(omega, geometry, x);
    if (s <= 0.0) {
        throw DomainError("below cutoff at x = " + std::to_string(x) +
                          " (classically forbidden region)");
    }
    return std::asin(std::min(s, 1.0));
}

RayState initial_state(const GuideGeometry& geometry, double omega, double x)
{
    RayState s;
    s.x = x;
    s.y = 0.5 * geometry.width_at(x);
    s.phi = local_angle(omega, geometry, x);
    return s;
}

ZigzagTrace trace(double omega, const GuideGeometry& geometry, const RayState& initial,
                  double duration, const TraceOptions& options)
{
    if (!(duration > 0.0)) {
        throw DomainError("trace duration must be positive");
    }
    const double x_lo = geometry.grid().front();
    const double x_hi = geometry.grid().back();
    if (initial.x < x_lo || initial.x > x_hi) {
        throw DomainError("initial ray position outside the guide");
    }
    const double a0 = geometry.width_at(initial.x);
    if (initial.y < 0.0 || initial.y > a0) {
        throw DomainError("initial ray lies outside the guide walls");
    }

    ZigzagTrace out;
    out.omega = omega;
    RayState cur = initial;
    cur.phi = local_angle(omega, geometry, cur.x);
    out.states.push_back(cur);
    const double t_end = initial.t + duration;

    // Position after flying time tau along the current direction.
    auto advance = [&](double tau, double sphi, double cphi) {
        Segment s;
        s.dt = tau;
        s.x = cur.x + cur.axial_sign * sphi * tau;
        s.y = cur.y + cur.transverse_sign * cphi * tau;
        return s;
    };

    std::size_t segments = 0;
    while (cur.t < t_end) {
        if (++segments > options.max_segments) {
            throw NumericalError("ray trace exceeded the segment budget");
        }
        const double sphi = std::sin(cur.phi);
        const double cphi = std::cos(cur.phi);
        const double a = geometry.width_at(cur.x);

        // Time to the wall we are heading for, treating the width as locally
        // constant, then corrected by Newton steps on the moving top wall.
        double tau = cphi > 0.0
                         ? (cur.transverse_sign < 0 ? cur.y : a - cur.y) / cphi
                         : std::numeric_limits<double>::infinity();
        if (cur.transverse_sign > 0 && std::isfinite(tau)) {
            for (int it = 0; it < 4; ++it) {
                const double xe = std::clamp(cur.x + cur.axial_sign * sphi * tau, x_lo, x_hi);
                const double f = cur.y + cphi * tau - geometry.width_at(xe);
                const double h = 1e-7 * std::max(a, 1e-300);
                const double xh = std::clamp(xe + h, x_lo, x_hi);
                const double slope = xh > xe ? (geometry.width_at(xh) - geometry.width_at(xe)) / (xh - xe) : 0.0;
                const double df = cphi - slope * cur.axial_sign * sphi;
                if (df <= 0.0) {
                    break;
                }
                const double next = tau - f / df;
                if (!(next >= 0.0)) {
                    break;
                }
                if (std::abs(next - tau) <= 1e-15 * tau) {
                    tau = next;
                    break;
                }
                tau = next;
            }
        }
        bool to_wall = true;
        bool ends = false;
        if (cur.t + tau >= t_end) {
            tau = t_end - cur.t;
            to_wall = false;
            ends = true;
        }
        bool exits = false;
        if (sphi > 0.0) {
            const double room = cur.axial_sign > 0 ? x_hi - cur.x : cur.x - x_lo;
            if (sphi * tau >= room) {
                tau = room / sphi;
                to_wall = false;
                exits = true;
                ends = false;
            }
        }

        // Refine until the guide is nearly uniform over the segment.
        bool turning = false;
        while (true) {
            const Segment s = advance(tau, sphi, cphi);
            const double a_end = geometry.width_at(std::clamp(s.x, x_lo, x_hi));
            const double s_end = sin_angle(omega, geometry, std::clamp(s.x, x_lo, x_hi));
            if (s_end <= 0.0) {
                // Bracket the turning point on [tau_ok, tau].
                double lo = 0.0;
                double hi = tau;
                for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (sin_angle(omega, geometry, advance(mid, sphi, cphi).x) > 0.0) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                tau = lo;
                turning = true;
                to_wall = false;
                exits = false;
                ends = false;
                break;
            }
            const bool width_ok = std::abs(a_end - a) <= options.max_width_change * a;
            const bool angle_ok = std::abs(s_end - sphi) <= options.max_sin_change;
            if (width_ok && angle_ok) {
                break;
            }
            tau *= 0.5;
            to_wall = false;
            exits = false;
            ends = false;
        }

        Segment s = advance(tau, sphi, cphi);
        if (exits) {
            s.x = cur.axial_sign > 0 ? x_hi : x_lo;
        }
        const double a_end = geometry.width_at(s.x);
        if (to_wall) {
            s.y = cur.transverse_sign < 0 ? 0.0 : a_end;
        }
        s.y = std::clamp(s.y, 0.0, a_end);
        const bool at_wall = to_wall || (cur.transverse_sign > 0 && s.y >= a_end) ||
                             (cur.transverse_sign < 0 && s.y <= 0.0);
        // Path length fixes the elapsed time, so the ray speed is exactly c.
        const double dt = std::hypot(s.x - cur.x, s.y - cur.y);
        if (dt <= 1e-15 * (1.0 + std::abs(cur.t)) && !at_wall && !exits && !turning && !ends) {
            // Step-size underflow: the ray has stalled at a turning point.
            out.turning_points.push_back({cur.x, cur.t});
            out.outcome = TraceOutcome::TurningPoint;
            break;
        }

        const double cutoff_mid = geometry.cutoff_at(0.5 * (cur.x + s.x));
        RayState next = cur;
        next.x = s.x;
        next.y = s.y;
        next.t = cur.t + dt;
        next.clock_phase = cur.clock_phase + cutoff_mid * cphi * dt;
        if (at_wall) {
            next.transverse_sign = -cur.transverse_sign;
        }
        if (turning) {
            out.turning_points.push_back({next.x, next.t});
            if (!options.reverse_at_turning_point) {
                out.states.push_back(next);
                out.outcome = TraceOutcome::TurningPoint;
                break;
            }
            next.axial_sign = -cur.axial_sign;
        }
        const double s_next = sin_angle(omega, geometry, next.x);
        next.phi = s_next > 0.0 ? std::asin(std::min(s_next, 1.0)) : 0.0;
        cur = next;
        out.states.push_back(cur);
        if (at_wall) {
            out.reflections.push_back(out.states.size() - 1);
        }
        if (exits) {
            out.outcome = TraceOutcome::ExitedDomain;
            break;
        }
        if (ends) {
            break;
        }
    }

    const auto& first = out.states.front();
    const auto& last = out.states.back();
    out.effective_velocity = last.t > first.t ? (last.x - first.x) / (last.t - first.t) : 0.0;
    return out;
}

double zigzag_period_at_cutoff(double cutoff, double v)
{
    require_subluminal(v);
    if (!(cutoff > 0.0)) {
        throw DomainError("cutoff must be positive");
    }
    const double wavelength = 2.0 * std::numbers::pi / cutoff;
    return wavelength * v / std::sqrt(1.0 - v * v);
}

double zigzag_period(const core::Particle& particle, double v)
{
    return zigzag_period_at_cutoff(particle.rest_frequency(), v);
}

double clock_frequency(const core::Particle& particle, double v)
{
    require_subluminal(v);
    return particle.rest_frequency() * std::sqrt(1.0 - v * v);
}

TraceStatistics trace_statistics(const ZigzagTrace& trace)
{
    TraceStatistics st;
    const auto& r = trace.reflections;
    st.reflection_count = r.size();
    if (r.size() < 2) {
        return st;
    }
    double advance = 0.0;
    double elapsed = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i) {
        const auto& a = trace.states[r[i - 1]];
        const auto& b = trace.states[r[i]];
        advance += std::abs(b.x - a.x);
        elapsed += b.t - a.t;
        st.half_period_velocity.push_back((b.x - a.x) / (b.t - a.t));
        st.half_period_x.push_back(0.5 * (a.x + b.x));
    }
    const double n = static_cast<double>(r.size() - 1);
    st.period_length = 2.0 * advance / n;
    st.bounce_frequency = 2.0 * std::numbers::pi / (2.0 * elapsed / n);
    return st;
}

void write_trace_csv(const ZigzagTrace& trace, const std::filesystem::path& path)
{
    io::CsvWriter csv(path);
    csv.header({"t", "x", "y", "phi", "v_eff"});
    for (const auto& s : trace.states) {
        csv.row({s.t, s.x, s.y, s.phi, s.axial_sign * std::sin(s.phi)});
    }
}

}  // namespace guideq::raytrace
