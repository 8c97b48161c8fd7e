#include "guideq/orbits/bohr.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "guideq/core/units.hpp"
#include "guideq/errors.hpp"
#include "guideq/io/csv.hpp"

namespace guideq::orbits {

namespace {

void require_level(int n)
{
    if (n < 1) {
        throw DomainError("principal quantum number must be >= 1 (got " + std::to_string(n) + ")");
    }
}

CircularOrbit orbit_at_speed(const CoulombSystem& sys, double v)
{
    CircularOrbit o;
    o.speed = v;
    o.radius = sys.coupling / (sys.mass * v * v);
    o.period = 2.0 * std::numbers::pi * o.radius / v;
    o.angular_momentum = sys.mass * v * o.radius;
    o.energy = -0.5 * sys.mass * v * v;
    return o;
}

}  // namespace

double CoulombSystem::planck() const
{
    return 2.0 * std::numbers::pi * hbar;
}

CircularOrbit classical_orbit(const CoulombSystem& sys, double radius)
{
    if (!(radius > 0.0)) {
        throw DomainError("orbit radius must be positive");
    }
    CircularOrbit o;
    o.radius = radius;
    o.speed = std::sqrt(sys.coupling / (sys.mass * radius));
    o.period = 2.0 * std::numbers::pi * radius / o.speed;
    o.angular_momentum = sys.mass * o.speed * radius;
    o.energy = -sys.coupling / (2.0 * radius);
    return o;
}

CircularOrbit quantize_nonrelativistic(const CoulombSystem& sys, int n)
{
    require_level(n);
    const double nn = static_cast<double>(n);
    CircularOrbit o;
    o.n = n;
    o.radius = nn * nn * sys.hbar * sys.hbar / (sys.mass * sys.coupling);
    o.speed = sys.coupling / (nn * sys.hbar);
    o.period = 2.0 * std::numbers::pi * o.radius / o.speed;
    o.angular_momentum = nn * sys.hbar;
    o.energy = -sys.mass * sys.coupling * sys.coupling / (2.0 * sys.hbar * sys.hbar * nn * nn);
    return o;
}

CircularOrbit quantize_relativistic(const CoulombSystem& sys, int n)
{
    require_level(n);
    const double target = static_cast<double>(n) * sys.planck();
    // Left side of the condition at speed v under force balance; decreasing in v.
    auto lhs = [&](double v) {
        const double r = sys.coupling / (sys.mass * v * v);
        const double period = 2.0 * std::numbers::pi * r / v;
        const double beta = v / sys.c;
        return sys.mass * v * v * period * std::sqrt((1.0 - beta) * (1.0 + beta));
    };
    // lhs -> inf as v -> 0 and -> 0 as v -> c.
    double lo = sys.c * 1e-60;
    double hi = sys.c;
    if (!(lhs(lo) > target && lhs(hi * (1.0 - 1e-16)) < target)) {
        throw NumericalError("relativistic orbit condition not bracketed for n = " + std::to_string(n));
    }
    for (int it = 0; it < 2000 && hi - lo > 1e-15 * hi; ++it) {
        // Geometric steps while the bracket spans decades, then plain bisection.
        const double mid = hi / lo > 4.0 ? std::sqrt(lo) * std::sqrt(hi) : 0.5 * (lo + hi);
        if (lhs(mid) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    CircularOrbit o = orbit_at_speed(sys, 0.5 * (lo + hi));
    o.n = n;
    return o;
}

double orbit_zigzag_period(const CoulombSystem& sys, double v)
{
    const double beta = v / sys.c;
    if (!(beta >= 0.0 && beta < 1.0)) {
        throw DomainError("orbit speed must satisfy 0 <= v < c");
    }
    return sys.planck() * v / (sys.mass * sys.c * sys.c * std::sqrt((1.0 - beta) * (1.0 + beta)));
}

OvertakeEvent overtake_time(const CoulombSystem& sys, const CircularOrbit& orbit)
{
    const double v = orbit.speed;
    const double c2 = sys.c * sys.c;
    if (!(v >= 0.0 && v < sys.c)) {
        throw DomainError("overtaking requires 0 <= v < c");
    }
    OvertakeEvent ev;
    ev.tau = orbit.period * v * v / (c2 - v * v);
    ev.tau_approx = v * v * orbit.period / c2;
    ev.ratio = ev.tau_approx > 0.0 ? ev.tau / ev.tau_approx : 1.0;
    ev.overtake_distance = v * ev.tau;
    if (v > 0.0) {
        const double phase_distance = c2 / v * ev.tau;
        ev.overtake_residual = std::abs(phase_distance - (ev.tau + orbit.period) * v) / phase_distance;
        ev.zigzag_count = v * ev.tau_approx / orbit_zigzag_period(sys, v);
    }
    return ev;
}

double zigzag_consistency(const CoulombSystem& sys, const CircularOrbit& orbit, int n)
{
    const auto ev = overtake_time(sys, orbit);
    const double length = orbit_zigzag_period(sys, orbit.speed);
    if (n <= 0) {
        n = std::max(1, static_cast<int>(std::lround(ev.zigzag_count)));
    }
    const double nl = static_cast<double>(n) * length;
    return std::abs(orbit.speed * ev.tau_approx - nl) / nl;
}

double transition_frequency(const CoulombSystem& sys, const CircularOrbit& upper,
                            const CircularOrbit& lower)
{
    return (upper.energy - lower.energy) / sys.hbar;
}

std::vector<LevelRow> level_table(const CoulombSystem& sys, int n_max)
{
    require_level(n_max);
    const double metre = core::natural_unit_in_si(core::Dimension::Length);
    std::vector<LevelRow> rows;
    for (int n = 1; n <= n_max; ++n) {
        const auto nr = quantize_nonrelativistic(sys, n);
        const auto rel = quantize_relativistic(sys, n);
        const auto ev = overtake_time(sys, rel);
        LevelRow row;
        row.n = n;
        row.radius_m = nr.radius * metre;
        row.speed_over_c = nr.speed / sys.c;
        row.energy_ev = core::natural_to_ev(nr.energy);
        row.angular_momentum_over_hbar = nr.angular_momentum / sys.hbar;
        row.tau_over_period = ev.tau / rel.period;
        row.relativistic_shift = (rel.radius - nr.radius) / nr.radius;
        rows.push_back(row);
    }
    return rows;
}

void write_level_table_csv(std::span<const LevelRow> rows, const std::filesystem::path& path)
{
    io::CsvWriter csv(path);
    csv.header({"n", "r", "v_g/c", "E_eV", "M/hbar", "tau/T", "relativistic_shift"});
    for (const auto& r : rows) {
        csv.row({static_cast<double>(r.n), r.radius_m, r.speed_over_c, r.energy_ev,
                 r.angular_momentum_over_hbar, r.tau_over_period, r.relativistic_shift});
    }
}

}  // namespace guideq::orbits
