#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "guideq/core/units.hpp"
#include "guideq/errors.hpp"
#include "guideq/orbits/bohr.hpp"

using namespace guideq;
using namespace guideq::orbits;
using doctest::Approx;

namespace {
const double kAlpha = core::si::fine_structure;
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
double metres(double r) { return r * core::natural_unit_in_si(core::Dimension::Length); }

// v from m v^2 T sqrt(1 - v^2/c^2) = n h with force balance, solved in closed form.
double relativistic_speed_oracle(const CoulombSystem& s, int n)
{
    const double u = s.coupling / (n * s.hbar);
    return u / std::sqrt(1.0 + u * u / (s.c * s.c));
}
}  // namespace

TEST_CASE("classical_orbit")
{
    const auto h = CoulombSystem::hydrogen();
    const double a0 = 1.0 / kAlpha;
    const auto o = classical_orbit(h, a0);
    CHECK(rel(o.speed, kAlpha) < 1e-12);
    CHECK(std::abs(1.0 / o.speed - 137.036) < 1e-3);
    CHECK(rel(o.angular_momentum, 1.0) < 1e-4);
    CHECK(classical_orbit(h, 2.0 * a0).energy == Approx(o.energy / 2.0).epsilon(1e-14));
    CHECK_THROWS_AS(classical_orbit(h, 0.0), DomainError);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> lr(-2.0, 6.0);
    for (int i = 0; i < 500; ++i) {
        const double r = std::pow(10.0, lr(rng));
        const auto c = classical_orbit(h, r);
        CHECK(rel(h.mass * c.speed * c.speed / r, h.coupling / (r * r)) < 1e-10);
        CHECK(rel(c.energy, -0.5 * h.mass * c.speed * c.speed) < 1e-10);
        CHECK(rel(c.speed * c.period, 2.0 * std::numbers::pi * r) < 1e-12);
    }
}

TEST_CASE("Bohr levels")
{
    const auto h = CoulombSystem::hydrogen();
    const auto o1 = quantize_nonrelativistic(h, 1);
    CHECK(rel(metres(o1.radius), 5.292e-11) < 1e-3);
    CHECK(rel(core::natural_to_ev(o1.energy), -13.606) < 1e-3);
    CHECK(rel(metres(o1.radius), core::si::bohr_radius) < 1e-8);
    CHECK(quantize_nonrelativistic(h, 2).energy == Approx(o1.energy / 4.0).epsilon(1e-14));
    for (int n = 1; n <= 10; ++n) {
        const auto o = quantize_nonrelativistic(h, n);
        CHECK(rel(o.angular_momentum, n * h.hbar) < 1e-10);
        CHECK(rel(o.energy * n * n, o1.energy) < 1e-12);
        // consistent with classical mechanics at the quantized radius
        const auto c = classical_orbit(h, o.radius);
        CHECK(rel(c.energy, o.energy) < 1e-12);
        CHECK(rel(c.speed, o.speed) < 1e-12);
        // Rydberg formula
        const double rydberg_ev = core::si::rydberg_energy_ev;
        CHECK(rel(core::natural_to_ev(o.energy - o1.energy) + 1e-300, rydberg_ev * (1.0 - 1.0 / (n * n)) + 1e-300) < 1e-8);
    }
    CHECK_THROWS_AS(quantize_nonrelativistic(h, 0), DomainError);
    const double balmer_alpha = transition_frequency(h, quantize_nonrelativistic(h, 3), quantize_nonrelativistic(h, 2));
    CHECK(rel(core::natural_to_ev(balmer_alpha), core::si::rydberg_energy_ev * (1.0 / 4.0 - 1.0 / 9.0)) < 1e-8);
}

TEST_CASE("relativistic quantization")
{
    const auto h = CoulombSystem::hydrogen();
    const auto rel1 = quantize_relativistic(h, 1);
    CHECK(rel(rel1.speed, relativistic_speed_oracle(h, 1)) < 1e-13);
    const auto nr1 = quantize_nonrelativistic(h, 1);
    const double shift = (rel1.radius - nr1.radius) / nr1.radius;
    CHECK(shift == Approx(kAlpha * kAlpha).epsilon(1e-6));
    CHECK(std::abs(shift - 5.3e-5) < 0.1e-5);
    CHECK(rel(h.mass * rel1.speed * rel1.speed / rel1.radius, h.coupling / (rel1.radius * rel1.radius)) < 1e-10);

    const auto rel50 = quantize_relativistic(h, 50);
    const auto nr50 = quantize_nonrelativistic(h, 50);
    CHECK((rel50.radius - nr50.radius) / nr50.radius == Approx(kAlpha * kAlpha / 2500.0).epsilon(1e-3));

    double prev = 1.0;
    for (double scale : {1.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6}) {
        CoulombSystem s = h;
        s.c = scale;
        const auto r = quantize_relativistic(s, 1);
        const auto n = quantize_nonrelativistic(s, 1);
        const double d = std::abs(r.radius - n.radius) / n.radius;
        CHECK(d < prev);
        prev = d;
        if (scale == 1e6) {
            CHECK(d < 1e-9);
            CHECK(rel(r.energy, n.energy) < 1e-9);
        }
    }
}

TEST_CASE("overtaking time")
{
    const auto h = CoulombSystem::hydrogen();
    const auto o = quantize_nonrelativistic(h, 1);
    const auto ev = overtake_time(h, o);
    CHECK(ev.tau / o.period == Approx(kAlpha * kAlpha / (1.0 - kAlpha * kAlpha)).epsilon(1e-12));
    CHECK(std::abs(ev.tau / o.period - 5.33e-5) < 0.01e-5);
    CHECK(std::abs(ev.ratio - 1.0) < 2.0 * kAlpha * kAlpha);
    CHECK(ev.overtake_residual <= 1e-12);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> lr(-1.0, 8.0);
    for (int i = 0; i < 200; ++i) {
        const auto c = classical_orbit(h, std::pow(10.0, lr(rng)));
        CHECK(overtake_time(h, c).overtake_residual <= 1e-12);
    }
    const auto slow = classical_orbit(h, 1e20);
    CHECK(overtake_time(h, slow).tau < 1e-20 * slow.period);
}

TEST_CASE("zigzag consistency")
{
    const auto h = CoulombSystem::hydrogen();
    for (int n = 1; n <= 10; ++n) {
        CHECK(zigzag_consistency(h, quantize_relativistic(h, n), n) <= 1e-8);
        CHECK(overtake_time(h, quantize_relativistic(h, n)).zigzag_count == Approx(n).epsilon(1e-8));
    }
    const auto off = classical_orbit(h, 1.5 * quantize_nonrelativistic(h, 1).radius);
    const double res = zigzag_consistency(h, off);
    CHECK(res > 1e-3);

    // Same physical orbit in SI.
    CoulombSystem si;
    si.mass = core::si::electron_mass;
    si.hbar = core::si::hbar;
    si.c = core::si::c;
    si.coupling = core::si::fine_structure * core::si::hbar * core::si::c;
    const auto off_si = classical_orbit(si, 1.5 * quantize_nonrelativistic(si, 1).radius);
    CHECK(zigzag_consistency(si, off_si) == Approx(res).epsilon(1e-9));
    CHECK(zigzag_consistency(si, quantize_relativistic(si, 1), 1) <= 1e-8);
    CHECK(rel(quantize_nonrelativistic(si, 1).radius, core::si::bohr_radius) < 1e-8);
}

TEST_CASE("level table")
{
    const auto rows = level_table(CoulombSystem::hydrogen(), 5);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].energy_ev == Approx(-13.6057).epsilon(1e-5));
    CHECK(rows[4].angular_momentum_over_hbar == Approx(5.0).epsilon(1e-12));
    CHECK(rows[1].relativistic_shift == Approx(kAlpha * kAlpha / 4.0).epsilon(1e-4));
}
