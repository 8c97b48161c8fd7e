#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "guideq/core/dispersion.hpp"
#include "guideq/core/geometry.hpp"
#include "guideq/core/potential.hpp"
#include "guideq/core/units.hpp"
#include "guideq/errors.hpp"

using namespace guideq;
using namespace guideq::core;
using doctest::Approx;

namespace {
const double kSqrt2 = std::numbers::sqrt2;
const double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("units: SI round trip")
{
    const UnitSystem si(UnitMode::SI);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mant(1.0, 10.0);
    std::uniform_int_distribution<int> expo(-30, 30);
    for (auto dim : {Dimension::Length, Dimension::Time, Dimension::Mass, Dimension::Energy,
                     Dimension::Velocity, Dimension::AngularFrequency, Dimension::Wavenumber,
                     Dimension::Action}) {
        for (int i = 0; i < 200; ++i) {
            const double v = mant(rng) * std::pow(10.0, expo(rng));
            CHECK(rel(si.to_external(si.to_internal(v, dim), dim), v) <= 1e-12);
        }
    }
    const UnitSystem natural;
    CHECK(natural.to_internal(3.5, Dimension::Length) == 3.5);
}

TEST_CASE("units: natural scales")
{
    CHECK(rel(natural_unit_in_si(Dimension::Energy) / si::electron_volt, 510998.95) < 1e-8);
    CHECK(rel(natural_unit_in_si(Dimension::Length), 3.8615926796e-13) < 1e-9);
    CHECK_THROWS_AS(parse_unit_mode("cgs"), ValidationError);
    CHECK(parse_unit_mode("si") == UnitMode::SI);
}

TEST_CASE("particle: compton identity")
{
    for (double m : {1.0, 1836.15, 0.001, 207.0}) {
        const Particle p(m);
        CHECK(p.compton_wavelength() * p.rest_frequency() == Approx(2.0 * kPi).epsilon(1e-15));
    }
    CHECK_THROWS_AS(Particle(0.0), DomainError);
    CHECK_THROWS_AS(Particle(-1.0), DomainError);
}

TEST_CASE("omega_of_k")
{
    CHECK(omega_of_k(0.0, 1.0) == 1.0);
    CHECK(omega_of_k(1.0, 1.0) == Approx(kSqrt2).epsilon(1e-15));
    const double k = 1e6;
    CHECK(std::abs(omega_of_k(k, 1.0) / k - 1.0) < 1e-6);
    CHECK_THROWS_AS(omega_of_k(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(omega_of_k(1.0, -2.0), DomainError);
    double prev = 0.0;
    for (double kk = 0.0; kk < 50.0; kk += 0.37) {
        const double w = omega_of_k(kk, 1.3);
        CHECK(w > prev);
        prev = w;
    }
}

TEST_CASE("k_of_omega branches")
{
    auto k = k_of_omega(1.0, 1.0);
    CHECK(k.value == 0.0);
    CHECK_FALSE(k.evanescent);
    k = k_of_omega(kSqrt2, 1.0);
    CHECK(k.value == Approx(1.0).epsilon(1e-15));
    CHECK_FALSE(k.evanescent);
    k = k_of_omega(0.8, 1.0);
    CHECK(k.value == Approx(0.6).epsilon(1e-15));
    CHECK(k.evanescent);
}

TEST_CASE("group and phase velocity")
{
    CHECK(group_velocity(1.0, 0.0) == 0.0);
    CHECK_FALSE(phase_velocity(1.0, 0.0).has_value());
    CHECK(group_velocity(kSqrt2, 1.0) == Approx(1.0 / kSqrt2).epsilon(1e-15));
    CHECK(*phase_velocity(kSqrt2, 1.0) == Approx(kSqrt2).epsilon(1e-15));
    CHECK_THROWS_AS(group_velocity(0.0, 1.0), DomainError);
}

TEST_CASE("property: dispersion round trip, v_g v_ph = c^2, v_g < c")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> decade(-2.0, 4.0);
    std::uniform_real_distribution<double> cut(0.1, 10.0);
    for (int i = 0; i < 5000; ++i) {
        const double cutoff = cut(rng);
        const double k = cutoff * std::pow(10.0, decade(rng));
        const double w = omega_of_k(k, cutoff);
        const auto back = k_of_omega(w, cutoff);
        REQUIRE_FALSE(back.evanescent);
        CHECK(rel(back.value, k) <= 1e-10);
        const double vg = group_velocity(w, k);
        CHECK(rel(vg * *phase_velocity(w, k), 1.0) <= 1e-12);
        CHECK(vg < 1.0);
    }
}

TEST_CASE("cutoff_with_potential")
{
    const auto e = Particle::electron();
    CHECK(cutoff_with_potential(e, 0.0) == 1.0);
    CHECK(cutoff_with_potential(e, 1.0) == 2.0);
    // -13.6 eV against 510998.95 eV rest energy
    const double v = ev_to_natural(-13.6);
    CHECK(rel(cutoff_with_potential(e, v), 1.0 - 13.6 / 510998.95) < 1e-12);
    CHECK(std::abs(13.6 / 510998.95 - 2.661e-5) < 1e-8);
    CHECK_THROWS_AS(cutoff_with_potential(e, -1.0), DomainError);
    CHECK_THROWS_AS(cutoff_with_potential(e, -2.0), DomainError);
}

TEST_CASE("width_from_cutoff")
{
    const auto e = Particle::electron();
    const double a = width_from_cutoff(cutoff_with_potential(e, 0.0));
    const double metres = a * natural_unit_in_si(Dimension::Length);
    CHECK(rel(metres, 1.213e-12) < 1e-3);
    // half the Compton wavelength
    CHECK(a == Approx(e.compton_wavelength() / 2.0).epsilon(1e-15));
    CHECK(width_from_cutoff(2.0) == Approx(width_from_cutoff(1.0) / 2.0).epsilon(1e-15));
    CHECK(width_from_cutoff(3.7) * 3.7 == Approx(kPi).epsilon(1e-15));
    CHECK_THROWS_AS(width_from_cutoff(0.0), DomainError);
}

TEST_CASE("potential_to_geometry")
{
    const auto e = Particle::electron();
    const UniformGrid grid(-5.0, 5.0, 101);

    const auto free = potential_to_geometry(e, PotentialProfile::sample(grid, [](double) { return 0.0; }));
    for (double a : free.width()) {
        CHECK(a == Approx(kPi).epsilon(1e-15));
    }

    const auto raised = potential_to_geometry(e, PotentialProfile::sample(grid, [](double) { return 0.2; }));
    for (double a : raised.width()) {
        CHECK(a < kPi);
    }

    const auto ramp = potential_to_geometry(e, PotentialProfile::sample(grid, [](double x) { return 0.05 * x; }));
    const auto w = ramp.width();
    for (std::size_t i = 1; i < w.size(); ++i) {
        CHECK(w[i] < w[i - 1]);
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
        CHECK(w[i] * ramp.cutoff()[i] == Approx(kPi).epsilon(4e-16));
    }
    CHECK(ramp.width_at(1.234) * ramp.cutoff_at(1.234) == Approx(kPi).epsilon(4e-16));

    const auto deep = PotentialProfile::sample(grid, [](double x) { return x > 2.0 ? -1.5 : 0.0; });
    try {
        potential_to_geometry(e, deep);
        FAIL("expected DomainError");
    } catch (const DomainError& err) {
        CHECK(std::string(err.what()).find("x = 2.1") != std::string::npos);
    }
}

TEST_CASE("wkb_validity")
{
    const auto e = Particle::electron();
    const UniformGrid grid(-10.0, 10.0, 401);
    const double omega = 1.5;

    const auto flat = potential_to_geometry(e, PotentialProfile::sample(grid, [](double) { return 0.0; }));
    const auto m0 = wkb_validity(flat, omega);
    for (double m : m0.metric) {
        CHECK(m == 0.0);
    }

    auto ramp_metric = [&](double alpha) {
        const auto g = potential_to_geometry(
            e, PotentialProfile::sample(grid, [&](double x) { return alpha * x; }));
        return wkb_validity(g, omega).metric[200];
    };
    const double m1 = ramp_metric(1e-4);
    const double m2 = ramp_metric(2e-4);
    CHECK(m1 > 0.0);
    CHECK(m2 / m1 == Approx(2.0).epsilon(1e-3));

    const auto step = potential_to_geometry(
        e, PotentialProfile::sample(grid, [](double x) { return x < 0.0 ? 0.0 : 0.3; },
                                    Interpolation::Linear));
    const auto ms = wkb_validity(step, omega);
    CHECK(ms.max_metric > 1.0);
    CHECK(ms.non_wkb[200]);
    CHECK_FALSE(ms.non_wkb[100]);

    // Below-cutoff region is excluded and flagged.
    const auto high = potential_to_geometry(
        e, PotentialProfile::sample(grid, [](double x) { return x > 5.0 ? 0.8 : 0.0; },
                                    Interpolation::Linear));
    const auto mh = wkb_validity(high, omega);
    CHECK(mh.below_cutoff[400]);
    CHECK(std::isnan(mh.metric[400]));
    CHECK_FALSE(mh.below_cutoff[0]);
}

TEST_CASE("schrodinger_dispersion")
{
    const auto e = Particle::electron();
    auto r = schrodinger_dispersion(e, 0.0, 0.0);
    CHECK(r.omega == 1.0);
    CHECK(r.relative_error == 0.0);

    auto k_for_vg = [](double vg) { return vg / std::sqrt(1.0 - vg * vg); };
    r = schrodinger_dispersion(e, k_for_vg(0.01), 0.0);
    CHECK(r.relative_error < 1e-8);
    CHECK(r.relative_error == Approx(std::pow(0.01, 4) / 8.0).epsilon(0.01));
    r = schrodinger_dispersion(e, k_for_vg(0.5), 0.0);
    CHECK(r.relative_error > 1e-2);

    double prev = -1.0;
    for (double vg = 0.001; vg < 0.95; vg += 0.01) {
        const double err = schrodinger_dispersion(e, k_for_vg(vg), 0.0).relative_error;
        CHECK(err > prev);
        prev = err;
    }
}

TEST_CASE("profile CSV loading")
{
    const auto dir = std::filesystem::temp_directory_path() / "guideq_test_core";
    std::filesystem::create_directories(dir);
    const auto path = dir / "p.csv";
    {
        std::ofstream out(path);
        out << "# units: nm,eV\n" << "x,V\n";
        for (int i = 0; i <= 10; ++i) {
            out << 0.1 * i << "," << 2.0 * i << "\n";
        }
    }
    const auto p = load_profile_csv(path);
    CHECK(p.grid().size() == 11);
    CHECK(rel(p.grid().back(), length_unit_to_natural("nm")) < 1e-12);
    CHECK(rel(p.values()[10], ev_to_natural(20.0)) < 1e-12);

    {
        std::ofstream out(path);
        out << "x,V\n0,0\n1,0\n3,0\n";
    }
    CHECK_THROWS_AS(load_profile_csv(path), ValidationError);
    {
        std::ofstream out(path);
        out << "x,V\n0,0\n1,abc\n";
    }
    CHECK_THROWS_AS(load_profile_csv(path), ValidationError);
    CHECK_THROWS_AS(load_profile_csv(dir / "missing.csv"), IoError);
}

TEST_CASE("interpolant: spline and linear")
{
    const UniformGrid grid(0.0, 2.0, 201);
    const auto p = PotentialProfile::sample(grid, [](double x) { return std::sin(x); });
    CHECK(p(1.2345) == Approx(std::sin(1.2345)).epsilon(1e-8));
    CHECK(p.gradient(1.2345) == Approx(std::cos(1.2345)).epsilon(1e-5));
    CHECK(p.curvature(1.2345) == Approx(-std::sin(1.2345)).epsilon(1e-3));
    CHECK_THROWS_AS(p(2.5), DomainError);
    const auto lin = PotentialProfile::sample(grid, [](double x) { return 3.0 * x; }, Interpolation::Linear);
    CHECK(lin(0.777) == Approx(2.331).epsilon(1e-14));
    CHECK_THROWS_AS(PotentialProfile(grid, std::vector<double>(grid.size(), NAN)), ValidationError);
}
