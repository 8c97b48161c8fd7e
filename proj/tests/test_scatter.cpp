#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "guideq/errors.hpp"
#include "guideq/scatter/transfer.hpp"

using namespace guideq;
using namespace guideq::scatter;
using core::Particle;
using doctest::Approx;

namespace {

// Closed-form rectangular barrier (Schrodinger, hbar = 1), E below the top.
double barrier_oracle(double mass, double e_kin, double height, double width)
{
    const double k2 = 2.0 * mass * e_kin;
    const double kappa2 = 2.0 * mass * (height - e_kin);
    const double s = std::sinh(std::sqrt(kappa2) * width);
    return 1.0 / (1.0 + (k2 + kappa2) * (k2 + kappa2) * s * s / (4.0 * k2 * kappa2));
}

std::vector<Segment> barrier(double height, double width, double lead_v = 0.0)
{
    return {Segment::make_lead(lead_v), Segment{width, height, false}, Segment::make_lead(lead_v)};
}

std::vector<Segment> random_structure(std::mt19937_64& rng, std::size_t n_interior)
{
    std::uniform_real_distribution<double> len(0.2, 2.0);
    std::uniform_real_distribution<double> pot(-0.5, 1.5);
    std::vector<Segment> s{Segment::make_lead(0.0)};
    for (std::size_t i = 0; i < n_interior; ++i) {
        s.push_back({len(rng), pot(rng), false});
    }
    s.push_back(Segment::make_lead(0.1));
    return s;
}

}  // namespace

TEST_CASE("axial_wavenumber")
{
    const Particle p(1.0);
    const Segment s{1.0, 0.6, false};  // cutoff 1.6
    auto k = axial_wavenumber(1.25 * 1.6, s, p, WaveRegime::KleinGordon);
    CHECK(k.value == Approx(0.75 * 1.6).epsilon(1e-14));
    CHECK_FALSE(k.evanescent);
    k = axial_wavenumber(1.6, s, p, WaveRegime::KleinGordon);
    CHECK(k.value == 0.0);
    k = axial_wavenumber(0.8 * 1.6, s, p, WaveRegime::KleinGordon);
    CHECK(k.value == Approx(0.6 * 1.6).epsilon(1e-14));
    CHECK(k.evanescent);
    k = axial_wavenumber(2.0, Segment{1.0, 0.0, false}, p, WaveRegime::Schrodinger);
    CHECK(k.value == Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("interface determinant is k_in / k_out")
{
    const auto m = interface_matrix(Complex(1.3, 0.0), Complex(0.4, 0.0));
    CHECK(std::abs(m.det() - Complex(1.3 / 0.4, 0.0)) < 1e-14);
    const auto p = propagation_matrix(Complex(0.0, 3.0), 100.0);
    CHECK(std::isfinite(p.log_scale));
    CHECK(std::abs(p.full_det() - 1.0) < 1e-12);
}

TEST_CASE("no barrier transmits fully")
{
    const Particle p(1.0);
    const auto r = scattering(barrier(0.0, 3.0), 1.7, p);
    CHECK(r.transmittance == Approx(1.0).epsilon(1e-14));
    CHECK(r.reflectance < 1e-28);
}

TEST_CASE("rectangular barrier matches the closed form")
{
    const Particle p(1.0);
    // E_kin = 1, V0 = 2, L = 1
    const auto r = scattering(barrier(2.0, 1.0), p.rest_frequency() + 1.0, p);
    const double expected = 1.0 / std::pow(std::cosh(std::sqrt(2.0)), 2);
    CHECK(std::abs(r.transmittance - expected) / expected < 1e-8);
    CHECK(r.transmittance == Approx(0.2108).epsilon(1e-3));
    CHECK(barrier_oracle(1.0, 1.0, 2.0, 1.0) == Approx(expected).epsilon(1e-13));

    int checked = 0;
    for (double e = 0.05; e < 1.0; e += 0.05) {
        for (double width : {0.2, 0.5, 1.0, 1.5}) {
            const double oracle = barrier_oracle(1.0, e, 1.0, width);
            if (oracle <= 0.1) {
                continue;
            }
            const auto res = scattering(barrier(1.0, width), 1.0 + e, p);
            CHECK(std::abs(res.transmittance - oracle) / oracle < 1e-8);
            ++checked;
        }
    }
    CHECK(checked > 20);
}

TEST_CASE("property: unitarity, reciprocity, dual route")
{
    const Particle p(1.0);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = random_structure(rng, 5);
        auto rev = std::vector<Segment>(s.rbegin(), s.rend());
        for (auto regime : {WaveRegime::Schrodinger, WaveRegime::KleinGordon}) {
            for (double omega = 1.15; omega < 3.0; omega += 0.0937) {
                const auto a = scattering(s, omega, p, regime);
                CHECK(a.reflectance + a.transmittance == Approx(1.0).epsilon(1e-10));
                CHECK(a.transmittance >= 0.0);
                CHECK(a.transmittance <= 1.0 + 1e-12);
                const auto b = scattering(rev, omega, p, regime);
                CHECK(std::abs(a.transmittance - b.transmittance) < 1e-10);
                const auto c = scattering_amplitude_route(s, omega, p, regime);
                CHECK(std::abs(a.transmittance - c.transmittance) < 1e-10);
                CHECK(std::abs(a.r - c.r) < 1e-9);
            }
        }
    }
}

TEST_CASE("composition: chain(A ++ B) = chain(B) chain(A), splitting a section is exact")
{
    const Particle p(1.0);
    std::mt19937_64 rng(5);
    const auto s = random_structure(rng, 6);
    const std::span<const Segment> interior(s.data() + 1, 6);
    const double omega = 1.9;
    const auto whole = chain_matrix(interior, omega, p, WaveRegime::Schrodinger);
    const auto a = chain_matrix(interior.subspan(0, 2), omega, p, WaveRegime::Schrodinger);
    const auto b = chain_matrix(interior.subspan(2), omega, p, WaveRegime::Schrodinger);
    const auto ba = b * a;
    const double scale = std::exp(whole.log_scale);
    const double scale_ba = std::exp(ba.log_scale);
    CHECK(std::abs(whole.m11 * scale - ba.m11 * scale_ba) < 1e-10 * std::abs(whole.m11 * scale) + 1e-12);
    CHECK(std::abs(whole.m21 * scale - ba.m21 * scale_ba) < 1e-10 * std::abs(whole.m21 * scale) + 1e-12);

    auto split = std::vector<Segment>(s);
    const Segment mid = split[3];
    split[3].length = 0.3 * mid.length;
    split.insert(split.begin() + 4, Segment{0.7 * mid.length, mid.potential, false});
    const auto r1 = scattering(s, omega, p);
    const auto r2 = scattering(split, omega, p);
    CHECK(std::abs(r1.transmittance - r2.transmittance) < 1e-10);
    CHECK(std::abs(r1.t - r2.t) < 1e-10);
}

TEST_CASE("thick barrier: ln T decays at -2 kappa")
{
    const Particle p(1.0);
    const double omega = 1.5;  // E_kin = 0.5, V0 = 2
    const double kappa = std::sqrt(2.0 * (2.0 - 0.5));
    const double l1 = 6.0;
    const double l2 = 12.0;
    const double slope = (scattering(barrier(2.0, l2), omega, p).log_transmittance -
                          scattering(barrier(2.0, l1), omega, p).log_transmittance) / (l2 - l1);
    CHECK(slope == Approx(-2.0 * kappa).epsilon(0.02));

    // kappa L far beyond exp overflow: T underflows, log T stays exact.
    const auto deep = scattering(barrier(2.0, 800.0), omega, p);
    CHECK(std::isfinite(deep.log_transmittance));
    CHECK(deep.transmittance == 0.0);
    CHECK(deep.reflectance == Approx(1.0).epsilon(1e-12));
    const auto mid = scattering(barrier(2.0, 400.0), omega, p);
    CHECK((deep.log_transmittance - mid.log_transmittance) / 400.0 == Approx(-2.0 * kappa).epsilon(1e-9));
}

TEST_CASE("T is continuous across the barrier top")
{
    const Particle p(1.0);
    for (auto regime : {WaveRegime::Schrodinger, WaveRegime::KleinGordon}) {
        const double top = regime == WaveRegime::Schrodinger ? 1.0 + 0.7 : 1.7;
        const auto at = scattering(barrier(0.7, 1.3), top, p, regime);
        for (double eps : {1e-6, 1e-8}) {
            const auto below = scattering(barrier(0.7, 1.3), top - eps, p, regime);
            const auto above = scattering(barrier(0.7, 1.3), top + eps, p, regime);
            CHECK(std::abs(above.transmittance - below.transmittance) < 1e3 * eps);
            CHECK(std::abs(at.transmittance - below.transmittance) < 1e3 * eps);
        }
    }
}

TEST_CASE("symmetric double barrier has a unit-transmission resonance")
{
    const Particle p(1.0);
    const std::vector<Segment> s{Segment::make_lead(0.0), {0.8, 1.0, false}, {3.0, 0.0, false},
                                 {0.8, 1.0, false}, Segment::make_lead(0.0)};
    const auto spec = transmission_spectrum(s, 1.01, 1.99, 2000, p);
    std::size_t best = 0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        if (spec[i].result->transmittance > spec[best].result->transmittance) {
            best = i;
        }
    }
    // golden-section refinement of the peak
    double lo = spec[best > 0 ? best - 1 : 0].omega;
    double hi = spec[std::min(best + 1, spec.size() - 1)].omega;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    auto T = [&](double w) { return scattering(s, w, p).transmittance; };
    for (int it = 0; it < 100; ++it) {
        const double a = hi - g * (hi - lo);
        const double b = lo + g * (hi - lo);
        if (T(a) > T(b)) {
            hi = b;
        } else {
            lo = a;
        }
    }
    CHECK(T(0.5 * (lo + hi)) > 1.0 - 1e-8);
    CHECK(T(1.05) < 0.5);
}

TEST_CASE("leads without a propagating channel")
{
    const Particle p(1.0);
    CHECK_THROWS_AS(scattering(barrier(1.0, 1.0, 0.5), 1.2, p), DomainError);
    const auto spec = transmission_spectrum(barrier(1.0, 1.0, 0.5), 1.2, 2.0, 9, p);
    CHECK_FALSE(spec[0].result.has_value());
    CHECK(spec[0].gap_reason.find("no propagating channel") != std::string::npos);
    CHECK(spec[8].result.has_value());
    for (const auto& pt : transmission_spectrum(barrier(0.0, 1.0), 1.1, 3.0, 50, p, WaveRegime::Schrodinger, 4)) {
        CHECK(pt.result->transmittance == Approx(1.0).epsilon(1e-13));
    }
    CHECK_THROWS_AS(transmission_spectrum(barrier(0.0, 1.0), 1.1, 3.0, 1, p), ValidationError);
}

TEST_CASE("structure validation and CSV")
{
    const Particle p(1.0);
    std::vector<Segment> bad{Segment::make_lead(0.0), {-1.0, 1.0, false}, Segment::make_lead(0.0)};
    CHECK_THROWS_AS(scattering(bad, 2.0, p), ValidationError);
    bad = {{1.0, 0.0, false}, Segment::make_lead(0.0)};
    CHECK_THROWS_AS(scattering(bad, 2.0, p), ValidationError);

    const auto dir = std::filesystem::temp_directory_path() / "guideq_test_scatter";
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "s.csv");
        out << "length,V\nlead,0\n1.0,2.0\nlead,0\n";
    }
    const auto s = load_structure_csv(dir / "s.csv");
    REQUIRE(s.size() == 3);
    CHECK(s[1].length == 1.0);
    CHECK(s[1].potential == 2.0);
    {
        std::ofstream out(dir / "s.csv");
        out << "length,V\n1.0,2.0\nlead,0\n";
    }
    CHECK_THROWS_AS(load_structure_csv(dir / "s.csv"), ValidationError);

    const auto spec = transmission_spectrum(barrier(1.0, 1.0, 0.5), 1.2, 2.0, 9, p);
    write_spectrum_csv(spec, dir / "spec.csv");
    write_spectrum_json(spec, dir / "spec.json");
    CHECK(std::filesystem::file_size(dir / "spec.csv") > 0);
}
