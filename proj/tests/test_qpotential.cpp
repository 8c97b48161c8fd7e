#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <vector>

#include "guideq/errors.hpp"
#include "guideq/io/csv.hpp"
#include "guideq/qpotential/fields.hpp"
#include "guideq/solvers/eigen.hpp"
#include "guideq/solvers/evolve.hpp"

using namespace guideq;
using namespace guideq::qpotential;
using core::Particle;
using core::PotentialProfile;
using core::UniformGrid;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

PotentialProfile gaussian_bump(const UniformGrid& g, double height, double width)
{
    return PotentialProfile::sample(g, [=](double x) { return height * std::exp(-x * x / (2.0 * width * width)); });
}

std::vector<solvers::WaveField> free_run(std::size_t n, double dt, std::size_t steps, std::size_t every)
{
    const UniformGrid g(-25.0, 25.0, n);
    solvers::EvolutionConfig cfg;
    cfg.dt = dt;
    cfg.n_steps = steps;
    cfg.snapshot_every = every;
    cfg.boundary = solvers::Boundary::Periodic;
    const auto flat = PotentialProfile::sample(g, [](double) { return 0.0; }, core::Interpolation::Linear);
    return solvers::schrodinger_evolve(solvers::gaussian_packet(g, -5.0, 1.5, 1.0), flat, Particle(1.0), cfg);
}

}  // namespace

TEST_CASE("constant potential gives a uniform normalized density")
{
    const UniformGrid g(0.0, 4.0, 101);
    const auto v = PotentialProfile::sample(g, [](double) { return 0.2; });
    const auto d = wkb_density(Particle(1.0), 1.7, v);
    for (double p : d.p) {
        CHECK(p == Approx(0.25).epsilon(1e-13));
    }
    CHECK(std::abs(d.integral() - 1.0) < 1e-8);
    CHECK(d.turning_points.empty());
}

TEST_CASE("linear ramp: density ratio and closed-form normalization")
{
    const UniformGrid g(0.0, 2.0, 201);
    const double e0 = 1.5, force = 0.5;
    const auto v = PotentialProfile::sample(g, [=](double x) { return force * x; }, core::Interpolation::Linear);
    const auto d = wkb_density(Particle(1.0), 1.0 + e0, v);
    const double norm = 2.0 * (std::sqrt(e0) - std::sqrt(e0 - 2.0 * force)) / force;
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(d.p[i] == Approx(1.0 / (norm * std::sqrt(e0 - force * g[i]))).epsilon(1e-12));
    }
    CHECK(d.p[150] / d.p[30] == Approx(std::sqrt(d.kinetic.e_kin[30] / d.kinetic.e_kin[150])).epsilon(1e-13));
}

TEST_CASE("ramp with a turning point inside the grid")
{
    const UniformGrid g(0.0, 3.0, 300);
    const auto v = PotentialProfile::sample(g, [](double x) { return x; }, core::Interpolation::Linear);
    const auto d = wkb_density(Particle(1.0), 1.0 + 1.2345, v);
    REQUIRE(d.turning_points.size() == 1);
    CHECK(d.turning_points[0] == Approx(1.2345).epsilon(1e-12));
    CHECK(std::abs(d.integral() - 1.0) < 1e-8);
    // Exact: integral of (1.2345 - x)^(-1/2) over [0, 1.2345] is 2 sqrt(1.2345).
    CHECK(d.p[10] == Approx(1.0 / (2.0 * std::sqrt(1.2345) * std::sqrt(1.2345 - g[10]))).epsilon(1e-12));
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(d.allowed[i] == (d.kinetic.e_kin[i] > 0.0));
        if (!d.allowed[i]) {
            CHECK(d.p[i] == 0.0);
        }
    }
    CHECK_THROWS_AS(wkb_density(Particle(1.0), 0.5, v), DomainError);
}

TEST_CASE("harmonic well: classical density and orbit-averaged eigenstate")
{
    const Particle p(1.0);
    const UniformGrid g(-16.0, 16.0, 4001);
    const auto well = PotentialProfile::sample(g, [](double x) { return 0.5 * x * x; });
    const std::size_t n = 60;
    const auto st = solvers::stationary_states(well, p, n + 1);
    const double energy = st.energies[n];
    CHECK(energy == Approx(60.5).epsilon(1e-3));
    const auto d = wkb_density(p, p.rest_frequency() + energy, well);
    const double xt = std::sqrt(2.0 * energy);
    std::vector<double> density(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        density[i] = st.states[n][i] * st.states[n][i];
    }
    const auto avg = local_average(g, density, [&](double x) {
        const double e = energy - 0.5 * x * x;
        return e > 0.0 ? 2.0 * pi / std::sqrt(2.0 * e) : -1.0;
    });
    double worst_classical = 0.0;
    double worst_eigen = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g[i];
        if (std::abs(x) > 0.8 * xt) {
            continue;
        }
        const double classical = 1.0 / (pi * std::sqrt(xt * xt - x * x));
        worst_classical = std::max(worst_classical, std::abs(d.p[i] / classical - 1.0));
        worst_eigen = std::max(worst_eigen, std::abs(avg[i] / d.p[i] - 1.0));
    }
    MESSAGE("classical " << worst_classical << ", eigenstate " << worst_eigen);
    CHECK(worst_classical < 0.02);
    CHECK(worst_eigen < 0.05);
}

TEST_CASE("local quantum potential: flat and linear profiles")
{
    const UniformGrid g(-2.0, 2.0, 201);
    const Particle p(2.0);
    const auto flat = PotentialProfile::sample(g, [](double) { return 0.3; });
    const auto u0 = quantum_potential_local(p, 4.0, flat);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(u0.valid[i]);
        CHECK(std::abs(u0.u[i]) < 1e-14);
    }
    const auto ramp = PotentialProfile::sample(g, [](double x) { return 0.25 * x; });
    const auto u1 = quantum_potential_local(p, 4.0, ramp);
    for (std::size_t i = 2; i + 2 < g.size(); ++i) {
        const double e = 2.0 - 0.25 * g[i];
        CHECK(u1.u[i] == Approx(-(1.0 / 16.0) * 1.25 * 0.0625 / (e * e)).epsilon(1e-10));
    }
}

TEST_CASE("Gaussian bump: local formula matches the Bohm form only with sign +1")
{
    const UniformGrid g(-6.0, 6.0, 12001);
    const Particle p(1.0);
    // Above the barrier top and below it (two turning points).
    for (double e : {1.6, 0.7}) {
        const auto a = arbitrate_local_sign(p, p.rest_frequency() + e, gaussian_bump(g, 1.0, 1.0));
        MESSAGE("E = " << e << ": +1 -> " << a.error_plus << ", -1 -> " << a.error_minus);
        CHECK(a.sign == 1);
        CHECK(a.error_plus < 1e-6);
        CHECK(a.error_minus > 0.1);
    }
}

TEST_CASE("Bohm quantum potential: constant, cosine lobe, scale invariance")
{
    const Particle p(1.5);
    const UniformGrid g(-1.0, 1.0, 801);
    std::vector<double> flat(g.size(), 0.7);
    const auto u0 = bohm_quantum_potential(g, flat, p);
    for (std::size_t i = 4; i + 4 < g.size(); ++i) {
        CHECK(u0.valid[i]);
        CHECK(u0.u[i] == 0.0);
    }
    const double kappa = 1.3;
    std::vector<double> lobe(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        lobe[i] = std::cos(kappa * g[i]);
    }
    const auto u1 = bohm_quantum_potential(g, lobe, p);
    for (std::size_t i = 4; i + 4 < g.size(); ++i) {
        CHECK(u1.u[i] == Approx(kappa * kappa / (2.0 * p.rest_mass())).epsilon(1e-9));
    }
    CHECK(u1.half_grid_discrepancy < 1e-8);
    for (double lambda : {2.0, 0.5, 1024.0, 0.0078125}) {
        std::vector<double> scaled(lobe);
        for (auto& r : scaled) {
            r *= lambda;
        }
        const auto us = bohm_quantum_potential(g, scaled, p);
        for (std::size_t i = 4; i + 4 < g.size(); ++i) {
            CHECK(us.u[i] == u1.u[i]);
        }
    }
    for (double lambda : {3.7, 1e-5, 6.1e8}) {
        std::vector<double> scaled(lobe);
        for (auto& r : scaled) {
            r *= lambda;
        }
        // Forming lambda R rounds each sample; the stencil amplifies that by
        // 64 / (12 h^2), relative to R.
        const auto us = bohm_quantum_potential(g, scaled, p);
        const double h = g.spacing();
        const double amplification = 64.0 / (12.0 * h * h * 2.0 * p.rest_mass());
        for (std::size_t i = 4; i + 4 < g.size(); ++i) {
            const double bound = 4.0 * amplification * std::numeric_limits<double>::epsilon() / lobe[i];
            CHECK(std::abs(us.u[i] - u1.u[i]) <= bound);
            CHECK(std::abs(us.u[i] - u1.u[i]) <= 1e-9 * std::abs(u1.u[i]));
        }
    }
    // Non-positive amplitude is excluded.
    std::vector<double> signed_r(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        signed_r[i] = std::sin(3.0 * g[i]);
    }
    const auto u2 = bohm_quantum_potential(g, signed_r, p);
    CHECK_FALSE(u2.valid[400]);
    CHECK(std::isnan(u2.u[400]));
}

TEST_CASE("polar decomposition")
{
    const UniformGrid g(-5.0, 5.0, 501);
    solvers::WaveField plane{g, {}, 0.0};
    solvers::WaveField gauss{g, {}, 0.0};
    solvers::WaveField standing{g, {}, 0.0};
    for (std::size_t i = 0; i < g.size(); ++i) {
        plane.psi.push_back(std::polar(0.3, 2.2 * g[i]));
        gauss.psi.emplace_back(std::exp(-g[i] * g[i]), 0.0);
        standing.psi.emplace_back(std::sin(pi * g[i]), 0.0);
    }
    const auto pw = polar_decompose(plane);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(pw.r[i] == Approx(0.3).epsilon(1e-14));
        CHECK(pw.s[i] - pw.s[0] == Approx(2.2 * (g[i] - g[0])).epsilon(1e-10));
        CHECK(std::abs(pw.r[i] * std::polar(1.0, pw.s[i]) - plane.psi[i]) < 1e-10);
    }
    const auto gw = polar_decompose(gauss);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(gw.s[i] == 0.0);
    }
    const auto sw = polar_decompose(standing);
    CHECK_FALSE(sw.defined[250]);  // x = 0
    CHECK(std::isnan(sw.s[250]));
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (sw.defined[i]) {
            CHECK(std::abs(sw.r[i] * std::polar(1.0, sw.s[i]) - standing.psi[i]) < 1e-10);
        }
    }
}

TEST_CASE("Bohm velocity at the packet centre equals the group velocity")
{
    const auto run = free_run(2048, 0.01, 500, 0);
    const auto& f = run.back();
    const auto w = polar_decompose(f);
    const double xc = f.mean_position();
    const auto i = static_cast<std::size_t>(std::lround((xc - f.grid.front()) / f.grid.spacing()));
    const double v = (w.s[i + 1] - w.s[i - 1]) / (2.0 * f.grid.spacing());
    CHECK(std::abs(v / 1.0 - 1.0) < 1e-2);
}

TEST_CASE("continuity residual converges at second order")
{
    const auto r1 = continuity_residual(free_run(512, 0.04, 50, 1), Particle(1.0));
    const auto r2 = continuity_residual(free_run(1024, 0.02, 100, 1), Particle(1.0));
    const auto r3 = continuity_residual(free_run(2048, 0.01, 200, 1), Particle(1.0));
    MESSAGE("L2 residuals " << r1.l2 << " " << r2.l2 << " " << r3.l2);
    CHECK(std::log2(r1.l2 / r2.l2) == Approx(2.0).epsilon(0.1));
    CHECK(std::log2(r2.l2 / r3.l2) == Approx(2.0).epsilon(0.1));
}

TEST_CASE("continuity residual: stationary state vanishes, corrupted phase grows linearly")
{
    const Particle p(1.0);
    const UniformGrid g(-10.0, 10.0, 1001);
    const auto well = PotentialProfile::sample(g, [](double x) { return 0.5 * x * x; });
    const auto st = solvers::stationary_states(well, p, 1);
    solvers::WaveField ground{g, {}, 0.0};
    for (double x : st.states[0]) {
        ground.psi.emplace_back(x, 0.0);
    }
    solvers::EvolutionConfig cfg;
    cfg.dt = 0.05;
    cfg.n_steps = 20;
    cfg.snapshot_every = 1;
    cfg.boundary = solvers::Boundary::Dirichlet;
    const auto run = solvers::schrodinger_evolve(ground, well, p, cfg);
    CHECK(continuity_residual(run, p).max < 1e-8);

    auto corrupted = [&](double eps) {
        auto slices = free_run(1024, 0.02, 20, 1);
        for (auto& f : slices) {
            for (std::size_t i = 0; i < f.psi.size(); ++i) {
                f.psi[i] *= std::polar(1.0, eps * f.grid[i] * f.grid[i]);
            }
        }
        return continuity_residual(slices, p).l2;
    };
    const double base = corrupted(0.0);
    const double r1 = corrupted(1e-2) - base;
    const double r2 = corrupted(2e-2) - base;
    const double r4 = corrupted(4e-2) - base;
    CHECK(r2 / r1 == Approx(2.0).epsilon(0.05));
    CHECK(r4 / r2 == Approx(2.0).epsilon(0.05));
}

TEST_CASE("classical trajectories: harmonic period, uniform motion, energy")
{
    const Particle p(1.0);
    const UniformGrid g(-5.0, 5.0, 2001);
    const auto well = PotentialProfile::sample(g, [](double x) { return 0.5 * x * x; });
    TrajectoryConfig cfg;
    cfg.duration = 10.0 * 2.0 * pi;
    cfg.dt = 2.0 * pi / 1000.0;
    const auto tr = modified_newton_trajectory(p, well, 1.0, 0.0, cfg);
    REQUIRE(tr.end == TrajectoryEnd::Completed);
    std::vector<double> crossings;
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
        const auto& a = tr.samples[i - 1];
        const auto& b = tr.samples[i];
        if (a.x > 0.0 && b.x <= 0.0) {
            crossings.push_back(a.t + (b.t - a.t) * a.x / (a.x - b.x));
        }
    }
    REQUIRE(crossings.size() >= 5);
    const double period = (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
    CHECK(std::abs(period / (2.0 * pi) - 1.0) < 1e-3);

    cfg.dt = 2.0 * pi / 5000.0;
    cfg.duration = 10000.0 * cfg.dt;
    const auto fine = modified_newton_trajectory(p, well, 1.0, 0.0, cfg);
    double drift = 0.0;
    for (const auto& s : fine.samples) {
        drift = std::max(drift, std::abs(s.e_mech / fine.samples.front().e_mech - 1.0));
    }
    CHECK(drift <= 1e-6);

    const auto flat = PotentialProfile::sample(g, [](double) { return 0.0; });
    TrajectoryConfig free_cfg;
    free_cfg.duration = 4.0;
    free_cfg.dt = 0.01;
    const auto line = modified_newton_trajectory(p, flat, -2.0, 0.75, free_cfg);
    for (const auto& s : line.samples) {
        CHECK(s.v == 0.75);
        CHECK(s.x == Approx(-2.0 + 0.75 * s.t).epsilon(1e-12));
    }
}

TEST_CASE("quantum trajectories: energy conservation, classical limit, turning zone")
{
    const Particle p(1.0);
    const double e = 1.0;
    std::vector<double> deviation;
    for (double w : {1.0, 2.0, 4.0}) {
        const UniformGrid g(-8.0 * w, 8.0 * w, 4001);
        const auto bump = gaussian_bump(g, 0.3, w);
        TrajectoryConfig cfg;
        cfg.omega = p.rest_frequency() + e;
        cfg.duration = 12.0 * w / std::sqrt(2.0 * e);
        cfg.dt = cfg.duration / 10000.0;
        const auto classical = modified_newton_trajectory(p, bump, -6.0 * w, std::sqrt(2.0 * e), cfg);
        cfg.quantum = true;
        const auto quantum = modified_newton_trajectory(p, bump, -6.0 * w, std::sqrt(2.0 * e), cfg);
        REQUIRE(quantum.end == TrajectoryEnd::Completed);
        REQUIRE(quantum.samples.size() == classical.samples.size());
        double dev = 0.0;
        double drift = 0.0;
        for (std::size_t i = 0; i < quantum.samples.size(); ++i) {
            dev = std::max(dev, std::abs(quantum.samples[i].x - classical.samples[i].x));
            drift = std::max(drift, std::abs(quantum.samples[i].e_mech / quantum.samples[0].e_mech - 1.0));
        }
        CHECK(drift <= 1e-4);
        deviation.push_back(dev);
    }
    MESSAGE("deviation " << deviation[0] << " " << deviation[1] << " " << deviation[2]);
    CHECK(deviation[0] > 0.0);
    CHECK(deviation[1] < 0.7 * deviation[0]);
    CHECK(deviation[2] < 0.7 * deviation[1]);

    // Below the barrier top the particle runs into the excluded zone.
    const UniformGrid g(-8.0, 8.0, 4001);
    TrajectoryConfig cfg;
    cfg.omega = p.rest_frequency() + 0.2;
    cfg.quantum = true;
    cfg.duration = 10.0;
    cfg.dt = 1e-3;
    const auto bump = gaussian_bump(g, 0.3, 1.0);
    CHECK_THROWS_AS(modified_newton_trajectory(p, bump, -3.0, std::sqrt(0.4), cfg), NumericalError);
    cfg.dt = 4e-5;
    const auto stopped = modified_newton_trajectory(p, bump, -3.0, std::sqrt(0.4), cfg);
    CHECK(stopped.end == TrajectoryEnd::TurningZone);
}

TEST_CASE("field and trajectory CSV exports")
{
    const auto dir = std::filesystem::temp_directory_path() / "guideq_qpotential_test";
    std::filesystem::create_directories(dir);
    const UniformGrid g(-3.0, 3.0, 61);
    const Particle p(1.0);
    const auto bump = gaussian_bump(g, 0.5, 1.0);
    write_field_csv(dir / "field.csv", bump, wkb_density(p, 2.0, bump), quantum_potential_local(p, 2.0, bump));
    const auto rows = io::read_csv(dir / "field.csv");
    REQUIRE(rows.size() == 62);
    CHECK(rows[0] == std::vector<std::string>{"x", "V", "E_kin", "p", "U"});
    TrajectoryConfig cfg;
    cfg.duration = 1.0;
    cfg.dt = 0.1;
    write_trajectory_csv(dir / "traj.csv", modified_newton_trajectory(p, bump, 0.0, 0.1, cfg));
    CHECK(io::read_csv(dir / "traj.csv").size() == 12);
    std::filesystem::remove_all(dir);
}
