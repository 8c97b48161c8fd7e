#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>

#include "guideq/core/dispersion.hpp"
#include "guideq/core/geometry.hpp"
#include "guideq/errors.hpp"
#include "guideq/io/csv.hpp"
#include "guideq/io/svg.hpp"
#include "guideq/orbits/bohr.hpp"
#include "guideq/qpotential/fields.hpp"
#include "guideq/raytrace/zigzag.hpp"
#include "guideq/scatter/transfer.hpp"
#include "guideq/solvers/eigen.hpp"
#include "guideq/solvers/evolve.hpp"
#include "guideq/validate/acceptance.hpp"
#include "hash.hpp"

namespace guideq::cli {

using core::Dimension;
using nlohmann::json;

Output::Output(std::filesystem::path dir, core::UnitMode mode) : dir_(std::move(dir)), units_(mode) {}

std::string Output::column(const std::string& name, Dimension dim) const
{
    if (!si()) {
        return name;
    }
    switch (dim) {
    case Dimension::Length: return name + "_m";
    case Dimension::Time: return name + "_s";
    case Dimension::Mass: return name + "_kg";
    case Dimension::Energy: return name + "_J";
    case Dimension::Velocity: return name + "_m_per_s";
    case Dimension::AngularFrequency: return name + "_rad_per_s";
    case Dimension::Wavenumber: return name + "_per_m";
    case Dimension::Action: return name + "_J_s";
    default: return name;
    }
}

std::filesystem::path Output::file(const std::string& relative)
{
    const auto p = dir_ / relative;
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) {
        throw IoError("cannot create " + p.parent_path().string() + ": " + ec.message());
    }
    files_.push_back(relative);
    return p;
}

namespace {

template <class T>
const T& require(const std::optional<T>& block, const char* key, const std::string& command)
{
    if (!block) {
        throw ValidationError(std::string(key) + ": block required for the " + command + " subcommand");
    }
    return *block;
}

std::string unit_label(const Output& out, Dimension dim)
{
    if (!out.si()) {
        return "";
    }
    switch (dim) {
    case Dimension::Length: return " [m]";
    case Dimension::Time: return " [s]";
    case Dimension::Energy: return " [J]";
    case Dimension::Velocity: return " [m/s]";
    case Dimension::AngularFrequency: return " [rad/s]";
    case Dimension::Wavenumber: return " [1/m]";
    default: return "";
    }
}

// Density |psi|^2 carries inverse length.
double density_out(const Output& out, double natural)
{
    return out.si() ? natural / core::natural_unit_in_si(Dimension::Length) : natural;
}

CommandResult dispersion(const Scenario& sc, Output& out)
{
    const auto& d = require(sc.dispersion, "dispersion", "dispersion");
    const auto particle = sc.particle();
    const double cutoff = core::cutoff_with_potential(particle, d.potential);
    io::CsvWriter csv(out.file("dispersion.csv"));
    const std::vector<std::string> header{out.column("k", Dimension::Wavenumber),
                                          out.column("omega", Dimension::AngularFrequency),
                                          out.column("v_g", Dimension::Velocity),
                                          out.column("v_ph", Dimension::Velocity),
                                          out.column("omega_schrodinger", Dimension::AngularFrequency),
                                          "schrodinger_rel_error"};
    csv.header(header);
    io::Series omega{"exact", {}, {}};
    io::Series schro{"low velocity", {}, {}};
    io::Series vg{"group", {}, {}};
    io::Series vph{"phase", {}, {}};
    for (int i = 0; i < d.points; ++i) {
        const double k = d.k_min + (d.k_max - d.k_min) * i / (d.points - 1);
        const auto p = core::dispersion_point(k, cutoff);
        const auto s = core::schrodinger_dispersion(particle, k, d.potential);
        const double kx = out.out(k, Dimension::Wavenumber);
        const double w = out.out(p.omega, Dimension::AngularFrequency);
        const double g = out.out(p.group_velocity, Dimension::Velocity);
        std::vector<std::string> row{io::format_double(kx), io::format_double(w), io::format_double(g),
                                     p.phase_velocity
                                         ? io::format_double(out.out(*p.phase_velocity, Dimension::Velocity))
                                         : std::string(),
                                     io::format_double(out.out(s.omega, Dimension::AngularFrequency)),
                                     io::format_double(s.relative_error)};
        csv.raw_row(row);
        omega.x.push_back(kx);
        omega.y.push_back(w);
        schro.x.push_back(kx);
        schro.y.push_back(out.out(s.omega, Dimension::AngularFrequency));
        vg.x.push_back(kx);
        vg.y.push_back(g);
        vph.x.push_back(kx);
        vph.y.push_back(p.phase_velocity ? out.out(*p.phase_velocity, Dimension::Velocity) : NAN);
    }
    io::write_line_plot(out.file("dispersion.svg"),
                        {"Dispersion", "k" + unit_label(out, Dimension::Wavenumber),
                         "omega" + unit_label(out, Dimension::AngularFrequency)},
                        {omega, schro});
    io::write_line_plot(out.file("velocities.svg"),
                        {"Group and phase velocity", "k" + unit_label(out, Dimension::Wavenumber),
                         "velocity" + unit_label(out, Dimension::Velocity), true},
                        {vg, vph});
    return {json{{"cutoff", out.out(cutoff, Dimension::AngularFrequency)}, {"points", d.points}}};
}

const core::PotentialProfile& require_potential(const Scenario& sc, const std::string& command)
{
    return require(sc.potential, "potential", command);
}

CommandResult geometry(const Scenario& sc, Output& out)
{
    const auto& profile = require_potential(sc, "geometry");
    const auto particle = sc.particle();
    const auto geom = core::potential_to_geometry(particle, profile);
    std::optional<core::WkbValidity> wkb;
    if (sc.geometry && sc.geometry->omega) {
        wkb = core::wkb_validity(geom, *sc.geometry->omega, sc.geometry->wkb_threshold);
    }
    const auto& grid = profile.grid();
    const auto values = profile.values();
    {
        io::CsvWriter csv(out.file("geometry.csv"));
        std::vector<std::string> header{out.column("x", Dimension::Length), out.column("V", Dimension::Energy),
                                        out.column("cutoff", Dimension::AngularFrequency),
                                        out.column("width", Dimension::Length)};
        if (wkb) {
            header.push_back("wkb_metric");
            header.push_back("non_wkb");
        }
        csv.header(header);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::vector<std::string> row{io::format_double(out.out(grid[i], Dimension::Length)),
                                         io::format_double(out.out(values[i], Dimension::Energy)),
                                         io::format_double(out.out(geom.cutoff()[i], Dimension::AngularFrequency)),
                                         io::format_double(out.out(geom.width()[i], Dimension::Length))};
            if (wkb) {
                row.push_back(std::isnan(wkb->metric[i]) ? std::string() : io::format_double(wkb->metric[i]));
                row.push_back(wkb->non_wkb[i] ? "1" : "0");
            }
            csv.raw_row(row);
        }
    }
    io::CsvWriter widths(out.file("width.csv"));
    widths.header({out.column("width", Dimension::Length)});
    io::Series series{"width", {}, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        widths.row({out.out(geom.width()[i], Dimension::Length)});
        series.x.push_back(out.out(grid[i], Dimension::Length));
        series.y.push_back(out.out(geom.width()[i], Dimension::Length));
    }
    io::write_line_plot(out.file("width.svg"),
                        {"Guide width", "x" + unit_label(out, Dimension::Length),
                         "a" + unit_label(out, Dimension::Length)},
                        {series});
    json info{{"points", grid.size()}};
    if (wkb) {
        info["max_wkb_metric"] = wkb->max_metric;
    }
    return {info};
}

CommandResult trace(const Scenario& sc, Output& out)
{
    const auto& t = require(sc.trace, "trace", "trace");
    const auto& profile = require_potential(sc, "trace");
    const auto geom = core::potential_to_geometry(sc.particle(), profile);
    const double x0 = t.x0.value_or(profile.grid().front());
    const auto tr = raytrace::trace(t.omega, geom, raytrace::initial_state(geom, t.omega, x0), t.duration);
    const auto st = raytrace::trace_statistics(tr);
    {
        io::CsvWriter csv(out.file("trace.csv"));
        csv.header(std::vector<std::string>{out.column("t", Dimension::Time), out.column("x", Dimension::Length),
                                            out.column("y", Dimension::Length), "phi",
                                            out.column("v_eff", Dimension::Velocity)});
        for (const auto& s : tr.states) {
            csv.row({out.out(s.t, Dimension::Time), out.out(s.x, Dimension::Length), out.out(s.y, Dimension::Length),
                     s.phi, out.out(s.axial_sign * std::sin(s.phi), Dimension::Velocity)});
        }
    }
    io::Series path{"ray", {}, {}};
    for (const auto& s : tr.states) {
        path.x.push_back(out.out(s.x, Dimension::Length));
        path.y.push_back(out.out(s.y, Dimension::Length));
    }
    io::write_line_plot(out.file("trace.svg"),
                        {"Zigzag ray", "x" + unit_label(out, Dimension::Length),
                         "y" + unit_label(out, Dimension::Length)},
                        {path});
    io::Series speed{"half-period velocity", {}, {}};
    for (std::size_t i = 0; i < st.half_period_x.size(); ++i) {
        speed.x.push_back(out.out(st.half_period_x[i], Dimension::Length));
        speed.y.push_back(out.out(st.half_period_velocity[i], Dimension::Velocity));
    }
    io::write_line_plot(out.file("velocity.svg"),
                        {"Axial velocity", "x" + unit_label(out, Dimension::Length),
                         "v" + unit_label(out, Dimension::Velocity)},
                        {speed});
    const char* outcome = tr.outcome == raytrace::TraceOutcome::Completed      ? "completed"
                          : tr.outcome == raytrace::TraceOutcome::ExitedDomain ? "exited_domain"
                                                                               : "turning_point";
    json turning = json::array();
    for (const auto& e : tr.turning_points) {
        turning.push_back({{"x", out.out(e.x, Dimension::Length)}, {"t", out.out(e.t, Dimension::Time)}});
    }
    return {json{{"outcome", outcome},
                 {"reflections", st.reflection_count},
                 {"effective_velocity", out.out(tr.effective_velocity, Dimension::Velocity)},
                 {"period_length", out.out(st.period_length, Dimension::Length)},
                 {"bounce_frequency", out.out(st.bounce_frequency, Dimension::AngularFrequency)},
                 {"turning_points", turning}}};
}

CommandResult tunnel(const Scenario& sc, Output& out, unsigned threads)
{
    const auto& t = require(sc.tunnel, "tunnel", "tunnel");
    const auto spectrum = scatter::transmission_spectrum(t.segments, t.omega_min, t.omega_max,
                                                         static_cast<std::size_t>(t.points), sc.particle(),
                                                         t.regime, threads);
    io::Series ts{"T", {}, {}};
    io::Series rs{"R", {}, {}};
    {
        io::CsvWriter csv(out.file("spectrum.csv"));
        csv.header(std::vector<std::string>{out.column("omega", Dimension::AngularFrequency),
                                            out.column("E_kin", Dimension::Energy), "T", "R", "ln_T"});
        for (const auto& p : spectrum) {
            const double w = out.out(p.omega, Dimension::AngularFrequency);
            std::vector<std::string> row{io::format_double(w),
                                         io::format_double(out.out(p.omega - sc.mass, Dimension::Energy))};
            if (p.result) {
                row.push_back(io::format_double(p.result->transmittance));
                row.push_back(io::format_double(p.result->reflectance));
                row.push_back(io::format_double(p.result->log_transmittance));
            } else {
                row.insert(row.end(), 3, std::string());
            }
            csv.raw_row(row);
            ts.x.push_back(w);
            rs.x.push_back(w);
            ts.y.push_back(p.result ? p.result->transmittance : NAN);
            rs.y.push_back(p.result ? p.result->reflectance : NAN);
        }
    }
    io::write_line_plot(out.file("spectrum.svg"),
                        {"Transmission spectrum", "omega" + unit_label(out, Dimension::AngularFrequency),
                         "probability"},
                        {ts, rs});
    double best = -1.0;
    double best_omega = 0.0;
    std::size_t gaps = 0;
    for (const auto& p : spectrum) {
        if (!p.result) {
            ++gaps;
        } else if (p.result->transmittance > best) {
            best = p.result->transmittance;
            best_omega = p.omega;
        }
    }
    return {json{{"points", spectrum.size()},
                 {"gaps", gaps},
                 {"max_T", best},
                 {"omega_at_max_T", out.out(best_omega, Dimension::AngularFrequency)}}};
}

CommandResult orbits_cmd(const Scenario& sc, Output& out)
{
    const auto& o = require(sc.orbits, "orbits", "orbits");
    orbits::CoulombSystem sys;
    sys.mass = sc.mass;
    sys.coupling = o.coupling;
    const auto rows = orbits::level_table(sys, o.n_max);
    orbits::write_level_table_csv(rows, out.file("levels.csv"));
    io::Series energy{"E_n", {}, {}};
    json residuals = json::array();
    for (const auto& r : rows) {
        energy.x.push_back(r.n);
        energy.y.push_back(r.energy_ev);
        residuals.push_back(orbits::zigzag_consistency(sys, orbits::quantize_relativistic(sys, r.n), r.n));
    }
    io::write_line_plot(out.file("levels.svg"), {"Bohr levels", "n", "E [eV]"}, {energy});
    return {json{{"levels", rows.size()}, {"zigzag_residuals", residuals}}};
}

CommandResult qpotential_cmd(const Scenario& sc, Output& out)
{
    const auto& q = require(sc.qpotential, "qpotential", "qpotential");
    const auto& profile = require_potential(sc, "qpotential");
    const auto particle = sc.particle();
    const auto density = qpotential::wkb_density(particle, q.omega, profile);
    const auto local = qpotential::quantum_potential_local(particle, q.omega, profile);
    std::vector<double> r(density.p.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = std::sqrt(density.p[i]);
    }
    const auto bohm = qpotential::bohm_quantum_potential(profile.grid(), r, particle);
    json info;
    try {
        const auto a = qpotential::arbitrate_local_sign(particle, q.omega, profile);
        info["sign_arbitration"] = {{"sign", a.sign}, {"error_plus", a.error_plus}, {"error_minus", a.error_minus}};
    } catch (const NumericalError& e) {
        info["sign_arbitration"] = {{"unavailable", e.what()}};
    }
    const auto& grid = profile.grid();
    const auto v = profile.values();
    io::Series ps{"p", {}, {}};
    io::Series vs{"V", {}, {}};
    io::Series us{"U (local)", {}, {}};
    io::Series ub{"U (Bohm)", {}, {}};
    {
        io::CsvWriter csv(out.file("fields.csv"));
        csv.header(std::vector<std::string>{out.column("x", Dimension::Length), out.column("V", Dimension::Energy),
                                            out.column("E_kin", Dimension::Energy),
                                            out.si() ? "p_per_m" : "p", out.column("U", Dimension::Energy),
                                            out.column("U_bohm", Dimension::Energy)});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = out.out(grid[i], Dimension::Length);
            const double p = density_out(out, density.p[i]);
            const double u = out.out(local.u[i], Dimension::Energy);
            const double b = out.out(bohm.u[i], Dimension::Energy);
            csv.raw_row(std::vector<std::string>{
                io::format_double(x), io::format_double(out.out(v[i], Dimension::Energy)),
                io::format_double(out.out(density.kinetic.e_kin[i], Dimension::Energy)), io::format_double(p),
                std::isnan(u) ? std::string() : io::format_double(u),
                std::isnan(b) ? std::string() : io::format_double(b)});
            ps.x.push_back(x);
            ps.y.push_back(p);
            vs.x.push_back(x);
            vs.y.push_back(out.out(v[i], Dimension::Energy));
            us.x.push_back(x);
            us.y.push_back(u);
            ub.x.push_back(x);
            ub.y.push_back(b);
        }
    }
    io::write_line_plot(out.file("density.svg"),
                        {"WKB density", "x" + unit_label(out, Dimension::Length), out.si() ? "p [1/m]" : "p"},
                        {ps});
    io::write_line_plot(out.file("potential.svg"),
                        {"Potential and quantum potential", "x" + unit_label(out, Dimension::Length),
                         "energy" + unit_label(out, Dimension::Energy)},
                        {vs, us, ub});
    json turning = json::array();
    for (double x : density.turning_points) {
        turning.push_back(out.out(x, Dimension::Length));
    }
    info["turning_points"] = turning;
    info["normalization"] = density.integral();

    if (q.trajectory) {
        const auto& t = *q.trajectory;
        qpotential::TrajectoryConfig cfg;
        cfg.omega = q.omega;
        cfg.quantum = t.quantum;
        cfg.source = t.bohm_source ? qpotential::USource::BohmFromAmplitude : qpotential::USource::LocalFormula;
        cfg.duration = t.duration;
        cfg.dt = t.dt;
        cfg.sample_every = static_cast<std::size_t>(t.sample_every);
        const auto tr = qpotential::modified_newton_trajectory(particle, profile, t.x0, t.v0, cfg);
        io::CsvWriter csv(out.file("trajectory.csv"));
        csv.header(std::vector<std::string>{out.column("t", Dimension::Time), out.column("x", Dimension::Length),
                                            out.column("v", Dimension::Velocity),
                                            out.column("E_mech", Dimension::Energy)});
        io::Series xs{"x(t)", {}, {}};
        for (const auto& s : tr.samples) {
            csv.row({out.out(s.t, Dimension::Time), out.out(s.x, Dimension::Length),
                     out.out(s.v, Dimension::Velocity), out.out(s.e_mech, Dimension::Energy)});
            xs.x.push_back(out.out(s.t, Dimension::Time));
            xs.y.push_back(out.out(s.x, Dimension::Length));
        }
        io::write_line_plot(out.file("trajectory.svg"),
                            {"Trajectory", "t" + unit_label(out, Dimension::Time),
                             "x" + unit_label(out, Dimension::Length)},
                            {xs});
        const char* end = tr.end == qpotential::TrajectoryEnd::Completed      ? "completed"
                          : tr.end == qpotential::TrajectoryEnd::ExitedDomain ? "exited_domain"
                                                                              : "turning_zone";
        info["trajectory"] = {{"end", end}, {"dt", out.out(tr.dt, Dimension::Time)}, {"samples", tr.samples.size()}};
    }
    return {info};
}

std::string slice_name(std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshots/slice_%05zu.csv", i);
    return buf;
}

std::string profile_hash(const core::PotentialProfile& profile)
{
    const auto v = profile.values();
    const auto& g = profile.grid();
    std::vector<double> data{g.front(), g.spacing(), static_cast<double>(g.size())};
    data.insert(data.end(), v.begin(), v.end());
    return sha256_hex(std::string(reinterpret_cast<const char*>(data.data()), data.size() * sizeof(double)));
}

const char* boundary_name(solvers::Boundary b)
{
    switch (b) {
    case solvers::Boundary::Periodic: return "periodic";
    case solvers::Boundary::Absorbing: return "absorbing";
    default: return "dirichlet";
    }
}

template <class Field, class Get>
io::Series density_series(const Output& out, const Field& f, Get get, const std::string& name)
{
    io::Series s{name, {}, {}};
    for (std::size_t i = 0; i < f.grid.size(); ++i) {
        s.x.push_back(out.out(f.grid[i], Dimension::Length));
        s.y.push_back(get(f, i));
    }
    return s;
}

// Up to six evenly spaced members of a snapshot list.
std::vector<std::size_t> plot_picks(std::size_t n)
{
    std::vector<std::size_t> idx;
    const std::size_t k = std::min<std::size_t>(n, 6);
    for (std::size_t j = 0; j < k; ++j) {
        idx.push_back(k == 1 ? 0 : j * (n - 1) / (k - 1));
    }
    return idx;
}

std::string time_label(const Output& out, double t)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "t = %.4g", out.out(t, Dimension::Time));
    return buf;
}

CommandResult evolve(const Scenario& sc, Output& out)
{
    const auto& e = require(sc.evolve, "evolve", "evolve");
    const auto& profile = require_potential(sc, "evolve");
    const auto particle = sc.particle();
    const auto& grid = profile.grid();
    json info{{"grid", {{"x_min", out.out(grid.front(), Dimension::Length)},
                        {"x_max", out.out(grid.back(), Dimension::Length)},
                        {"points", grid.size()}}},
              {"profile_sha256", profile_hash(profile)}};
    const double amp = out.si() ? 1.0 / std::sqrt(core::natural_unit_in_si(Dimension::Length)) : 1.0;

    if (e.solver == SolverKind::Eigen) {
        const auto st = solvers::stationary_states(profile, particle, static_cast<std::size_t>(e.states), e.box);
        {
            io::CsvWriter csv(out.file("energies.csv"));
            csv.header(std::vector<std::string>{"n", out.column("E", Dimension::Energy), "residual"});
            for (std::size_t i = 0; i < st.energies.size(); ++i) {
                csv.row({static_cast<double>(i + 1), out.out(st.energies[i], Dimension::Energy), st.residuals[i]});
            }
        }
        io::CsvWriter csv(out.file("states.csv"));
        std::vector<std::string> header{out.column("x", Dimension::Length)};
        for (std::size_t i = 0; i < st.states.size(); ++i) {
            header.push_back("psi_" + std::to_string(i + 1));
        }
        csv.header(header);
        std::vector<double> row(header.size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
            row[0] = out.out(grid[j], Dimension::Length);
            for (std::size_t i = 0; i < st.states.size(); ++i) {
                row[i + 1] = amp * st.states[i][j];
            }
            csv.row(row);
        }
        std::vector<io::Series> plots;
        for (std::size_t i = 0; i < std::min<std::size_t>(st.states.size(), 6); ++i) {
            io::Series s{"n = " + std::to_string(i + 1), {}, {}};
            for (std::size_t j = 0; j < grid.size(); ++j) {
                s.x.push_back(out.out(grid[j], Dimension::Length));
                s.y.push_back(amp * st.states[i][j]);
            }
            plots.push_back(std::move(s));
        }
        io::write_line_plot(out.file("states.svg"),
                            {"Stationary states", "x" + unit_label(out, Dimension::Length), "psi"}, plots);
        json energies = json::array();
        for (double x : st.energies) {
            energies.push_back(out.out(x, Dimension::Energy));
        }
        info["solver"] = "eigen";
        info["energies"] = energies;
        return {info};
    }

    const auto packet = solvers::gaussian_packet(grid, e.x0, e.sigma, e.k0);
    info["dt"] = out.out(e.config.dt, Dimension::Time);
    info["steps"] = e.config.n_steps;
    info["boundary"] = boundary_name(e.config.boundary);
    if (e.solver == SolverKind::Schrodinger) {
        const auto run = solvers::schrodinger_evolve(packet, profile, particle, e.config);
        io::CsvWriter summary(out.file("evolution.csv"));
        summary.header(std::vector<std::string>{out.column("t", Dimension::Time), "norm",
                                                out.column("mean_x", Dimension::Length),
                                                out.column("spread_x", Dimension::Length)});
        for (std::size_t s = 0; s < run.size(); ++s) {
            const auto& f = run[s];
            summary.row({out.out(f.t, Dimension::Time), f.norm(), out.out(f.mean_position(), Dimension::Length),
                         out.out(f.position_spread(), Dimension::Length)});
            io::CsvWriter csv(out.file(slice_name(s)));
            csv.header(std::vector<std::string>{out.column("x", Dimension::Length), "re_psi", "im_psi",
                                                out.si() ? "abs2_psi_per_m" : "abs2_psi"});
            for (std::size_t i = 0; i < grid.size(); ++i) {
                csv.row({out.out(grid[i], Dimension::Length), amp * f.psi[i].real(), amp * f.psi[i].imag(),
                         density_out(out, std::norm(f.psi[i]))});
            }
        }
        std::vector<io::Series> plots;
        for (std::size_t s : plot_picks(run.size())) {
            plots.push_back(density_series(
                out, run[s], [&](const auto& f, std::size_t i) { return density_out(out, std::norm(f.psi[i])); },
                time_label(out, run[s].t)));
        }
        io::write_line_plot(out.file("density.svg"),
                            {"Probability density", "x" + unit_label(out, Dimension::Length), "|psi|^2"}, plots);
        info["solver"] = "schrodinger";
        info["final_norm"] = run.back().norm();
        info["snapshots"] = run.size();
        return {info};
    }

    const double cutoff = particle.rest_frequency() + (grid.contains(e.x0) ? profile(e.x0) : 0.0);
    const auto rate = solvers::positive_frequency_rate(packet.psi, grid, cutoff);
    const auto run = solvers::klein_gordon_evolve(packet.psi, rate, grid, profile, particle, e.config);
    io::CsvWriter summary(out.file("evolution.csv"));
    summary.header(std::vector<std::string>{out.column("t", Dimension::Time), "energy",
                                            out.column("centroid", Dimension::Length)});
    for (std::size_t s = 0; s < run.size(); ++s) {
        const auto& f = run[s];
        double sum = 0.0;
        double w = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            sum += std::norm(f.phi[i]) * grid[i];
            w += std::norm(f.phi[i]);
        }
        summary.row({out.out(f.t, Dimension::Time), f.energy, out.out(sum / w, Dimension::Length)});
        io::CsvWriter csv(out.file(slice_name(s)));
        csv.header(std::vector<std::string>{out.column("x", Dimension::Length), "re_phi", "im_phi", "abs2_phi"});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            csv.row({out.out(grid[i], Dimension::Length), f.phi[i].real(), f.phi[i].imag(), std::norm(f.phi[i])});
        }
    }
    std::vector<io::Series> plots;
    for (std::size_t s : plot_picks(run.size())) {
        plots.push_back(density_series(
            out, run[s], [](const auto& f, std::size_t i) { return std::norm(f.phi[i]); },
            time_label(out, run[s].t)));
    }
    io::write_line_plot(out.file("density.svg"),
                        {"Klein-Gordon field", "x" + unit_label(out, Dimension::Length), "|phi|^2"}, plots);
    info["solver"] = "klein_gordon";
    info["energy_drift"] = std::abs(run.back().energy / run.front().energy - 1.0);
    info["snapshots"] = run.size();
    return {info};
}

CommandResult validate_cmd(Output& out, unsigned threads)
{
    std::vector<validate::CriterionResult> results;
    for (const auto& c : validate::acceptance_suite(threads)) {
        results.push_back(validate::run_criterion(c));
        std::cout << validate::format_result(results.back()) << '\n' << std::flush;
    }
    io::CsvWriter csv(out.file("summary.csv"));
    csv.header({"id", "criterion", "passed", "seconds", "detail"});
    json list = json::array();
    io::Series runtime{"runtime", {}, {}};
    io::Series limit{"limit", {}, {}};
    bool all = true;
    for (const auto& r : results) {
        csv.raw_row(std::vector<std::string>{std::to_string(r.id), r.name, r.passed ? "true" : "false",
                                             io::format_double(r.seconds), r.detail});
        list.push_back({{"id", r.id}, {"criterion", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        runtime.x.push_back(r.id);
        runtime.y.push_back(r.seconds);
        limit.x.push_back(r.id);
        limit.y.push_back(r.time_limit);
        all = all && r.passed;
    }
    io::write_line_plot(out.file("runtime.svg"), {"Acceptance runtimes", "criterion", "seconds", true},
                        {runtime, limit});
    std::size_t passed = 0;
    for (const auto& r : results) {
        passed += r.passed ? 1 : 0;
    }
    std::cout << passed << "/" << results.size() << " acceptance criteria passed\n";
    return {json{{"criteria", list}, {"passed", passed}, {"total", results.size()}}, all};
}

}  // namespace

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"dispersion", "geometry",   "trace",  "tunnel",
                                                "orbits",     "qpotential", "evolve", "validate"};
    return names;
}

CommandResult run_command(const std::string& name, const Scenario& sc, Output& out, unsigned threads)
{
    if (name == "dispersion") return dispersion(sc, out);
    if (name == "geometry") return geometry(sc, out);
    if (name == "trace") return trace(sc, out);
    if (name == "tunnel") return tunnel(sc, out, threads);
    if (name == "orbits") return orbits_cmd(sc, out);
    if (name == "qpotential") return qpotential_cmd(sc, out);
    if (name == "evolve") return evolve(sc, out);
    if (name == "validate") return validate_cmd(out, threads);
    throw ValidationError("unknown subcommand '" + name + "'");
}

}  // namespace guideq::cli
