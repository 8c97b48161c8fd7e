#include "guideq/qpotential/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "guideq/errors.hpp"
#include "guideq/io/csv.hpp"

namespace guideq::qpotential {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Integral over one cell of E^(-1/2) with E linear between the end values.
double cell_weight(double ea, double eb, double h)
{
    if (ea > 0.0 && eb > 0.0) {
        return 2.0 * h / (std::sqrt(ea) + std::sqrt(eb));
    }
    if (ea <= 0.0 && eb <= 0.0) {
        return 0.0;
    }
    const double pos = std::max(ea, eb);
    const double neg = std::min(ea, eb);
    return 2.0 * h * std::sqrt(pos) / (pos - neg);
}

double fd4_second(const std::vector<double>& r, std::size_t i, std::size_t step, double h)
{
    // Grouped as second differences so constants cancel exactly.
    const double near = (r[i - step] + r[i + step]) - 2.0 * r[i];
    const double far = (r[i - 2 * step] + r[i + 2 * step]) - 2.0 * r[i];
    return (16.0 * near - far) / (12.0 * h * h);
}

bool positive_stencil(const std::vector<double>& r, std::size_t i, std::size_t step)
{
    for (std::size_t j = i - 2 * step; j <= i + 2 * step; j += step) {
        if (!(r[j] > 0.0)) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool KineticField::excluded(std::size_t i) const
{
    return !allowed[i] || e_kin[i] <= turning_tolerance();
}

KineticField kinetic_field(const core::Particle& particle, double omega, const core::PotentialProfile& profile)
{
    KineticField k;
    k.grid = profile.grid();
    const auto v = profile.values();
    k.e_kin.resize(v.size());
    k.allowed.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        k.e_kin[i] = omega - particle.rest_frequency() - v[i];
        k.allowed[i] = k.e_kin[i] > 0.0;
        k.max_abs = std::max(k.max_abs, std::abs(k.e_kin[i]));
    }
    return k;
}

double DensityField::integral() const
{
    double c = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (allowed[i]) {
            c = p[i] * std::sqrt(kinetic.e_kin[i]);
            break;
        }
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        sum += cell_weight(kinetic.e_kin[i], kinetic.e_kin[i + 1], grid.spacing());
    }
    return c * sum;
}

DensityField wkb_density(const core::Particle& particle, double omega, const core::PotentialProfile& profile)
{
    DensityField d;
    d.kinetic = kinetic_field(particle, omega, profile);
    d.grid = d.kinetic.grid;
    d.allowed = d.kinetic.allowed;
    const auto& e = d.kinetic.e_kin;
    const std::size_t n = e.size();
    if (std::none_of(d.allowed.begin(), d.allowed.end(), [](bool a) { return a; })) {
        throw DomainError("the whole domain is classically forbidden at this frequency");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        sum += cell_weight(e[i], e[i + 1], d.grid.spacing());
        if ((e[i] > 0.0) != (e[i + 1] > 0.0)) {
            d.turning_points.push_back(d.grid[i] + d.grid.spacing() * e[i] / (e[i] - e[i + 1]));
        }
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        throw NumericalError("WKB density cannot be normalized");
    }
    d.p.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.p[i] = d.allowed[i] ? 1.0 / (sum * std::sqrt(e[i])) : 0.0;
    }
    return d;
}

QuantumPotentialField quantum_potential_local(const core::Particle& particle, double omega,
                                              const core::PotentialProfile& profile, int sign)
{
    if (sign != 1 && sign != -1) {
        throw ValidationError("sign of the gradient term must be +1 or -1");
    }
    const auto k = kinetic_field(particle, omega, profile);
    QuantumPotentialField f;
    f.grid = k.grid;
    f.source = USource::LocalFormula;
    f.u.assign(k.e_kin.size(), nan);
    f.valid.assign(k.e_kin.size(), false);
    const double m = particle.rest_mass();
    for (std::size_t i = 0; i < k.e_kin.size(); ++i) {
        if (k.excluded(i)) {
            continue;
        }
        const double x = f.grid[i];
        const double e = k.e_kin[i];
        const double g = profile.gradient(x);
        const double c = profile.curvature(x);
        f.u[i] = -(1.0 / (8.0 * m)) / e * (c + sign * 1.25 * g * g / e);
        f.valid[i] = true;
    }
    return f;
}

QuantumPotentialField bohm_quantum_potential(const core::UniformGrid& grid, const std::vector<double>& r,
                                             const core::Particle& particle)
{
    const std::size_t n = grid.size();
    if (r.size() != n) {
        throw ValidationError("amplitude samples do not match the grid");
    }
    QuantumPotentialField f;
    f.grid = grid;
    f.source = USource::BohmFromAmplitude;
    f.u.assign(n, nan);
    f.valid.assign(n, false);
    const double h = grid.spacing();
    const double m = particle.rest_mass();
    // Rounding floor of the five-point stencil relative to R.
    const double floor = 1e-10 / (m * h * h);
    double max_u = 0.0;
    double max_diff = 0.0;
    for (std::size_t i = 4; i + 4 < n; ++i) {
        if (!positive_stencil(r, i, 1) || !positive_stencil(r, i, 2)) {
            continue;
        }
        const double fine = -fd4_second(r, i, 1, h) / (2.0 * m * r[i]);
        const double coarse = -fd4_second(r, i, 2, 2.0 * h) / (2.0 * m * r[i]);
        const double diff = std::abs(fine - coarse);
        if (diff > 1e-2 * std::abs(fine) + floor) {
            continue;  // not converged at this point
        }
        f.u[i] = fine;
        f.valid[i] = true;
        max_u = std::max(max_u, std::abs(fine));
        max_diff = std::max(max_diff, diff);
    }
    f.half_grid_discrepancy = max_u > 0.0 ? max_diff / max_u : max_diff;
    return f;
}

SignArbitration arbitrate_local_sign(const core::Particle& particle, double omega,
                                     const core::PotentialProfile& profile)
{
    const auto density = wkb_density(particle, omega, profile);
    std::vector<double> r(density.p.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = std::sqrt(density.p[i]);
    }
    const auto bohm = bohm_quantum_potential(density.grid, r, particle);
    const auto plus = quantum_potential_local(particle, omega, profile, +1);
    const auto minus = quantum_potential_local(particle, omega, profile, -1);
    // Stay clear of turning points by 5% of the kinetic range.
    const double margin = 0.05 * density.kinetic.max_abs;
    double scale = 0.0;
    double dp = 0.0;
    double dm = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!bohm.valid[i] || !plus.valid[i] || density.kinetic.e_kin[i] <= margin) {
            continue;
        }
        scale = std::max(scale, std::abs(bohm.u[i]));
        dp = std::max(dp, std::abs(plus.u[i] - bohm.u[i]));
        dm = std::max(dm, std::abs(minus.u[i] - bohm.u[i]));
        ++count;
    }
    if (count == 0 || !(scale > 0.0)) {
        throw NumericalError("no points available to compare the quantum potential forms");
    }
    SignArbitration a;
    a.error_plus = dp / scale;
    a.error_minus = dm / scale;
    a.sign = a.error_plus <= a.error_minus ? +1 : -1;
    return a;
}

PolarWave polar_decompose(const solvers::WaveField& psi)
{
    const std::size_t n = psi.psi.size();
    PolarWave w;
    w.grid = psi.grid;
    w.r.resize(n);
    w.s.assign(n, nan);
    w.defined.assign(n, false);
    double max_r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w.r[i] = std::abs(psi.psi[i]);
        max_r = std::max(max_r, w.r[i]);
    }
    const double threshold = 1e-12 * max_r;
    bool have_last = false;
    double last_s = 0.0;
    solvers::Complex last_psi{};
    for (std::size_t i = 0; i < n; ++i) {
        if (!(w.r[i] > threshold)) {
            continue;
        }
        if (!have_last) {
            last_s = std::arg(psi.psi[i]);
        } else {
            last_s += std::arg(psi.psi[i] / last_psi);
        }
        last_psi = psi.psi[i];
        have_last = true;
        w.s[i] = last_s;
        w.defined[i] = true;
    }
    return w;
}

ResidualNorm continuity_residual(const std::vector<solvers::WaveField>& evolution, const core::Particle& particle)
{
    if (evolution.size() < 2) {
        throw ValidationError("continuity residual needs at least two time slices");
    }
    const double m = particle.rest_mass();
    ResidualNorm out;
    double sum = 0.0;
    double total_t = 0.0;
    auto flux = [m](const PolarWave& w, std::size_t i, double h) {
        const double s1 = (w.s[i + 1] - w.s[i - 1]) / (2.0 * h);
        const double s2 = (w.s[i + 1] - 2.0 * w.s[i] + w.s[i - 1]) / (h * h);
        const double r1 = (w.r[i + 1] - w.r[i - 1]) / (2.0 * h);
        return (w.r[i] * s2 + 2.0 * r1 * s1) / (2.0 * m);
    };
    for (std::size_t k = 0; k + 1 < evolution.size(); ++k) {
        const auto& a = evolution[k];
        const auto& b = evolution[k + 1];
        if (a.psi.size() != b.psi.size()) {
            throw ValidationError("time slices use different grids");
        }
        const double dt = b.t - a.t;
        if (!(dt > 0.0)) {
            throw ValidationError("time slices must be strictly increasing in t");
        }
        const auto pa = polar_decompose(a);
        const auto pb = polar_decompose(b);
        const double h = a.grid.spacing();
        double slice = 0.0;
        for (std::size_t i = 1; i + 1 < a.psi.size(); ++i) {
            bool ok = true;
            for (std::size_t j = i - 1; j <= i + 1; ++j) {
                ok = ok && pa.defined[j] && pb.defined[j];
            }
            if (!ok) {
                continue;
            }
            const double r = (pb.r[i] - pa.r[i]) / dt + 0.5 * (flux(pa, i, h) + flux(pb, i, h));
            out.max = std::max(out.max, std::abs(r));
            slice += r * r * h;
            ++out.points;
        }
        sum += slice * dt;
        total_t += dt;
    }
    out.l2 = std::sqrt(sum / total_t);
    return out;
}

std::vector<double> local_average(const core::UniformGrid& grid, const std::vector<double>& f,
                                  const std::function<double(double)>& width)
{
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    std::vector<double> cum(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        cum[i] = cum[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    }
    auto at = [&](double x) {
        const double u = (x - grid.front()) / h;
        const auto i = std::min(static_cast<std::size_t>(u), n - 2);
        const double frac = u - static_cast<double>(i);
        return cum[i] + frac * (cum[i + 1] - cum[i]);
    };
    std::vector<double> out(n, nan);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = width(grid[i]);
        if (!(w > 0.0) || !std::isfinite(w)) {
            continue;
        }
        const double lo = grid[i] - 0.5 * w;
        const double hi = grid[i] + 0.5 * w;
        if (lo < grid.front() || hi > grid.back()) {
            continue;
        }
        out[i] = (at(hi) - at(lo)) / w;
    }
    return out;
}

Trajectory modified_newton_trajectory(const core::Particle& particle, const core::PotentialProfile& profile,
                                      double x0, double v0, const TrajectoryConfig& config)
{
    const auto& grid = profile.grid();
    const double m = particle.rest_mass();
    if (!(config.duration > 0.0)) {
        throw ValidationError("trajectory duration must be positive");
    }
    if (!grid.contains(x0)) {
        throw ValidationError("trajectory must start inside the profile domain");
    }

    std::vector<bool> excluded(grid.size(), false);
    core::Interpolant u_field;
    if (config.quantum) {
        QuantumPotentialField u;
        if (config.source == USource::LocalFormula) {
            u = quantum_potential_local(particle, config.omega, profile);
        } else {
            const auto d = wkb_density(particle, config.omega, profile);
            std::vector<double> r(d.p.size());
            for (std::size_t i = 0; i < r.size(); ++i) {
                r[i] = std::sqrt(d.p[i]);
            }
            u = bohm_quantum_potential(grid, r, particle);
        }
        std::vector<double> filled = u.u;
        std::ptrdiff_t last_valid = -1;
        for (std::size_t i = 0; i < filled.size(); ++i) {
            excluded[i] = !u.valid[i];
            if (u.valid[i]) {
                if (last_valid < 0) {
                    std::fill(filled.begin(), filled.begin() + static_cast<std::ptrdiff_t>(i), u.u[i]);
                }
                last_valid = static_cast<std::ptrdiff_t>(i);
            } else if (last_valid >= 0) {
                filled[i] = u.u[static_cast<std::size_t>(last_valid)];
            }
        }
        if (last_valid < 0) {
            throw DomainError("quantum potential is undefined on the whole profile");
        }
        u_field = core::Interpolant(grid, std::move(filled), core::Interpolation::CubicSpline);
    }

    auto potential = [&](double x) { return profile(x) + (config.quantum ? u_field.value(x) : 0.0); };
    auto accel = [&](double x) {
        return -(profile.gradient(x) + (config.quantum ? u_field.derivative(x) : 0.0)) / m;
    };
    auto in_zone = [&](double x) {
        if (!config.quantum) {
            return false;
        }
        const double s = (x - grid.front()) / grid.spacing();
        const auto i = std::min(static_cast<std::size_t>(s), grid.size() - 2);
        return static_cast<bool>(excluded[i]) || static_cast<bool>(excluded[i + 1]);
    };

    double stiffness = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (excluded[i]) {
            continue;
        }
        double c = profile.curvature(grid[i]);
        if (config.quantum) {
            c += u_field.second_derivative(grid[i]);
        }
        stiffness = std::max(stiffness, std::abs(c));
    }
    const double omega_max = std::sqrt(stiffness / m);
    double dt = config.dt;
    if (dt <= 0.0) {
        const double t_char = omega_max > 0.0 ? 2.0 * std::numbers::pi / omega_max : config.duration;
        dt = t_char / 1000.0;
    }
    if (dt * omega_max >= 2.0) {
        std::ostringstream msg;
        msg << "trajectory step " << dt << " is unstable for the steepest force scale (limit "
            << 2.0 / omega_max << ")";
        throw NumericalError(msg.str());
    }

    Trajectory tr;
    tr.dt = dt;
    if (in_zone(x0)) {
        tr.end = TrajectoryEnd::TurningZone;
        return tr;
    }
    const auto steps = static_cast<std::size_t>(std::ceil(config.duration / dt - 1e-9));
    double x = x0;
    double v = v0;
    double a = accel(x);
    tr.samples.push_back({0.0, x, v, 0.5 * m * v * v + potential(x)});
    const std::size_t every = config.sample_every > 0 ? config.sample_every : std::max<std::size_t>(1, steps / 2000);
    for (std::size_t s = 1; s <= steps; ++s) {
        const double vh = v + 0.5 * dt * a;
        x += dt * vh;
        if (!grid.contains(x)) {
            tr.end = TrajectoryEnd::ExitedDomain;
            break;
        }
        if (in_zone(x)) {
            tr.end = TrajectoryEnd::TurningZone;
            break;
        }
        a = accel(x);
        v = vh + 0.5 * dt * a;
        if (s % every == 0 || s == steps) {
            tr.samples.push_back({dt * static_cast<double>(s), x, v, 0.5 * m * v * v + potential(x)});
        }
    }
    return tr;
}

void write_field_csv(const std::filesystem::path& path, const core::PotentialProfile& profile,
                     const DensityField& density, const QuantumPotentialField& u)
{
    io::CsvWriter csv(path);
    csv.header({"x", "V", "E_kin", "p", "U"});
    const auto v = profile.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        csv.row({density.grid[i], v[i], density.kinetic.e_kin[i], density.p[i], u.u[i]});
    }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory)
{
    io::CsvWriter csv(path);
    csv.header({"t", "x", "v", "E_mech"});
    for (const auto& s : trajectory.samples) {
        csv.row({s.t, s.x, s.v, s.e_mech});
    }
}

}  // namespace guideq::qpotential
