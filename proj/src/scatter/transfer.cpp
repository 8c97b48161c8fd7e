#include "guideq/scatter/transfer.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "json.hpp"

#include "guideq/core/units.hpp"
#include "guideq/errors.hpp"
#include "guideq/io/csv.hpp"
#include "guideq/parallel.hpp"

namespace guideq::scatter {

using core::Wavenumber;

namespace {

constexpr Complex kI{0.0, 1.0};

Wavenumber lead_wavenumber(double omega, const Segment& lead, const core::Particle& particle,
                           WaveRegime regime, const char* side)
{
    const auto k = axial_wavenumber(omega, lead, particle, regime);
    if (k.evanescent || k.value == 0.0) {
        throw DomainError(std::string("no propagating channel in the ") + side +
                          " lead at omega = " + io::format_double(omega));
    }
    return k;
}

ScatteringResult finish(double omega, Complex r, Complex t, double k_in, double k_out,
                        double log_t_magnitude)
{
    ScatteringResult res;
    res.omega = omega;
    res.r = r;
    res.t = t;
    res.reflectance = std::norm(r);
    res.log_transmittance = std::log(k_out / k_in) + 2.0 * log_t_magnitude;
    res.transmittance = std::exp(res.log_transmittance);
    return res;
}

}  // namespace

double Segment::cutoff(const core::Particle& particle) const
{
    return core::cutoff_with_potential(particle, potential);
}

Complex TransferMatrix::full_det() const
{
    const Complex d = det();
    if (d == 0.0) {
        return d;
    }
    return std::polar(std::exp(2.0 * log_scale + std::log(std::abs(d))), std::arg(d));
}

TransferMatrix TransferMatrix::operator*(const TransferMatrix& b) const
{
    TransferMatrix out;
    out.m11 = m11 * b.m11 + m12 * b.m21;
    out.m12 = m11 * b.m12 + m12 * b.m22;
    out.m21 = m21 * b.m11 + m22 * b.m21;
    out.m22 = m21 * b.m12 + m22 * b.m22;
    out.log_scale = log_scale + b.log_scale;
    return out;
}

Complex propagation_constant(const Wavenumber& k)
{
    return k.evanescent ? Complex(0.0, k.value) : Complex(k.value, 0.0);
}

Wavenumber axial_wavenumber(double omega, const Segment& segment, const core::Particle& particle,
                            WaveRegime regime)
{
    if (!(omega > 0.0)) {
        throw DomainError("axial wavenumber requires omega > 0");
    }
    if (regime == WaveRegime::KleinGordon) {
        return core::k_of_omega(omega, segment.cutoff(particle));
    }
    const double kinetic = omega - particle.rest_frequency() - segment.potential;
    const double k = std::sqrt(2.0 * particle.rest_mass() * std::abs(kinetic));
    return {k, kinetic < 0.0};
}

TransferMatrix interface_matrix(Complex q_in, Complex q_out)
{
    if (q_out == 0.0) {
        throw DomainError("amplitude basis undefined at a zero wavenumber");
    }
    const Complex ratio = q_in / q_out;
    TransferMatrix m;
    m.m11 = 0.5 * (1.0 + ratio);
    m.m12 = 0.5 * (1.0 - ratio);
    m.m21 = 0.5 * (1.0 - ratio);
    m.m22 = 0.5 * (1.0 + ratio);
    return m;
}

TransferMatrix propagation_matrix(Complex q, double length)
{
    TransferMatrix m;
    m.m12 = 0.0;
    m.m21 = 0.0;
    if (q.imag() > 0.0 && q.real() == 0.0) {
        // exp(iqL) = exp(-kappa L) decays, exp(-iqL) grows; factor out the growth.
        const double kl = q.imag() * length;
        m.m11 = std::exp(-2.0 * kl);
        m.m22 = 1.0;
        m.log_scale = kl;
        return m;
    }
    m.m11 = std::exp(kI * q * length);
    m.m22 = std::exp(-kI * q * length);
    return m;
}

TransferMatrix field_matrix(const Wavenumber& k, double length)
{
    TransferMatrix m;
    const double q = k.value;
    if (q == 0.0) {
        m.m12 = length;
        return m;
    }
    if (!k.evanescent) {
        const double c = std::cos(q * length);
        const double s = std::sin(q * length);
        m.m11 = c;
        m.m12 = s / q;
        m.m21 = -q * s;
        m.m22 = c;
        return m;
    }
    // cosh and sinh with exp(kappa L) factored out.
    const double x = q * length;
    const double e = std::exp(-2.0 * x);
    const double one_minus = -std::expm1(-2.0 * x);
    m.m11 = 0.5 * (1.0 + e);
    m.m12 = 0.5 * one_minus / q;
    m.m21 = 0.5 * q * one_minus;
    m.m22 = 0.5 * (1.0 + e);
    m.log_scale = x;
    return m;
}

void validate_structure(std::span<const Segment> segments)
{
    if (segments.size() < 2) {
        throw ValidationError("structure needs a left and a right lead");
    }
    if (!segments.front().lead || !segments.back().lead) {
        throw ValidationError("first and last segments must be leads");
    }
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        if (!std::isfinite(s.potential)) {
            throw ValidationError("segment " + std::to_string(i) + ": potential not finite");
        }
        if (i == 0 || i + 1 == segments.size()) {
            continue;
        }
        if (s.lead) {
            throw ValidationError("segment " + std::to_string(i) + ": leads allowed only at the ends");
        }
        if (!(s.length > 0.0) || !std::isfinite(s.length)) {
            throw ValidationError("segment " + std::to_string(i) + ": length must be positive");
        }
    }
}

TransferMatrix chain_matrix(std::span<const Segment> interior, double omega,
                            const core::Particle& particle, WaveRegime regime)
{
    TransferMatrix total;
    for (const auto& s : interior) {
        total = field_matrix(axial_wavenumber(omega, s, particle, regime), s.length) * total;
    }
    return total;
}

ScatteringResult scattering(std::span<const Segment> segments, double omega,
                            const core::Particle& particle, WaveRegime regime)
{
    validate_structure(segments);
    const double kl = lead_wavenumber(omega, segments.front(), particle, regime, "left").value;
    const double kr = lead_wavenumber(omega, segments.back(), particle, regime, "right").value;
    const auto m = chain_matrix(segments.subspan(1, segments.size() - 2), omega, particle, regime);

    // Left lead exp(ikx) + r exp(-ikx), right lead t exp(ikx), matched through
    // (psi, psi') = M (psi, psi').
    const Complex a = kI * kr * m.m11 - m.m21;
    const Complex b = -kr * kl * m.m12 - kI * kl * m.m22;
    const Complex denom = a - b;
    const Complex r = -(a + b) / denom;
    const Complex t_scaled = 2.0 * kI * kl / denom;
    const Complex t = t_scaled * std::exp(-m.log_scale);
    return finish(omega, r, t, kl, kr, std::log(std::abs(t_scaled)) - m.log_scale);
}

ScatteringResult scattering_amplitude_route(std::span<const Segment> segments, double omega,
                                            const core::Particle& particle, WaveRegime regime)
{
    validate_structure(segments);
    const auto kl = lead_wavenumber(omega, segments.front(), particle, regime, "left");
    const auto kr = lead_wavenumber(omega, segments.back(), particle, regime, "right");
    TransferMatrix total;
    Complex q_prev = propagation_constant(kl);
    for (std::size_t i = 1; i + 1 < segments.size(); ++i) {
        const Complex q = propagation_constant(axial_wavenumber(omega, segments[i], particle, regime));
        total = propagation_matrix(q, segments[i].length) * interface_matrix(q_prev, q) * total;
        q_prev = q;
    }
    total = interface_matrix(q_prev, propagation_constant(kr)) * total;
    // (t, 0) = M (1, r)
    const Complex r = -total.m21 / total.m22;
    const Complex t_scaled = total.det() / total.m22;
    const Complex t = t_scaled * std::exp(total.log_scale);
    return finish(omega, r, t, kl.value, kr.value, std::log(std::abs(t_scaled)) + total.log_scale);
}

std::vector<SpectrumPoint> transmission_spectrum(std::span<const Segment> segments, double omega_min,
                                                 double omega_max, std::size_t n_points,
                                                 const core::Particle& particle, WaveRegime regime,
                                                 unsigned threads)
{
    if (n_points < 2) {
        throw ValidationError("spectrum needs at least two points");
    }
    if (!(omega_max > omega_min)) {
        throw ValidationError("spectrum range must satisfy omega_max > omega_min");
    }
    validate_structure(segments);
    std::vector<SpectrumPoint> out(n_points);
    const double step = (omega_max - omega_min) / static_cast<double>(n_points - 1);
    parallel_for(n_points, threads, [&](std::size_t i) {
        auto& p = out[i];
        p.omega = i + 1 == n_points ? omega_max : omega_min + step * static_cast<double>(i);
        try {
            p.result = scattering(segments, p.omega, particle, regime);
        } catch (const DomainError& e) {
            p.gap_reason = e.what();
        }
    });
    return out;
}

std::vector<Segment> load_structure_csv(const std::filesystem::path& path)
{
    const auto rows = io::read_csv(path);
    double length_scale = 1.0;
    double energy_scale = 1.0;
    std::vector<Segment> out;
    bool header_seen = false;
    for (const auto& row : rows) {
        if (row.empty() || row[0].empty()) {
            continue;
        }
        if (row[0].front() == '#') {
            const auto pos = row[0].find("units:");
            if (pos != std::string::npos) {
                if (row.size() != 2) {
                    throw ValidationError("structure CSV: units line must read '# units: <length>,<energy>'");
                }
                auto trim = [](std::string s) {
                    const auto a = s.find_first_not_of(" \t");
                    const auto b = s.find_last_not_of(" \t");
                    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
                };
                length_scale = core::length_unit_to_natural(trim(row[0].substr(pos + 6)));
                energy_scale = core::energy_unit_to_natural(trim(row[1]));
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        if (row.size() != 2) {
            throw ValidationError("structure CSV: expected two fields per row");
        }
        Segment s;
        try {
            s.potential = std::stod(row[1]) * energy_scale;
            if (row[0] == "lead") {
                s.lead = true;
            } else {
                s.length = std::stod(row[0]) * length_scale;
            }
        } catch (const std::logic_error&) {
            throw ValidationError("structure CSV: malformed row '" + row[0] + "," + row[1] + "'");
        }
        out.push_back(s);
    }
    validate_structure(out);
    return out;
}

void write_spectrum_csv(std::span<const SpectrumPoint> spectrum, const std::filesystem::path& path)
{
    io::CsvWriter csv(path);
    csv.header({"omega", "T", "R"});
    for (const auto& p : spectrum) {
        if (p.result) {
            csv.row({p.omega, p.result->transmittance, p.result->reflectance});
        } else {
            const std::string fields[] = {io::format_double(p.omega), "", ""};
            csv.raw_row(fields);
        }
    }
}

void write_spectrum_json(std::span<const SpectrumPoint> spectrum, const std::filesystem::path& path)
{
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : spectrum) {
        nlohmann::json j;
        j["omega"] = p.omega;
        if (p.result) {
            j["T"] = p.result->transmittance;
            j["R"] = p.result->reflectance;
            j["log_T"] = p.result->log_transmittance;
            j["t"] = {p.result->t.real(), p.result->t.imag()};
            j["r"] = {p.result->r.real(), p.result->r.imag()};
        } else {
            j["gap"] = p.gap_reason;
        }
        points.push_back(std::move(j));
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << nlohmann::json{{"spectrum", points}}.dump(2) << "\n";
}

}  // namespace guideq::scatter
