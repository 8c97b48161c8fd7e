#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "guideq/core/dispersion.hpp"
#include "guideq/core/particle.hpp"

namespace guideq::scatter {

using Complex = std::complex<double>;

/// Which dispersion governs the axial wavenumber inside a section.
enum class WaveRegime {
    Schrodinger,  // k^2 = 2 m (hbar omega - hbar omega_0 - V) / hbar^2
    KleinGordon,  // omega^2 = (omega_0 + V/hbar)^2 + (ck)^2
};

/// Constant-potential guide section. Leads are semi-infinite; their length
/// is ignored.
struct Segment {
    double length = 0.0;
    double potential = 0.0;
    bool lead = false;

    static Segment make_lead(double potential) { return {0.0, potential, true}; }
    double cutoff(const core::Particle& particle) const;
};

/// 2x2 complex matrix with an overall factor exp(log_scale) kept apart so
/// that thick evanescent sections never overflow.
struct TransferMatrix {
    Complex m11{1.0}, m12{0.0}, m21{0.0}, m22{1.0};
    double log_scale = 0.0;

    Complex det() const { return m11 * m22 - m12 * m21; }
    /// Determinant including the scale factor (exp(2 log_scale) det).
    Complex full_det() const;
    TransferMatrix operator*(const TransferMatrix& rhs) const;
};

/// Complex propagation constant q: real k above cutoff, i*kappa below, so that
/// exp(i q x) is the forward (or decaying) wave.
Complex propagation_constant(const core::Wavenumber& k);

core::Wavenumber axial_wavenumber(double omega, const Segment& segment, const core::Particle& particle,
                                  WaveRegime regime = WaveRegime::Schrodinger);

/// Amplitude basis (forward, backward): matching psi and psi' across a step
/// from q_in to q_out. For real wavenumbers det = k_in / k_out.
TransferMatrix interface_matrix(Complex q_in, Complex q_out);
/// Amplitude basis: phase (or decay/growth) across a section of length L.
TransferMatrix propagation_matrix(Complex q, double length);

/// Field basis (psi, psi'): exact propagator across one constant section.
/// Interfaces are the identity in this basis (continuity of psi and psi').
TransferMatrix field_matrix(const core::Wavenumber& k, double length);

/// Field-basis product over interior sections, left to right.
TransferMatrix chain_matrix(std::span<const Segment> interior, double omega,
                            const core::Particle& particle, WaveRegime regime);

struct ScatteringResult {
    double omega = 0.0;
    Complex r;
    Complex t;
    double reflectance = 0.0;    // R = |r|^2
    double transmittance = 0.0;  // T = (k_out / k_in) |t|^2
    double log_transmittance = 0.0;
};

/// Checks the lead/interior layout; throws ValidationError.
void validate_structure(std::span<const Segment> segments);

/// Wave incident from the left lead. Throws DomainError when a lead carries
/// no propagating channel at omega.
ScatteringResult scattering(std::span<const Segment> segments, double omega,
                            const core::Particle& particle,
                            WaveRegime regime = WaveRegime::Schrodinger);

/// Same quantity composed from amplitude-basis interface and propagation
/// matrices. Independent algebraic route; no overflow guard.
ScatteringResult scattering_amplitude_route(std::span<const Segment> segments, double omega,
                                            const core::Particle& particle,
                                            WaveRegime regime = WaveRegime::Schrodinger);

struct SpectrumPoint {
    double omega = 0.0;
    std::optional<ScatteringResult> result;  // empty: no propagating lead channel
    std::string gap_reason;
};

/// Uniform sweep over [omega_min, omega_max]; parallel over points.
std::vector<SpectrumPoint> transmission_spectrum(std::span<const Segment> segments, double omega_min,
                                                 double omega_max, std::size_t n_points,
                                                 const core::Particle& particle,
                                                 WaveRegime regime = WaveRegime::Schrodinger,
                                                 unsigned threads = 0);

/// Structure CSV: header `length,V`; the first and last data rows read
/// `lead,<V>`; optional `# units: <length>,<energy>` comment.
std::vector<Segment> load_structure_csv(const std::filesystem::path& path);

void write_spectrum_csv(std::span<const SpectrumPoint> spectrum, const std::filesystem::path& path);
void write_spectrum_json(std::span<const SpectrumPoint> spectrum, const std::filesystem::path& path);

}  // namespace guideq::scatter
