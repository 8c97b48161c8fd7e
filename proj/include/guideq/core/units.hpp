#pragma once

#include <string_view>

namespace guideq::core {

/// CODATA 2018 values. Everything inside the library runs in natural
/// electron units (c = hbar = m_e = 1); these are only used at I/O.
namespace si {
inline constexpr double c = 299792458.0;                 // m/s
inline constexpr double h = 6.62607015e-34;              // J s
inline constexpr double hbar = 1.054571817646156e-34;    // h / 2pi
inline constexpr double electron_mass = 9.1093837015e-31;  // kg
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double fine_structure = 7.2973525693e-3;
inline constexpr double electron_volt = elementary_charge;  // J
inline constexpr double rydberg_energy_ev = 13.605693122994;
inline constexpr double bohr_radius = 5.29177210903e-11;  // m
}  // namespace si

enum class Dimension {
    Dimensionless,
    Length,
    Time,
    Mass,
    Energy,
    Velocity,
    AngularFrequency,
    Wavenumber,
    Action,
};

/// Size of one natural unit of the given dimension, expressed in SI.
double natural_unit_in_si(Dimension dim);

enum class UnitMode { NaturalElectron, SI };

/// Boundary conversion between an external unit convention and the
/// internal natural one.
class UnitSystem {
public:
    explicit UnitSystem(UnitMode mode = UnitMode::NaturalElectron) : mode_(mode) {}

    UnitMode mode() const { return mode_; }

    double to_internal(double value, Dimension dim) const;
    double to_external(double value, Dimension dim) const;

private:
    UnitMode mode_;
};

UnitMode parse_unit_mode(std::string_view text);
std::string_view to_string(UnitMode mode);

/// Scale factor from a named length unit ("m", "nm", "pm", "fm",
/// "natural", "bohr") to natural length units.
double length_unit_to_natural(std::string_view name);

/// Scale factor from a named energy unit ("J", "eV", "keV", "MeV",
/// "natural") to natural energy units (m_e c^2).
double energy_unit_to_natural(std::string_view name);

inline double ev_to_natural(double ev) { return ev * energy_unit_to_natural("eV"); }
inline double natural_to_ev(double e) { return e / energy_unit_to_natural("eV"); }

}  // namespace guideq::core
