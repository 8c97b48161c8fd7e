#include "guideq/core/units.hpp"

#include <string>

#include "guideq/errors.hpp"

namespace guideq::core {

namespace {

constexpr double kLength = si::hbar / (si::electron_mass * si::c);
constexpr double kTime = si::hbar / (si::electron_mass * si::c * si::c);
constexpr double kEnergy = si::electron_mass * si::c * si::c;

}  // namespace

double natural_unit_in_si(Dimension dim)
{
    switch (dim) {
    case Dimension::Dimensionless: return 1.0;
    case Dimension::Length: return kLength;
    case Dimension::Time: return kTime;
    case Dimension::Mass: return si::electron_mass;
    case Dimension::Energy: return kEnergy;
    case Dimension::Velocity: return si::c;
    case Dimension::AngularFrequency: return 1.0 / kTime;
    case Dimension::Wavenumber: return 1.0 / kLength;
    case Dimension::Action: return si::hbar;
    }
    return 1.0;
}

double UnitSystem::to_internal(double value, Dimension dim) const
{
    if (mode_ == UnitMode::NaturalElectron) {
        return value;
    }
    return value / natural_unit_in_si(dim);
}

double UnitSystem::to_external(double value, Dimension dim) const
{
    if (mode_ == UnitMode::NaturalElectron) {
        return value;
    }
    return value * natural_unit_in_si(dim);
}

UnitMode parse_unit_mode(std::string_view text)
{
    if (text == "natural") {
        return UnitMode::NaturalElectron;
    }
    if (text == "si" || text == "SI") {
        return UnitMode::SI;
    }
    throw ValidationError("unknown unit system '" + std::string(text) + "' (expected si|natural)");
}

std::string_view to_string(UnitMode mode)
{
    return mode == UnitMode::SI ? "si" : "natural";
}

double length_unit_to_natural(std::string_view name)
{
    if (name == "natural") return 1.0;
    if (name == "m") return 1.0 / kLength;
    if (name == "nm") return 1e-9 / kLength;
    if (name == "pm") return 1e-12 / kLength;
    if (name == "fm") return 1e-15 / kLength;
    if (name == "bohr") return si::bohr_radius / kLength;
    throw ValidationError("unknown length unit '" + std::string(name) + "'");
}

double energy_unit_to_natural(std::string_view name)
{
    if (name == "natural") return 1.0;
    if (name == "J") return 1.0 / kEnergy;
    if (name == "eV") return si::electron_volt / kEnergy;
    if (name == "keV") return 1e3 * si::electron_volt / kEnergy;
    if (name == "MeV") return 1e6 * si::electron_volt / kEnergy;
    throw ValidationError("unknown energy unit '" + std::string(name) + "'");
}

}  // namespace guideq::core
