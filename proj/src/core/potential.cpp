#include "guideq/core/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "guideq/core/units.hpp"
#include "guideq/errors.hpp"

namespace guideq::core {

PotentialProfile::PotentialProfile(UniformGrid grid, std::vector<double> values,
                                   Interpolation interpolation)
    : field_(std::move(grid), std::move(values), interpolation)
{
}

PotentialProfile PotentialProfile::sample(const UniformGrid& grid,
                                          const std::function<double(double)>& v,
                                          Interpolation interpolation)
{
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        values[i] = v(grid[i]);
    }
    return PotentialProfile(grid, std::move(values), interpolation);
}

double PotentialProfile::min_value() const
{
    const auto v = values();
    return *std::min_element(v.begin(), v.end());
}

double PotentialProfile::max_value() const
{
    const auto v = values();
    return *std::max_element(v.begin(), v.end());
}

namespace {

std::string trim(std::string s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& field, std::size_t line_no)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (trim(field.substr(used)).empty()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw ValidationError("profile CSV line " + std::to_string(line_no) + ": '" + field +
                          "' is not a number");
}

}  // namespace

PotentialProfile load_profile_csv(const std::filesystem::path& path, Interpolation interpolation)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open profile CSV " + path.string());
    }
    double length_scale = 1.0;
    double energy_scale = 1.0;
    bool header_seen = false;
    std::vector<double> x;
    std::vector<double> v;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (t.front() == '#') {
            const auto pos = t.find("units:");
            if (pos != std::string::npos) {
                const std::string spec = trim(t.substr(pos + 6));
                const auto comma = spec.find(',');
                if (comma == std::string::npos) {
                    throw ValidationError("profile CSV: units line must read '# units: <length>,<energy>'");
                }
                length_scale = length_unit_to_natural(trim(spec.substr(0, comma)));
                energy_scale = energy_unit_to_natural(trim(spec.substr(comma + 1)));
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto comma = t.find(',');
        if (comma == std::string::npos) {
            throw ValidationError("profile CSV line " + std::to_string(line_no) + ": expected 'x,V'");
        }
        x.push_back(parse_number(t.substr(0, comma), line_no) * length_scale);
        v.push_back(parse_number(t.substr(comma + 1), line_no) * energy_scale);
    }
    if (x.size() < 2) {
        throw ValidationError("profile CSV " + path.string() + " holds fewer than two samples");
    }
    return PotentialProfile(UniformGrid::from_samples(x), std::move(v), interpolation);
}

}  // namespace guideq::core
