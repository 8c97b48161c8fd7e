#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "guideq/errors.hpp"

namespace guideq::cli {

using nlohmann::json;
using core::Dimension;

ScenarioUnits::ScenarioUnits(core::UnitMode mode, double length_factor, double energy_factor)
    : mode_(mode), length_(length_factor), energy_(energy_factor)
{
}

double ScenarioUnits::factor(Dimension dim) const
{
    switch (dim) {
    case Dimension::Dimensionless:
        return 1.0;
    case Dimension::Length:
        return length_;
    case Dimension::Energy:
        return energy_;
    case Dimension::Wavenumber:
        return 1.0 / length_;
    default:
        break;
    }
    if (mode_ == core::UnitMode::NaturalElectron) {
        return 1.0;
    }
    return 1.0 / core::natural_unit_in_si(dim);
}

namespace {

struct Context {
    bool strict;
    std::vector<std::string>* warnings;
    const ScenarioUnits* units;
};

[[noreturn]] void fail(const std::string& path, const std::string& message)
{
    throw ValidationError(path + ": " + message);
}

std::string describe(double v)
{
    std::ostringstream s;
    s << v;
    return s.str();
}

// View of one JSON object that records which keys were read, so unknown
// keys can be reported once the block is parsed.
class Node {
public:
    Node(const json& j, std::string path, Context ctx) : j_(j), path_(std::move(path)), ctx_(ctx)
    {
        if (!j_.is_object()) {
            fail(path_, "must be an object");
        }
    }

    bool has(const std::string& key) const { return j_.contains(key); }
    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    double number(const std::string& key, Dimension dim, std::optional<double> fallback = std::nullopt)
    {
        used_.insert(key);
        if (!j_.contains(key)) {
            if (!fallback) {
                fail(at(key), "required number is missing");
            }
            return *fallback;
        }
        const auto& v = j_.at(key);
        if (!v.is_number()) {
            fail(at(key), "must be a number");
        }
        const double x = v.get<double>() * ctx_.units->factor(dim);
        if (!std::isfinite(x)) {
            fail(at(key), "must be finite");
        }
        return x;
    }

    double positive(const std::string& key, Dimension dim, std::optional<double> fallback = std::nullopt)
    {
        const double x = number(key, dim, fallback);
        if (!(x > 0.0)) {
            fail(at(key), "must be positive (got " + describe(j_.contains(key) ? j_.at(key).get<double>() : x) + ")");
        }
        return x;
    }

    int integer(const std::string& key, std::optional<int> fallback, int lo, int hi)
    {
        used_.insert(key);
        if (!j_.contains(key)) {
            if (!fallback) {
                fail(at(key), "required integer is missing");
            }
            return *fallback;
        }
        const auto& v = j_.at(key);
        if (!v.is_number_integer()) {
            fail(at(key), "must be an integer");
        }
        const auto x = v.get<long long>();
        if (x < lo || x > hi) {
            fail(at(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "] (got " +
                              std::to_string(x) + ")");
        }
        return static_cast<int>(x);
    }

    std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt)
    {
        used_.insert(key);
        if (!j_.contains(key)) {
            if (!fallback) {
                fail(at(key), "required string is missing");
            }
            return *fallback;
        }
        if (!j_.at(key).is_string()) {
            fail(at(key), "must be a string");
        }
        return j_.at(key).get<std::string>();
    }

    bool boolean(const std::string& key, bool fallback)
    {
        used_.insert(key);
        if (!j_.contains(key)) {
            return fallback;
        }
        if (!j_.at(key).is_boolean()) {
            fail(at(key), "must be true or false");
        }
        return j_.at(key).get<bool>();
    }

    Node object(const std::string& key)
    {
        used_.insert(key);
        if (!j_.contains(key)) {
            fail(at(key), "required block is missing");
        }
        return Node(j_.at(key), at(key), ctx_);
    }

    std::vector<double> numbers(const std::string& key, Dimension dim)
    {
        used_.insert(key);
        if (!j_.contains(key) || !j_.at(key).is_array()) {
            fail(at(key), "must be an array of numbers");
        }
        std::vector<double> out;
        for (const auto& v : j_.at(key)) {
            if (!v.is_number()) {
                fail(at(key), "must contain only numbers");
            }
            out.push_back(v.get<double>() * ctx_.units->factor(dim));
        }
        return out;
    }

    const json& array(const std::string& key)
    {
        used_.insert(key);
        if (!j_.contains(key) || !j_.at(key).is_array()) {
            fail(at(key), "must be an array");
        }
        return j_.at(key);
    }

    void mark(const std::string& key) { used_.insert(key); }

    void finish() const
    {
        for (const auto& item : j_.items()) {
            if (used_.count(item.key())) {
                continue;
            }
            const std::string msg = at(item.key()) + ": unknown key";
            if (ctx_.strict) {
                fail(at(item.key()), "unknown key");
            }
            ctx_.warnings->push_back(msg);
        }
    }

    Context context() const { return ctx_; }

private:
    const json& j_;
    std::string path_;
    Context ctx_;
    std::set<std::string> used_;
};

// One of two alternative keys; the second is an energy above the rest energy.
double frequency_or_energy(Node& n, const std::string& omega_key, const std::string& energy_key, double rest)
{
    const bool has_omega = n.has(omega_key);
    const bool has_energy = n.has(energy_key);
    if (has_omega == has_energy) {
        fail(n.at(omega_key), "give exactly one of '" + omega_key + "' or '" + energy_key + "'");
    }
    if (has_omega) {
        return n.positive(omega_key, Dimension::AngularFrequency);
    }
    return rest + n.number(energy_key, Dimension::Energy);
}

ScenarioUnits parse_units(const json& root)
{
    if (!root.contains("units")) {
        return {};
    }
    const auto& u = root.at("units");
    std::string system;
    std::string length;
    std::string energy;
    if (u.is_string()) {
        system = u.get<std::string>();
    } else if (u.is_object()) {
        for (const auto& item : u.items()) {
            if (item.key() != "system" && item.key() != "length" && item.key() != "energy") {
                fail("units." + item.key(), "unknown key");
            }
            if (!item.value().is_string()) {
                fail("units." + item.key(), "must be a string");
            }
        }
        system = u.value("system", std::string("natural"));
        length = u.value("length", std::string());
        energy = u.value("energy", std::string());
    } else {
        fail("units", "must be \"natural\", \"si\" or an object");
    }
    core::UnitMode mode;
    try {
        mode = core::parse_unit_mode(system);
    } catch (const std::exception& e) {
        fail("units.system", e.what());
    }
    const bool si = mode == core::UnitMode::SI;
    if (length.empty()) {
        length = si ? "m" : "natural";
    }
    if (energy.empty()) {
        energy = si ? "J" : "natural";
    }
    double lf;
    double ef;
    try {
        lf = core::length_unit_to_natural(length);
    } catch (const std::exception& e) {
        fail("units.length", e.what());
    }
    try {
        ef = core::energy_unit_to_natural(energy);
    } catch (const std::exception& e) {
        fail("units.energy", e.what());
    }
    return ScenarioUnits(mode, lf, ef);
}

core::Interpolation parse_interpolation(Node& n)
{
    const auto s = n.string("interpolation", std::string("spline"));
    if (s == "spline") {
        return core::Interpolation::CubicSpline;
    }
    if (s == "linear") {
        return core::Interpolation::Linear;
    }
    fail(n.at("interpolation"), "must be \"spline\" or \"linear\"");
}

core::PotentialProfile parse_potential(Node n, const std::filesystem::path& base, double mass)
{
    const auto family = n.string("family");
    const auto interp = parse_interpolation(n);
    if (family == "inline") {
        const auto x = n.numbers("x", Dimension::Length);
        const auto v = n.numbers("V", Dimension::Energy);
        if (x.size() != v.size() || x.size() < 2) {
            fail(n.at("V"), "needs at least 2 samples, one per x");
        }
        n.finish();
        return core::PotentialProfile(core::UniformGrid::from_samples(x), v, interp);
    }
    if (family == "csv") {
        const auto file = n.string("path");
        n.finish();
        const std::filesystem::path p = std::filesystem::path(file).is_absolute() ? std::filesystem::path(file) : base / file;
        return core::load_profile_csv(p, interp);
    }
    const double x_min = n.number("x_min", Dimension::Length);
    const double x_max = n.number("x_max", Dimension::Length);
    const int points = n.integer("points", std::nullopt, 2, 10'000'000);
    if (!(x_max > x_min)) {
        fail(n.at("x_max"), "must exceed x_min");
    }
    std::function<double(double)> fn;
    if (family == "constant") {
        const double v = n.number("value", Dimension::Energy, 0.0);
        fn = [v](double) { return v; };
    } else if (family == "ramp") {
        const double slope = n.number("slope", Dimension::Energy) / n.context().units->factor(Dimension::Length);
        const double offset = n.number("offset", Dimension::Energy, 0.0);
        fn = [=](double x) { return offset + slope * x; };
    } else if (family == "gaussian_bump") {
        const double height = n.number("height", Dimension::Energy);
        const double width = n.positive("width", Dimension::Length);
        const double center = n.number("center", Dimension::Length, 0.0);
        fn = [=](double x) { return height * std::exp(-(x - center) * (x - center) / (2.0 * width * width)); };
    } else if (family == "square_barrier") {
        const double height = n.number("height", Dimension::Energy);
        const double lo = n.number("left", Dimension::Length);
        const double hi = n.number("right", Dimension::Length);
        if (!(hi > lo)) {
            fail(n.at("right"), "must exceed left");
        }
        fn = [=](double x) { return x > lo && x < hi ? height : 0.0; };
    } else if (family == "harmonic") {
        const double length = n.context().units->factor(Dimension::Length);
        const double k = n.positive("stiffness", Dimension::Energy) / (length * length);
        const double center = n.number("center", Dimension::Length, 0.0);
        fn = [=](double x) { return 0.5 * k * (x - center) * (x - center); };
    } else if (family == "coulomb_radial_effective") {
        const double length = n.context().units->factor(Dimension::Length);
        const double coupling = n.positive("coupling", Dimension::Energy) * length;
        const double ell = n.number("angular_momentum", Dimension::Dimensionless, 0.0);
        if (ell < 0.0) {
            fail(n.at("angular_momentum"), "must not be negative");
        }
        if (!(x_min > 0.0)) {
            fail(n.at("x_min"), "must be positive for the radial Coulomb family");
        }
        fn = [=](double r) { return -coupling / r + ell * (ell + 1.0) / (2.0 * mass * r * r); };
    } else {
        fail(n.at("family"), "unknown family '" + family +
                                 "' (constant, ramp, gaussian_bump, square_barrier, harmonic, "
                                 "coulomb_radial_effective, inline, csv)");
    }
    n.finish();
    return core::PotentialProfile::sample(core::UniformGrid(x_min, x_max, static_cast<std::size_t>(points)), fn,
                                          interp);
}

TunnelBlock parse_tunnel(Node n, double rest)
{
    TunnelBlock b;
    const double left = n.number("lead_left", Dimension::Energy, 0.0);
    const double right = n.number("lead_right", Dimension::Energy, 0.0);
    b.segments.push_back(scatter::Segment::make_lead(left));
    const auto& segs = n.array("segments");
    if (segs.empty()) {
        fail(n.at("segments"), "needs at least one segment");
    }
    for (std::size_t i = 0; i < segs.size(); ++i) {
        Node s(segs[i], n.at("segments") + "[" + std::to_string(i) + "]", n.context());
        const double length = s.positive("length", Dimension::Length);
        const double v = s.number("potential", Dimension::Energy);
        s.finish();
        b.segments.push_back({length, v, false});
    }
    b.segments.push_back(scatter::Segment::make_lead(right));
    b.omega_min = frequency_or_energy(n, "omega_min", "energy_min", rest);
    b.omega_max = frequency_or_energy(n, "omega_max", "energy_max", rest);
    if (!(b.omega_max > b.omega_min)) {
        fail(n.at("omega_max"), "upper end of the sweep must exceed the lower end");
    }
    b.points = n.integer("points", 200, 2, 1'000'000);
    const auto regime = n.string("regime", std::string("schrodinger"));
    if (regime == "schrodinger") {
        b.regime = scatter::WaveRegime::Schrodinger;
    } else if (regime == "klein_gordon") {
        b.regime = scatter::WaveRegime::KleinGordon;
    } else {
        fail(n.at("regime"), "must be \"schrodinger\" or \"klein_gordon\"");
    }
    n.finish();
    return b;
}

EvolveBlock parse_evolve(Node n)
{
    EvolveBlock b;
    const auto solver = n.string("solver");
    if (solver == "schrodinger") {
        b.solver = SolverKind::Schrodinger;
    } else if (solver == "klein_gordon") {
        b.solver = SolverKind::KleinGordon;
    } else if (solver == "eigen") {
        b.solver = SolverKind::Eigen;
    } else {
        fail(n.at("solver"), "must be \"schrodinger\", \"klein_gordon\" or \"eigen\"");
    }
    if (b.solver == SolverKind::Eigen) {
        b.states = n.integer("states", 1, 1, 100000);
        b.box = n.boolean("box", false);
        n.finish();
        return b;
    }
    Node packet = n.object("packet");
    b.x0 = packet.number("x0", Dimension::Length);
    b.sigma = packet.positive("sigma", Dimension::Length);
    b.k0 = packet.number("k0", Dimension::Wavenumber, 0.0);
    packet.finish();
    b.config.dt = n.positive("dt", Dimension::Time);
    b.config.n_steps = static_cast<std::size_t>(n.integer("steps", std::nullopt, 1, 100'000'000));
    b.config.snapshot_every = static_cast<std::size_t>(n.integer("snapshot_every", 0, 0, 100'000'000));
    b.config.rest_phase = n.boolean("rest_phase", true);
    b.config.sponge_fraction = n.number("sponge_fraction", Dimension::Dimensionless, 0.1);
    const auto boundary = n.string("boundary", std::string(b.solver == SolverKind::KleinGordon ? "periodic"
                                                                                                : "absorbing"));
    if (boundary == "periodic") {
        b.config.boundary = solvers::Boundary::Periodic;
    } else if (boundary == "absorbing") {
        b.config.boundary = solvers::Boundary::Absorbing;
    } else if (boundary == "dirichlet") {
        b.config.boundary = solvers::Boundary::Dirichlet;
    } else {
        fail(n.at("boundary"), "must be \"periodic\", \"absorbing\" or \"dirichlet\"");
    }
    n.finish();
    return b;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::filesystem::path& origin, bool strict)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw ValidationError("scenario must be a JSON object");
    }
    Scenario sc;
    sc.path = origin;
    sc.text = text;
    sc.units = parse_units(root);
    const Context ctx{strict, &sc.warnings, &sc.units};
    Node n(root, "", ctx);
    n.mark("units");
    const int version = n.integer("schema_version", std::nullopt, 0, 1000);
    if (version != schema_version) {
        fail("schema_version", "unsupported version " + std::to_string(version) + " (expected " +
                                   std::to_string(schema_version) + ")");
    }
    sc.name = n.string("name");

    Node particle = n.object("particle");
    if (particle.has("species")) {
        const auto species = particle.string("species");
        if (species != "electron") {
            fail(particle.at("species"), "only \"electron\" is known; give \"mass\" instead");
        }
        if (particle.has("mass")) {
            fail(particle.at("mass"), "give either species or mass, not both");
        }
        sc.mass = 1.0;
    } else {
        sc.mass = particle.positive("mass", Dimension::Mass);
    }
    particle.finish();
    const double rest = sc.mass;

    const auto base = origin.has_parent_path() ? origin.parent_path() : std::filesystem::path(".");
    if (n.has("potential")) {
        sc.potential = parse_potential(n.object("potential"), base, sc.mass);
    }
    if (n.has("dispersion")) {
        Node b = n.object("dispersion");
        DispersionBlock d;
        d.k_min = b.number("k_min", Dimension::Wavenumber);
        d.k_max = b.number("k_max", Dimension::Wavenumber);
        d.points = b.integer("points", 201, 2, 10'000'000);
        d.potential = b.number("potential", Dimension::Energy, 0.0);
        if (d.k_min < 0.0 || !(d.k_max > d.k_min)) {
            fail(b.at("k_max"), "need 0 <= k_min < k_max");
        }
        b.finish();
        sc.dispersion = d;
    }
    if (n.has("geometry")) {
        Node b = n.object("geometry");
        GeometryBlock g;
        if (b.has("omega") || b.has("energy")) {
            g.omega = frequency_or_energy(b, "omega", "energy", rest);
        }
        g.wkb_threshold = b.positive("wkb_threshold", Dimension::Dimensionless, 1.0);
        b.finish();
        sc.geometry = g;
    }
    if (n.has("trace")) {
        Node b = n.object("trace");
        TraceBlock t;
        t.omega = b.positive("omega", Dimension::AngularFrequency);
        t.duration = b.positive("duration", Dimension::Time);
        if (b.has("x0")) {
            t.x0 = b.number("x0", Dimension::Length);
        }
        b.finish();
        sc.trace = t;
    }
    if (n.has("tunnel")) {
        sc.tunnel = parse_tunnel(n.object("tunnel"), rest);
    }
    if (n.has("orbits")) {
        Node b = n.object("orbits");
        OrbitsBlock o;
        o.n_max = b.integer("n_max", 5, 1, 10000);
        o.coupling = b.positive("coupling", Dimension::Dimensionless, core::si::fine_structure);
        b.finish();
        sc.orbits = o;
    }
    if (n.has("qpotential")) {
        Node b = n.object("qpotential");
        QpotentialBlock q;
        q.omega = frequency_or_energy(b, "omega", "energy", rest);
        if (b.has("trajectory")) {
            Node t = b.object("trajectory");
            TrajectoryBlock tr;
            tr.x0 = t.number("x0", Dimension::Length);
            tr.v0 = t.number("v0", Dimension::Velocity, 0.0);
            tr.duration = t.positive("duration", Dimension::Time);
            tr.dt = t.number("dt", Dimension::Time, 0.0);
            if (tr.dt < 0.0) {
                fail(t.at("dt"), "must not be negative");
            }
            tr.sample_every = t.integer("sample_every", 0, 0, 100'000'000);
            tr.quantum = t.boolean("quantum", true);
            const auto source = t.string("source", std::string("local"));
            if (source != "local" && source != "bohm") {
                fail(t.at("source"), "must be \"local\" or \"bohm\"");
            }
            tr.bohm_source = source == "bohm";
            t.finish();
            q.trajectory = tr;
        }
        b.finish();
        sc.qpotential = q;
    }
    if (n.has("evolve")) {
        sc.evolve = parse_evolve(n.object("evolve"));
    }
    n.finish();
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path, bool strict)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read scenario " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path, strict);
}

}  // namespace guideq::cli
