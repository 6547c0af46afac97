#include "phc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "phc/errors.hpp"

namespace phc {
namespace {

struct KeySpec {
    const char* key;
    const char* fallback;
};

// Fixed key order: defaults reproduce the 100 m/s^2, 2 T_half = 60 us,
// room-temperature diamond scenario.
const KeySpec kKeys[] = {
    {"material", "diamond"},
    {"material_file", ""},
    {"lattice_constant", ""},
    {"atom_mass", ""},
    {"atoms_per_cell", ""},
    {"sound_speed", ""},
    {"density", ""},
    {"chain_site_mass", "1.9926468799199999e-26"},
    {"length", "1e-07"},
    {"sites", "0"},
    {"spin_site", "center"},
    {"protocol", "1"},
    {"profile", ""},
    {"a_max", "100"},
    {"t_half", "3e-05"},
    {"gradient", ""},
    {"magnetic_moment", "9.2740100783e-24"},
    {"t_half_in_sound_times", ""},
    {"t_ph", "293"},
    {"t_ph_in_quanta", ""},
    {"t_cm", "0"},
    {"b0", "0"},
    {"com_delta_z", ""},
    {"com_delta_p", ""},
    {"com_sigma_z", ""},
    {"regime", "1d"},
    {"thermal_model", "quantum"},
    {"prefactor", "1"},
    {"seed", "1"},
    {"spin_radius_fraction", "0.1"},
    {"spin_alignment", "1"},
    {"second_harmonic", "false"},
    {"sweep_variable", "L"},
    {"sweep_min", "1e-08"},
    {"sweep_max", "2e-07"},
    {"sweep_count", "20"},
    {"sweep_scale", "log"},
    {"constraint", "fixed-acceleration"},
    {"split_fraction", "0.1"},
    {"dv_max", "0.001"},
    {"gradient_cap", "1000000"},
    {"t_half_cap", "0.0001"},
    {"oracle_sites", "64"},
    {"oracle_loop_factor", "0.7"},
    {"oracle_dt_fraction", "0.0035"},
    {"oracle_dd_dt_fraction", "0.0004"},
    {"oracle_a_max", "1e15"},
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

[[noreturn]] void fail(const std::string& key, const ConfigEntry& e, const std::string& msg) {
    std::string where = e.source == "default" || e.source == "cli" ? " (" + e.source + ")" : " in " + e.source;
    throw ValidationError(key + ": " + msg + where, e.line);
}

double to_double(const std::string& key, const ConfigEntry& e) {
    const std::string v = trim(e.value);
    double x = 0.0;
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (v.empty() || ec != std::errc() || ptr != end || !std::isfinite(x))
        fail(key, e, "expected a number, got '" + e.value + "'");
    return x;
}

double to_positive(const std::string& key, const ConfigEntry& e) {
    const double x = to_double(key, e);
    if (!(x > 0.0)) fail(key, e, "must be positive");
    return x;
}

double to_nonneg(const std::string& key, const ConfigEntry& e) {
    const double x = to_double(key, e);
    if (x < 0.0) fail(key, e, "must be non-negative");
    return x;
}

std::uint64_t to_uint(const std::string& key, const ConfigEntry& e) {
    const std::string v = trim(e.value);
    std::uint64_t x = 0;
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (v.empty() || ec != std::errc() || ptr != end)
        fail(key, e, "expected a non-negative integer, got '" + e.value + "'");
    return x;
}

bool to_bool(const std::string& key, const ConfigEntry& e) {
    const std::string v = lower(trim(e.value));
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(key, e, "expected true or false, got '" + e.value + "'");
}

std::optional<double> to_optional(const std::string& key, const ConfigEntry& e) {
    if (trim(e.value).empty()) return std::nullopt;
    return to_double(key, e);
}

void parse_key_values(std::istream& in, const std::function<void(const std::string&, const std::string&, int)>& sink) {
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ValidationError("expected 'key = value', got '" + t + "'", number);
        const std::string key = trim(std::string_view(t).substr(0, eq));
        std::string value = trim(std::string_view(t).substr(eq + 1));
        if (const auto hash = value.find(" #"); hash != std::string::npos) value = trim(value.substr(0, hash));
        if (key.empty()) throw ValidationError("empty key", number);
        sink(key, value, number);
    }
}

}  // namespace

std::string to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::length: return "L";
        case SweepVariable::a_max: return "a_max";
        case SweepVariable::t_half: return "T_half";
        case SweepVariable::t_ph: return "T_ph";
        case SweepVariable::spin_site: return "s";
    }
    return "unknown";
}

std::string to_string(Constraint c) {
    return c == Constraint::fixed_acceleration ? "fixed-acceleration" : "fixed-fractional-splitting";
}

MaterialSpec read_material(std::istream& in) {
    MaterialSpec m;
    m.name = "custom";
    parse_key_values(in, [&](const std::string& key, const std::string& value, int line) {
        const ConfigEntry e{value, "material file", line};
        if (key == "name")
            m.name = value;
        else if (key == "lattice_constant")
            m.lattice_constant = to_positive(key, e);
        else if (key == "atom_mass")
            m.atom_mass = to_positive(key, e);
        else if (key == "atoms_per_cell")
            m.atoms_per_cell = static_cast<int>(to_uint(key, e));
        else if (key == "sound_speed")
            m.sound_speed = to_positive(key, e);
        else if (key == "density")
            m.density = to_positive(key, e);
        else
            throw ValidationError("unknown material key '" + key + "'", line);
    });
    try {
        m.validate();
    } catch (const std::invalid_argument& ex) {
        throw ValidationError(ex.what());
    }
    return m;
}

MaterialSpec load_material(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open material file '" + path + "'");
    return read_material(in);
}

const std::vector<std::string>& ConfigLayers::keys() {
    static const std::vector<std::string> k = [] {
        std::vector<std::string> out;
        for (const auto& s : kKeys) out.emplace_back(s.key);
        return out;
    }();
    return k;
}

ConfigLayers::ConfigLayers() {
    for (const auto& s : kKeys) entries_[s.key] = ConfigEntry{s.fallback, "default", 0};
}

void ConfigLayers::load_stream(std::istream& in, const std::string& source) {
    parse_key_values(in, [&](const std::string& key, const std::string& value, int line) {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ValidationError("unknown key '" + key + "' in " + source, line);
        it->second = ConfigEntry{value, source, line};
    });
}

void ConfigLayers::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    load_stream(in, path);
}

void ConfigLayers::set(const std::string& key, const std::string& value, const std::string& source) {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ValidationError("unknown key '" + key + "' (" + source + ")");
    it->second = ConfigEntry{value, source, 0};
}

void ConfigLayers::echo(std::ostream& out) const {
    for (const auto& k : keys()) out << "# " << k << " = " << entries_.at(k).value << "\n";
}

RunConfig ConfigLayers::resolve() const {
    RunConfig c;
    auto get = [&](const char* key) -> const ConfigEntry& { return entries_.at(key); };
    auto num = [&](const char* key) { return to_double(key, get(key)); };
    auto pos = [&](const char* key) { return to_positive(key, get(key)); };
    auto nonneg = [&](const char* key) { return to_nonneg(key, get(key)); };
    auto opt = [&](const char* key) { return to_optional(key, get(key)); };
    auto text = [&](const char* key) { return lower(trim(get(key).value)); };

    {
        const auto& e = get("material");
        const std::string name = lower(trim(e.value));
        if (name != "diamond") fail("material", e, "unknown preset '" + e.value + "' (known: diamond)");
        c.material = MaterialSpec::diamond();
        if (!trim(get("material_file").value).empty()) {
            const auto& f = get("material_file");
            try {
                c.material = load_material(trim(f.value));
            } catch (const ValidationError& ex) {
                fail("material_file", f, ex.what());
            }
        }
        if (!trim(get("lattice_constant").value).empty()) c.material.lattice_constant = pos("lattice_constant");
        if (!trim(get("atom_mass").value).empty()) c.material.atom_mass = pos("atom_mass");
        if (!trim(get("atoms_per_cell").value).empty())
            c.material.atoms_per_cell = static_cast<int>(to_uint("atoms_per_cell", get("atoms_per_cell")));
        if (!trim(get("sound_speed").value).empty()) c.material.sound_speed = pos("sound_speed");
        if (!trim(get("density").value).empty()) c.material.density = pos("density");
    }
    c.chain_site_mass = pos("chain_site_mass");
    c.length = pos("length");
    c.sites = to_uint("sites", get("sites"));
    if (c.sites == 1) fail("sites", get("sites"), "a chain needs at least 2 sites (0 derives N from length)");

    {
        const auto& e = get("spin_site");
        const std::string v = lower(trim(e.value));
        if (v == "end")
            c.spin_placement = SpinPlacement::end;
        else if (v == "center" || v == "centre")
            c.spin_placement = SpinPlacement::center;
        else {
            c.spin_placement = SpinPlacement::index;
            c.spin_index = to_uint("spin_site", e);
        }
    }
    {
        const auto& e = get("protocol");
        const std::string v = lower(trim(e.value));
        if (v == "custom") {
            c.protocol = -1;
        } else {
            const auto n = to_uint("protocol", e);
            if (n > 2) fail("protocol", e, "expected 0, 1, 2 or custom");
            c.protocol = static_cast<int>(n);
        }
    }
    c.profile = trim(get("profile").value);
    if (c.protocol < 0 && c.profile.empty()) fail("profile", get("profile"), "protocol = custom needs a profile path");
    c.a_max = nonneg("a_max");
    c.t_half = pos("t_half");
    c.gradient = opt("gradient");
    if (c.gradient && *c.gradient < 0.0) fail("gradient", get("gradient"), "must be non-negative");
    c.magnetic_moment = pos("magnetic_moment");
    c.t_half_in_sound_times = opt("t_half_in_sound_times");
    if (c.t_half_in_sound_times && !(*c.t_half_in_sound_times > 0.0))
        fail("t_half_in_sound_times", get("t_half_in_sound_times"), "must be positive");
    c.t_ph = nonneg("t_ph");
    c.t_ph_in_quanta = opt("t_ph_in_quanta");
    if (c.t_ph_in_quanta && *c.t_ph_in_quanta < 0.0)
        fail("t_ph_in_quanta", get("t_ph_in_quanta"), "must be non-negative");
    c.t_cm = nonneg("t_cm");
    c.b0 = num("b0");
    c.com_delta_z = opt("com_delta_z");
    c.com_delta_p = opt("com_delta_p");
    c.com_sigma_z = opt("com_sigma_z");
    if (c.com_sigma_z && !(*c.com_sigma_z > 0.0)) fail("com_sigma_z", get("com_sigma_z"), "must be positive");

    {
        const auto& e = get("regime");
        const std::string v = text("regime");
        if (v == "1d" || v == "exact-1d")
            c.regime = Regime::exact_1d;
        else if (v == "3d" || v == "sphere-dominant")
            c.regime = Regime::sphere_dominant;
        else if (v == "macro" || v == "macroscopic")
            c.regime = Regime::macroscopic;
        else
            fail("regime", e, "expected 1d, 3d or macro");
    }
    {
        const std::string v = text("thermal_model");
        if (v == "quantum")
            c.thermal_model = ThermalModel::quantum;
        else if (v == "classical")
            c.thermal_model = ThermalModel::classical;
        else
            fail("thermal_model", get("thermal_model"), "expected quantum or classical");
    }
    c.prefactor = pos("prefactor");
    c.seed = to_uint("seed", get("seed"));
    c.spin_radius_fraction = nonneg("spin_radius_fraction");
    if (c.spin_radius_fraction > 1.0)
        fail("spin_radius_fraction", get("spin_radius_fraction"), "must lie in [0, 1]");
    c.spin_alignment = nonneg("spin_alignment");
    if (c.spin_alignment > 1.0) fail("spin_alignment", get("spin_alignment"), "must lie in [0, 1]");
    c.second_harmonic = to_bool("second_harmonic", get("second_harmonic"));

    {
        const auto& e = get("sweep_variable");
        const std::string v = text("sweep_variable");
        if (v == "l" || v == "length")
            c.sweep_variable = SweepVariable::length;
        else if (v == "a_max")
            c.sweep_variable = SweepVariable::a_max;
        else if (v == "t_half")
            c.sweep_variable = SweepVariable::t_half;
        else if (v == "t_ph")
            c.sweep_variable = SweepVariable::t_ph;
        else if (v == "s" || v == "spin_site")
            c.sweep_variable = SweepVariable::spin_site;
        else
            fail("sweep_variable", e, "expected L, a_max, T_half, T_ph or s");
    }
    c.sweep_min = num("sweep_min");
    c.sweep_max = num("sweep_max");
    if (!(c.sweep_min < c.sweep_max)) fail("sweep_max", get("sweep_max"), "sweep_min must be below sweep_max");
    c.sweep_count = to_uint("sweep_count", get("sweep_count"));
    if (c.sweep_count < 2) fail("sweep_count", get("sweep_count"), "need at least 2 points");
    {
        const std::string v = text("sweep_scale");
        if (v == "log")
            c.sweep_scale = SweepScale::log;
        else if (v == "linear")
            c.sweep_scale = SweepScale::linear;
        else
            fail("sweep_scale", get("sweep_scale"), "expected log or linear");
        if (c.sweep_scale == SweepScale::log && !(c.sweep_min > 0.0))
            fail("sweep_min", get("sweep_min"), "log sweeps need a positive minimum");
    }
    {
        const std::string v = text("constraint");
        if (v == "fixed-acceleration")
            c.constraint = Constraint::fixed_acceleration;
        else if (v == "fixed-fractional-splitting")
            c.constraint = Constraint::fixed_fractional_splitting;
        else
            fail("constraint", get("constraint"), "expected fixed-acceleration or fixed-fractional-splitting");
    }
    c.split_fraction = pos("split_fraction");
    c.dv_max = pos("dv_max");
    c.gradient_cap = pos("gradient_cap");
    c.t_half_cap = pos("t_half_cap");

    c.oracle_sites = to_uint("oracle_sites", get("oracle_sites"));
    if (c.oracle_sites < 2 || c.oracle_sites > 512)
        fail("oracle_sites", get("oracle_sites"), "oracle chains need 2 to 512 sites");
    c.oracle_loop_factor = pos("oracle_loop_factor");
    c.oracle_dt_fraction = pos("oracle_dt_fraction");
    c.oracle_dd_dt_fraction = pos("oracle_dd_dt_fraction");
    c.oracle_a_max = nonneg("oracle_a_max");

    try {
        c.material.validate();
    } catch (const std::invalid_argument& ex) {
        throw ValidationError(ex.what());
    }
    return c;
}

ChainSpec RunConfig::chain() const {
    if (sites == 0) return chain_for_length(length);
    return chain_for_length(material.lattice_constant * static_cast<double>(sites));
}

ChainSpec RunConfig::chain_for_length(double len) const {
    ChainSpec ch = ChainSpec::from_length(material, len, 0);
    ch.site_mass = chain_site_mass;
    switch (spin_placement) {
        case SpinPlacement::end: ch.spin_site = 0; break;
        case SpinPlacement::center: ch.spin_site = ch.center_site(); break;
        case SpinPlacement::index: ch.spin_site = spin_index; break;
    }
    try {
        ch.validate();
    } catch (const std::invalid_argument& ex) {
        throw ValidationError(ex.what());
    }
    return ch;
}

SphereSpec RunConfig::sphere_for_diameter(double diameter) const {
    SphereSpec s;
    s.diameter = diameter;
    s.material = material;
    s.spin_radius = spin_radius_fraction * 0.5 * diameter;
    s.spin_alignment = spin_alignment;
    return s;
}

double RunConfig::object_mass(double len) const {
    switch (regime) {
        case Regime::exact_1d: return chain_for_length(len).total_mass();
        case Regime::sphere_dominant: return sphere_for_diameter(len).mass();
        case Regime::macroscopic: return material.density * len * len * len;
    }
    return 0.0;
}

double RunConfig::fundamental(double len) const {
    switch (regime) {
        case Regime::exact_1d: return dispersion(chain_for_length(len), 1);
        case Regime::sphere_dominant: return fundamental_frequency(sphere_for_diameter(len));
        case Regime::macroscopic: return fundamental_tone(material.sound_speed, len);
    }
    return 0.0;
}

RunConfig::Derived RunConfig::derive(double len) const {
    Derived d{a_max, t_half, t_ph};
    if (t_half_in_sound_times) d.t_half = *t_half_in_sound_times * len / material.sound_speed;
    if (t_ph_in_quanta)
        d.t_ph = *t_ph_in_quanta * PhysicalConstants::hbar * fundamental(len) / PhysicalConstants::k_B;
    if (gradient) d.a_max = acceleration_from_gradient(magnetic_moment, *gradient, object_mass(len));
    return d;
}

Protocol RunConfig::make_protocol(int order, double a, double th) const {
    if (order >= 0) return Protocol::named(order, a, th);
    return load_profile(profile);
}

}  // namespace phc
