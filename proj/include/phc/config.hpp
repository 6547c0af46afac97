#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phc/chain.hpp"
#include "phc/contrast.hpp"
#include "phc/protocols.hpp"
#include "phc/sphere.hpp"
#include "phc/units.hpp"

namespace phc {

enum class SpinPlacement { end, center, index };
enum class SweepVariable { length, a_max, t_half, t_ph, spin_site };
enum class SweepScale { log, linear };
enum class Constraint { fixed_acceleration, fixed_fractional_splitting };

/// Fully resolved run parameters, SI units.
struct RunConfig {
    MaterialSpec material = MaterialSpec::diamond();
    double chain_site_mass = kChainSiteMass;

    double length = 100e-9;
    std::size_t sites = 0;  // 0: round(length / lattice_constant)
    SpinPlacement spin_placement = SpinPlacement::center;
    std::size_t spin_index = 0;

    int protocol = 1;     // 0/1/2, or -1 for a custom profile
    std::string profile;  // path of the custom profile
    double a_max = 100.0;
    double t_half = 30e-6;
    std::optional<double> gradient;  // T/m; overrides a_max via mu b / M
    double magnetic_moment = PhysicalConstants::mu_B;
    std::optional<double> t_half_in_sound_times;  // T_half = x L / c
    std::optional<double> t_ph_in_quanta;         // k_B T_ph = x hbar omega_1

    double t_ph = 293.0;
    double t_cm = 0.0;
    double b0 = 0.0;  // accepted, never used by any contrast formula
    std::optional<double> com_delta_z, com_delta_p, com_sigma_z;

    Regime regime = Regime::exact_1d;
    ThermalModel thermal_model = ThermalModel::quantum;
    double prefactor = 1.0;
    std::uint64_t seed = 1;

    double spin_radius_fraction = 0.1;
    double spin_alignment = 1.0;
    bool second_harmonic = false;

    SweepVariable sweep_variable = SweepVariable::length;
    double sweep_min = 10e-9;
    double sweep_max = 200e-9;
    std::size_t sweep_count = 20;
    SweepScale sweep_scale = SweepScale::log;
    Constraint constraint = Constraint::fixed_acceleration;
    double split_fraction = 0.1;
    double dv_max = 1e-3;
    double gradient_cap = 1e6;
    double t_half_cap = 100e-6;

    std::size_t oracle_sites = 64;
    double oracle_loop_factor = 0.7;  // T_half = x L / c
    double oracle_dt_fraction = 0.0035;     // of max_stable_dt
    double oracle_dd_dt_fraction = 0.0004;  // differential-vs-engine runs
    double oracle_a_max = 1e15;

    /// Chain from `sites` when set, else from `length`.
    ChainSpec chain() const;
    /// Chain of the given length with the configured site count rule and spin
    /// placement.
    ChainSpec chain_for_length(double length) const;
    SphereSpec sphere_for_diameter(double diameter) const;
    /// Mass of the object in the configured regime.
    double object_mass(double length) const;
    /// Lowest tone of the object in the configured regime.
    double fundamental(double length) const;
    /// a_max, T_half and T_ph after applying gradient / sound-time /
    /// quanta overrides at the given length.
    struct Derived {
        double a_max;
        double t_half;
        double t_ph;
    };
    Derived derive(double length) const;
    /// Protocol of the given order. order < 0 loads the custom profile, which
    /// is used exactly as written (a_max and t_half do not rescale it).
    Protocol make_protocol(int order, double a_max, double t_half) const;
};

/// One configuration value and where it came from.
struct ConfigEntry {
    std::string value;
    std::string source = "default";
    int line = 0;
};

/// Built-in defaults <- file <- command-line overrides. Keys are fixed; an
/// unknown key is a ValidationError anchored at its line.
class ConfigLayers {
  public:
    ConfigLayers();

    /// `key = value` lines; '#' starts a comment; blank lines are skipped.
    void load_stream(std::istream& in, const std::string& source);
    void load_file(const std::string& path);
    void set(const std::string& key, const std::string& value, const std::string& source = "cli");

    const std::map<std::string, ConfigEntry>& entries() const { return entries_; }
    static const std::vector<std::string>& keys();

    /// Parses every entry; errors carry the line of the offending entry.
    RunConfig resolve() const;

    /// "# key = value" lines in key order.
    void echo(std::ostream& out) const;

  private:
    std::map<std::string, ConfigEntry> entries_;
};

/// Material file with the MaterialSpec field names as keys (SI units).
MaterialSpec load_material(const std::string& path);
MaterialSpec read_material(std::istream& in);

std::string to_string(SweepVariable v);
std::string to_string(Constraint c);

}  // namespace phc
