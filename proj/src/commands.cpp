#include "phc/commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "phc/config.hpp"
#include "phc/contrast.hpp"
#include "phc/errors.hpp"
#include "phc/md_oracle.hpp"
#include "phc/report.hpp"
#include "phc/sweep.hpp"

namespace phc {
namespace {

struct CommonOptions {
    std::string config;
    std::string out;
    std::optional<std::string> protocol;
    std::optional<std::string> regime;
    std::optional<std::uint64_t> seed;
    std::optional<double> prefactor;
    std::vector<std::string> sets;
    std::optional<double> length_nm;
    std::optional<double> t_half_us;
    std::optional<double> a_max;
    std::optional<double> gradient;
    std::optional<double> t_ph;
    std::optional<std::size_t> sites;
    std::optional<std::string> spin_site;
};

void add_common(CLI::App* app, CommonOptions& o) {
    app->add_option("--config", o.config, "Config file (key = value)");
    app->add_option("--out", o.out, "Output path (default: stdout)");
    app->add_option("--protocol", o.protocol, "0 (square), 1 (quartic), 2 (bicosine) or custom");
    app->add_option("--regime", o.regime, "1d, 3d or macro");
    app->add_option("--seed", o.seed, "Random seed for oracle initial states");
    app->add_option("--prefactor", o.prefactor, "Order-unity prefactor of the closed-form estimates");
    app->add_option("--set", o.sets, "Override any config key: --set key=value")->take_all();
    app->add_option("--length-nm", o.length_nm, "Object size L (chain length / sphere diameter) in nm");
    app->add_option("--t-half-us", o.t_half_us, "Half loop duration in microseconds");
    app->add_option("--a-max", o.a_max, "Peak acceleration in m/s^2");
    app->add_option("--gradient", o.gradient, "Peak magnetic gradient in T/m (sets a_max = mu b / M)");
    app->add_option("--t-ph", o.t_ph, "Phonon temperature in K");
    app->add_option("--sites", o.sites, "Chain site count (overrides length)");
    app->add_option("--spin-site", o.spin_site, "end, center or a site index");
}

ConfigLayers build_layers(const CommonOptions& o) {
    ConfigLayers layers;
    if (!o.config.empty()) layers.load_file(o.config);
    if (o.protocol) layers.set("protocol", *o.protocol);
    if (o.regime) layers.set("regime", *o.regime);
    if (o.seed) layers.set("seed", std::to_string(*o.seed));
    if (o.prefactor) layers.set("prefactor", format_double(*o.prefactor));
    if (o.length_nm) layers.set("length", format_double(*o.length_nm * 1e-9));
    if (o.t_half_us) layers.set("t_half", format_double(*o.t_half_us * 1e-6));
    if (o.a_max) layers.set("a_max", format_double(*o.a_max));
    if (o.gradient) layers.set("gradient", format_double(*o.gradient));
    if (o.t_ph) layers.set("t_ph", format_double(*o.t_ph));
    if (o.sites) layers.set("sites", std::to_string(*o.sites));
    if (o.spin_site) layers.set("spin_site", *o.spin_site);
    for (const auto& s : o.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + s + "'");
        auto trim = [](std::string v) {
            const auto b = v.find_first_not_of(' ');
            const auto e = v.find_last_not_of(' ');
            return b == std::string::npos ? std::string{} : v.substr(b, e - b + 1);
        };
        layers.set(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    return layers;
}

// Object size used by the configured regime.
double object_length(const RunConfig& cfg) {
    return cfg.regime == Regime::exact_1d ? cfg.chain().length() : cfg.length;
}

ContrastReport evaluate(const RunConfig& cfg) {
    const double L = object_length(cfg);
    const auto d = cfg.derive(L);
    const Protocol p = cfg.make_protocol(cfg.protocol, d.a_max, d.t_half);
    switch (cfg.regime) {
        case Regime::exact_1d: return contrast_total_1d(cfg.chain(), p, d.t_ph, cfg.thermal_model);
        case Regime::sphere_dominant: {
            const auto sphere = cfg.sphere_for_diameter(L);
            return contrast_3d_small(sphere, p, spin_mode_overlap(sphere), d.t_ph, cfg.second_harmonic,
                                     cfg.prefactor);
        }
        case Regime::macroscopic: return contrast_macroscopic(cfg.material, p, L, d.t_ph, cfg.prefactor);
    }
    throw std::logic_error("unknown regime");
}

void cmd_contrast(const ConfigLayers& layers, const RunConfig& cfg, std::ostream& out) {
    write_metadata(out, layers, "contrast");
    const auto report = evaluate(cfg);
    double total = report.contrast();
    if (cfg.com_sigma_z) {
        if (!(cfg.t_cm > 0.0)) throw ValidationError("com_sigma_z needs t_cm > 0 to set sigma_p");
        const double M = cfg.object_mass(object_length(cfg));
        ComState com{*cfg.com_sigma_z, std::sqrt(M * PhysicalConstants::k_B * cfg.t_cm),
                     cfg.com_delta_z.value_or(0.0), cfg.com_delta_p.value_or(0.0)};
        const double c_cm = contrast_com(com);
        out << "# contrast_com = " << format_double(c_cm) << "\n";
        total *= c_cm;
    }
    out << "# contrast_total = " << format_double(total) << "\n";
    write_report(out, report);
}

void cmd_modes(const ConfigLayers& layers, const RunConfig& cfg, std::ostream& out) {
    if (cfg.regime != Regime::exact_1d) throw ValidationError("modes needs regime = 1d");
    write_metadata(out, layers, "modes");
    const auto chain = cfg.chain();
    const auto d = cfg.derive(chain.length());
    const Protocol p = cfg.make_protocol(cfg.protocol, d.a_max, d.t_half);
    const auto report = contrast_total_1d(chain, p, d.t_ph, cfg.thermal_model);
    const ModeTable modes(chain);
    const double w1 = modes.omegas()[1];
    out << "# minus_log_C = " << format_double(report.minus_log_C) << "\n";
    out << "# omega1 = " << format_double(w1) << "\n";
    out << "# t_ph = " << format_double(d.t_ph) << "\n";
    out << "k,omega_ratio,envelope,term,quantum\n";
    for (const auto& m : report.per_mode_terms) {
        const double spec = std::abs(loop_spectrum(p, m.omega));
        const double thermal = cfg.thermal_model == ThermalModel::quantum ? thermal_factor(m.omega, d.t_ph)
                                                                          : classical_thermal_factor(m.omega, d.t_ph);
        // Same term with the spin-site factor cos^2 set to 1.
        const double envelope = chain.total_mass() / (2.0 * PhysicalConstants::hbar * m.omega) * thermal * spec * spec;
        const bool quantum = PhysicalConstants::hbar * m.omega >= PhysicalConstants::k_B * d.t_ph;
        out << m.k << ',' << format_double(m.omega / w1) << ',' << format_double(envelope) << ','
            << format_double(m.term) << ',' << (quantum ? 1 : 0) << "\n";
    }
}

int cmd_validate(const ConfigLayers& layers, const RunConfig& cfg, std::ostream& out) {
    ChainSpec chain = cfg.chain_for_length(cfg.material.lattice_constant * static_cast<double>(cfg.oracle_sites));
    const double L = chain.length();
    const double t_half = cfg.oracle_loop_factor * L / chain.sound_speed;
    const Protocol p = cfg.make_protocol(cfg.protocol, cfg.oracle_a_max, t_half);
    const double dt = cfg.oracle_dt_fraction * max_stable_dt(chain);
    const double dd_dt = cfg.oracle_dd_dt_fraction * max_stable_dt(chain);
    for (double h : {dt, dd_dt})
        if (h > max_stable_dt(chain))
            throw std::invalid_argument(fmt::format(
                "oracle dt = {:.6g} s exceeds the stability bound 2 pi / (100 omega_max) = {:.6g} s", h,
                max_stable_dt(chain)));
    const auto suite = run_oracle_suite(chain, p, cfg.t_ph, cfg.seed, dt, dd_dt);
    write_metadata(out, layers, "validate");
    out << "# sites = " << chain.sites << "\n";
    out << "# spin_site = " << chain.spin_site << "\n";
    out << "# protocol = " << p.name() << "\n";
    out << "# dt = " << format_double(dt) << "\n";
    out << "# dd_dt = " << format_double(dd_dt) << "\n";
    out << "check,value,tolerance,result\n";
    for (const auto& c : suite.checks)
        out << c.name << ',' << format_double(c.value) << ',' << format_double(c.tolerance) << ','
            << (c.pass ? "PASS" : "FAIL") << "\n";
    out << "# overall = " << (suite.all_pass() ? "PASS" : "FAIL") << "\n";
    return suite.all_pass() ? kExitOk : kExitValidationFailed;
}

void cmd_bound(const ConfigLayers& layers, const RunConfig& cfg, std::ostream& out) {
    write_metadata(out, layers, "bound");
    const double b = gradient_time_bound(cfg.material, cfg.magnetic_moment, cfg.t_ph, cfg.prefactor);
    out << "# (T_half / us) (b_max / (T/m))^2 <= bound\n";
    out << "bound = " << format_double(b) << "\n";
    // Largest gradient allowed for the configured half loop.
    out << "max_gradient_at_t_half = " << format_double(std::sqrt(b / (cfg.t_half * 1e6))) << "\n";
}

void cmd_sweep(const ConfigLayers& layers, const RunConfig& cfg, std::ostream& out) {
    const auto result = run_sweep(cfg);
    write_metadata(out, layers, "sweep");
    write_sweep_csv(out, cfg, result);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Phonon decoherence of Stern-Gerlach nano-object interferometers", "phcontrast"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);

    CommonOptions opts;
    auto* contrast = app.add_subcommand("contrast", "Single-point contrast evaluation");
    auto* sweep = app.add_subcommand("sweep", "Parameter sweep to CSV");
    auto* modes = app.add_subcommand("modes", "Per-mode terms of the 1D chain as CSV");
    auto* validate = app.add_subcommand("validate", "Run the molecular-dynamics oracle checks");
    auto* bound = app.add_subcommand("bound", "Gradient-duration bound calculator");
    for (auto* sub : {contrast, sweep, modes, validate, bound}) add_common(sub, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalidConfig;
    }

    std::ostringstream buffer;
    int status = kExitOk;
    try {
        const ConfigLayers layers = build_layers(opts);
        const RunConfig cfg = layers.resolve();
        if (contrast->parsed())
            cmd_contrast(layers, cfg, buffer);
        else if (sweep->parsed())
            cmd_sweep(layers, cfg, buffer);
        else if (modes->parsed())
            cmd_modes(layers, cfg, buffer);
        else if (validate->parsed())
            status = cmd_validate(layers, cfg, buffer);
        else if (bound->parsed())
            cmd_bound(layers, cfg, buffer);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitValidationFailed;
    }

    if (opts.out.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(opts.out, std::ios::binary);
        if (!file || !(file << buffer.str()) || !file.flush()) {
            err << "error: cannot write '" << opts.out << "'\n";
            return kExitUnwritable;
        }
    }
    return status;
}

}  // namespace phc
