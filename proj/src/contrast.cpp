#include "phc/contrast.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "phc/numeric.hpp"

namespace phc {
namespace {

using std::numbers::pi;
constexpr double kHbar = PhysicalConstants::hbar;
constexpr double kBoltzmann = PhysicalConstants::k_B;

std::string num(double x) { return fmt::format("{:.17g}", x); }

double thermal(double omega, double T_ph, ThermalModel model) {
    return model == ThermalModel::quantum ? thermal_factor(omega, T_ph)
                                          : classical_thermal_factor(omega, T_ph);
}

void echo_protocol(ContrastReport& r, const Protocol& p) {
    r.params_echo.emplace_back("protocol", p.name());
    r.params_echo.emplace_back("a_max", num(p.a_max()));
    r.params_echo.emplace_back("t_half", num(p.t_half()));
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

std::string to_string(Regime r) {
    switch (r) {
        case Regime::exact_1d: return "exact-1d";
        case Regime::sphere_dominant: return "sphere-dominant";
        case Regime::macroscopic: return "macroscopic";
    }
    return "unknown";
}

std::string to_string(SpectrumPath p) { return p == SpectrumPath::analytic ? "analytic" : "numeric"; }

void ComState::validate() const {
    if (!(sigma_z > 0.0) || !(sigma_p > 0.0))
        throw std::invalid_argument("ComState: sigma_z and sigma_p must be positive");
}

double ContrastReport::contrast() const { return std::exp(-minus_log_C); }

double thermal_factor(double omega, double T_ph) {
    if (!(omega > 0.0)) throw std::domain_error("thermal_factor: omega must be positive");
    if (T_ph < 0.0) throw std::domain_error("thermal_factor: negative temperature");
    if (T_ph == 0.0) return 1.0;
    const double x = kHbar * omega / (2.0 * kBoltzmann * T_ph);
    if (x > 20.0) return 1.0 + 2.0 * std::exp(-2.0 * x);
    return 1.0 / std::tanh(x);
}

double classical_thermal_factor(double omega, double T_ph) {
    if (!(omega > 0.0)) throw std::domain_error("classical_thermal_factor: omega must be positive");
    return 2.0 * kBoltzmann * T_ph / (kHbar * omega);
}

double contrast_com(const ComState& s) {
    s.validate();
    const double kp = s.delta_P * s.sigma_z / kHbar;
    const double kz = s.delta_Z * s.sigma_p / kHbar;
    return std::exp(-0.5 * kp * kp - 0.5 * kz * kz);
}

std::complex<double> loop_spectrum(const Protocol& p, double omega, SpectrumPath* path) {
    if (p.kind() == ProtocolKind::custom) {
        if (path) *path = SpectrumPath::numeric;
        return spectrum_numeric(p, omega);
    }
    if (path) *path = SpectrumPath::analytic;
    const double A = centered_transform(p, omega);
    const double phase = omega * p.t_half();
    return {A * std::cos(phase), -A * std::sin(phase)};
}

PhaseSpaceShift mode_displacement(const ChainSpec& chain, const Protocol& p, std::size_t k) {
    if (k == 0) throw std::invalid_argument("mode_displacement: k = 0 is the centre-of-mass mode");
    const double omega = dispersion(chain, k);
    const double c = mode_amplitude_at_spin(chain, k);
    const auto w = loop_spectrum(p, omega);
    // int a sin[w(t - t')] = -Im W, int a cos[w(t - t')] = Re W.
    return {-2.0 * c * w.imag() / omega, 2.0 * c * w.real()};
}

double contrast_per_mode(const PhaseSpaceShift& shift, double omega, double mass, double T_ph,
                         ThermalModel model) {
    if (!(omega > 0.0)) throw std::domain_error("contrast_per_mode: omega must be positive");
    if (!(mass > 0.0)) throw std::domain_error("contrast_per_mode: mass must be positive");
    const double du = shift.delta_u;
    const double dv = shift.delta_udot / omega;
    return mass * omega / (8.0 * kHbar) * (du * du + dv * dv) * thermal(omega, T_ph, model);
}

ContrastReport contrast_total_1d(const ChainSpec& chain, const Protocol& p, double T_ph,
                                 ThermalModel model) {
    chain.validate();
    const ModeTable modes(chain);
    const double mass = chain.total_mass();
    ContrastReport r;
    r.regime = Regime::exact_1d;
    r.per_mode_terms.reserve(modes.size() - 1);
    CompensatedSum<double> total;
    const auto omegas = modes.omegas();
    const auto amps = modes.spin_amplitudes();
    for (std::size_t k = 1; k < modes.size(); ++k) {
        const double w = omegas[k];
        const double spec = std::abs(loop_spectrum(p, w, &r.spectrum_path));
        const double term =
            mass / (2.0 * kHbar * w) * thermal(w, T_ph, model) * amps[k] * amps[k] * spec * spec;
        r.per_mode_terms.push_back({k, w, term});
        total.add(term);
    }
    r.minus_log_C = total.value();

    const double omega1 = omegas[1];
    if (auto n = p.order()) {
        const double f = estimate_f(p.a_max(), p.t_half(), T_ph, mass, omega1);
        r.estimate_fS = f * estimate_S(*n, chain, p.t_half(), T_ph, model).bound;
        const auto lambda = thermal_coherence_length(mass, T_ph);
        const double dz = p.a_max() * p.t_half() * p.t_half();
        const double x = chain.length() / (chain.sound_speed * p.t_half());
        // f / (omega_1 T)^(2n+2) rewritten through Delta Z_max and lambda_ph.
        r.estimate_delta_z = lambda ? std::pow(dz / *lambda, 2) * std::pow(x, 2 * *n + 4) : nan();
    } else {
        r.estimate_fS = nan();
        r.estimate_delta_z = nan();
    }
    r.params_echo = {{"sites", std::to_string(chain.sites)},
                     {"spin_site", std::to_string(chain.spin_site)},
                     {"length", num(chain.length())},
                     {"mass", num(mass)},
                     {"omega1", num(omega1)},
                     {"t_ph", num(T_ph)},
                     {"thermal_model", model == ThermalModel::quantum ? "quantum" : "classical"}};
    echo_protocol(r, p);
    return r;
}

double estimate_f(double a_max, double t_half, double T_ph, double mass, double omega1) {
    const double aT = a_max * t_half;
    return aT * aT * mass * kBoltzmann * T_ph / (kHbar * kHbar * omega1 * omega1);
}

double envelope_constant(int n) {
    switch (n) {
        case 0: return 36.0;
        case 1: return (16.0 / pi) * (16.0 / pi);
        case 2: return 9.0;
    }
    throw std::invalid_argument("envelope_constant: n must be 0, 1 or 2");
}

double envelope_constant_sharp(int n) {
    switch (n) {
        case 0: return 36.0;
        case 1: return 256.0;
        case 2: return 9.0 * pi * pi * pi * pi;
    }
    throw std::invalid_argument("envelope_constant_sharp: n must be 0, 1 or 2");
}

SpectralSum estimate_S(int n, const ChainSpec& chain, double t_half, double T_ph, ThermalModel model) {
    const Protocol p = Protocol::named(n, 1.0, t_half);
    const ModeTable modes(chain);
    const auto omegas = modes.omegas();
    const auto amps = modes.spin_amplitudes();
    const double w1 = omegas[1];
    const int power = 2 * n + 4;
    CompensatedSum<double> exact;
    CompensatedSum<double> tail;
    for (std::size_t k = 1; k < modes.size(); ++k) {
        const double w = omegas[k];
        const double ratio = w1 / w;
        const double spec = centered_transform(p, w) / t_half;  // |a| / (a_max T)
        // thermal / classical makes f S_exact reproduce the quantum sum.
        const double q = T_ph > 0.0 ? thermal(w, T_ph, model) / classical_thermal_factor(w, T_ph)
                                    : std::numeric_limits<double>::infinity();
        exact.add(ratio * ratio * q * amps[k] * amps[k] * spec * spec);
        tail.add(std::pow(ratio, power));
    }
    const double bound = envelope_constant(n) / std::pow(w1 * t_half, 2 * n + 2) * tail.value();
    return {exact.value(), bound};
}

double zeta_partial(int n, std::size_t terms) {
    CompensatedSum<double> s;
    // Smallest terms first.
    for (std::size_t k = terms; k >= 1; --k) s.add(std::pow(static_cast<double>(k), -(2 * n + 4)));
    return s.value();
}

ContrastReport contrast_3d_small(const SphereSpec& sphere, const Protocol& p, double spin_overlap,
                                 double T_ph, bool include_second_harmonic, double prefactor) {
    sphere.validate();
    if (!(spin_overlap >= 0.0) || spin_overlap > 1.0)
        throw std::invalid_argument("contrast_3d_small: spin overlap must lie in [0, 1]");
    const double mass = sphere.mass();
    const double c = sphere.material.sound_speed;
    ContrastReport r;
    r.regime = Regime::sphere_dominant;
    r.prefactor = prefactor;

    auto add_mode = [&](std::size_t index, double omega, double overlap) {
        const double spec = std::abs(loop_spectrum(p, omega, &r.spectrum_path));
        const double term = prefactor * mass / (2.0 * kHbar * omega) * thermal_factor(omega, T_ph) *
                            overlap * spec * spec;
        r.per_mode_terms.push_back({index, omega, term});
    };
    const double omega1 = fundamental_frequency(sphere);
    add_mode(1, omega1, spin_overlap);
    if (include_second_harmonic) {
        const double omega2 = c * 2.0 * dipole_boundary_root(2) / sphere.diameter;
        add_mode(2, omega2, spin_mode_overlap(sphere, 2));
    }
    CompensatedSum<double> total;
    for (const auto& m : r.per_mode_terms) total.add(m.term);
    r.minus_log_C = total.value();

    if (auto n = p.order()) {
        const double wT = omega1 * p.t_half();
        r.estimate_fS = prefactor * estimate_f(p.a_max(), p.t_half(), T_ph, mass, omega1) /
                        std::pow(wT, 2 * *n + 2);
        const auto lambda = thermal_coherence_length(mass, T_ph);
        const double dz = p.a_max() * p.t_half() * p.t_half();
        const double x = sphere.diameter / (c * p.t_half());
        r.estimate_delta_z =
            lambda ? prefactor * std::pow(dz / *lambda, 2) * std::pow(x, 2 * *n + 4) : nan();
    } else {
        r.estimate_fS = nan();
        r.estimate_delta_z = nan();
    }
    r.params_echo = {{"diameter", num(sphere.diameter)},
                     {"spin_radius", num(sphere.spin_radius)},
                     {"spin_alignment", num(sphere.spin_alignment)},
                     {"spin_overlap", num(spin_overlap)},
                     {"mass", num(mass)},
                     {"omega1", num(omega1)},
                     {"t_ph", num(T_ph)},
                     {"second_harmonic", include_second_harmonic ? "true" : "false"}};
    echo_protocol(r, p);
    return r;
}

ContrastReport contrast_macroscopic(const MaterialSpec& material, const Protocol& p, double length,
                                    double T_ph, double prefactor) {
    material.validate();
    if (!(length > 0.0)) throw std::invalid_argument("contrast_macroscopic: length must be positive");
    const double mass = material.density * length * length * length;
    auto r = contrast_macroscopic(mass, length, material.sound_speed, p, T_ph, prefactor);
    r.params_echo.emplace_back("material", material.name);
    return r;
}

ContrastReport contrast_macroscopic(double mass, double length, double sound_speed,
                                    const Protocol& p, double T_ph, double prefactor) {
    if (!(mass > 0.0) || !(length > 0.0) || !(sound_speed > 0.0))
        throw std::invalid_argument("contrast_macroscopic: mass, length and sound speed must be positive");
    ContrastReport r;
    r.regime = Regime::macroscopic;
    r.prefactor = prefactor;
    const double L3 = length * length * length;
    const double c3 = sound_speed * sound_speed * sound_speed;
    const double energy = energy_norm(p);
    r.minus_log_C =
        prefactor * 3.0 * mass * L3 * kBoltzmann * T_ph / (pi * kHbar * kHbar * c3) * energy;
    r.estimate_fS = r.minus_log_C;
    r.spectrum_path = p.kind() == ProtocolKind::custom ? SpectrumPath::numeric : SpectrumPath::analytic;

    const auto lambda = thermal_coherence_length(mass, T_ph);
    const double dz = p.a_max() * p.t_half() * p.t_half();
    r.estimate_delta_z = lambda ? prefactor * std::pow(dz / *lambda, 2) *
                                      std::pow(length / (sound_speed * p.t_half()), 3)
                                : nan();

    const double omega1 = fundamental_tone(sound_speed, length);
    if (omega1 * p.t_half() > 2.0 * pi)
        r.notes.push_back(fmt::format(
            "omega1 T_half = {:.6g} > 2 pi: spectrum not dense, continuum estimate unreliable",
            omega1 * p.t_half()));
    if (r.minus_log_C > 1.0 && lambda)
        r.notes.push_back(fmt::format(
            "contrast lost: coherent splitting is bounded by lambda_ph = {:.6g} m", *lambda));
    r.params_echo = {{"length", num(length)},
                     {"mass", num(mass)},
                     {"sound_speed", num(sound_speed)},
                     {"omega1", num(omega1)},
                     {"t_ph", num(T_ph)},
                     {"energy_norm", num(energy)},
                     {"window_normalization", "int_{-T_half}^{+T_half} a^2 dt"}};
    echo_protocol(r, p);
    return r;
}

double gradient_time_bound(const MaterialSpec& material, double mu, double T_ph, double prefactor) {
    if (!(mu > 0.0) || !(T_ph > 0.0))
        throw std::invalid_argument("gradient_time_bound: mu and T_ph must be positive");
    material.validate();
    const double rho = material.density / 1000.0;  // g/cm^3
    const double c = material.sound_speed / 1000.0;
    const double m = mu / PhysicalConstants::mu_B;
    return prefactor * 1e15 * rho * c * c * c / (m * m * (T_ph / 300.0));
}

}  // namespace phc
