#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "phc/chain.hpp"
#include "phc/protocols.hpp"
#include "phc/sphere.hpp"
#include "phc/units.hpp"

namespace phc {

/// Differential (spin-up minus spin-down) displacement of one phonon mode.
struct PhaseSpaceShift {
    double delta_u = 0.0;     // m
    double delta_udot = 0.0;  // m/s
};

struct ComState {
    double sigma_z = 0.0;  // m
    double sigma_p = 0.0;  // kg m/s
    double delta_Z = 0.0;  // m
    double delta_P = 0.0;  // kg m/s

    void validate() const;
};

enum class Regime { exact_1d, sphere_dominant, macroscopic };
enum class SpectrumPath { analytic, numeric };
enum class ThermalModel { quantum, classical };

std::string to_string(Regime r);
std::string to_string(SpectrumPath p);

struct ModeTerm {
    std::size_t k = 0;
    double omega = 0.0;  // rad/s
    double term = 0.0;   // contribution to -log C
};

struct ContrastReport {
    Regime regime = Regime::exact_1d;
    SpectrumPath spectrum_path = SpectrumPath::analytic;
    double minus_log_C = 0.0;
    std::vector<ModeTerm> per_mode_terms;
    /// Closed-form estimate: f S for the chain, f / (omega_1 T)^(2n+2) for the
    /// sphere, the Parseval value for the macroscopic object. NaN when the
    /// protocol has no closed form.
    double estimate_fS = 0.0;
    /// Same quantity in the (Delta Z_max / lambda_ph)^2 (L / c T)^p form.
    double estimate_delta_z = 0.0;
    double prefactor = 1.0;
    std::vector<std::pair<std::string, std::string>> params_echo;
    std::vector<std::string> notes;

    double contrast() const;
};

/// coth(hbar omega / 2 k_B T); 1 at T = 0. Throws std::domain_error for
/// omega <= 0.
double thermal_factor(double omega, double T_ph);

/// 2 k_B T / (hbar omega), the high-temperature limit of thermal_factor.
double classical_thermal_factor(double omega, double T_ph);

/// exp[-(1/2) dP^2 sz^2 / hbar^2 - (1/2) dZ^2 sp^2 / hbar^2].
double contrast_com(const ComState& state);

/// a(omega, 2 T_half) in the windowed-transform convention, from the closed
/// form when the protocol has one and from quadrature otherwise.
std::complex<double> loop_spectrum(const Protocol& p, double omega, SpectrumPath* path = nullptr);

/// Delta u_k = (2 c_k / omega) int a sin[omega (t - t')],
/// Delta udot_k = 2 c_k int a cos[omega (t - t')], at the loop end, with c_k
/// the spin-site amplitude. k = 0 throws std::invalid_argument.
PhaseSpaceShift mode_displacement(const ChainSpec& chain, const Protocol& p, std::size_t k);

/// (M omega / 8 hbar)(du^2 + dudot^2 / omega^2) coth(hbar omega / 2 k_B T).
double contrast_per_mode(const PhaseSpaceShift& shift, double omega, double mass, double T_ph,
                         ThermalModel model = ThermalModel::quantum);

/// Exact mode sum over k = 1 .. N-1 of
/// (M / 2 hbar omega_k) coth(...) cos^2[(s + 1/2) q a] |a(omega_k)|^2.
ContrastReport contrast_total_1d(const ChainSpec& chain, const Protocol& p, double T_ph,
                                 ThermalModel model = ThermalModel::quantum);

/// f = (a_max T_half)^2 M k_B T_ph / (hbar^2 omega_1^2).
double estimate_f(double a_max, double t_half, double T_ph, double mass, double omega1);

/// Envelope constant A_n in |a_n(omega)|^2 <= A_n (a_max T)^2 / (omega T)^(2n+2)
/// as published: 36, (16/pi)^2, 9.
double envelope_constant(int n);
/// Large-omega T envelope of the closed-form spectra: 36, 256, 9 pi^4.
/// 36 bounds the square profile everywhere (its supremum is 27); the other
/// two are limits approached from above, exceeded by O(1 / omega T).
double envelope_constant_sharp(int n);

struct SpectralSum {
    double exact = 0.0;  // f S_exact reproduces contrast_total_1d
    double bound = 0.0;  // A_n / (omega_1 T)^(2n+2) sum (omega_1 / omega_k)^(2n+4)
};

/// Both forms of S for protocol n on the given chain.
SpectralSum estimate_S(int n, const ChainSpec& chain, double t_half, double T_ph,
                       ThermalModel model = ThermalModel::quantum);

/// sum_{k=1}^{terms} k^-(2n+4).
double zeta_partial(int n, std::size_t terms);

/// Dominant dipole-mode exponent
/// prefactor (M / 2 hbar omega_1) coth(...) overlap |a(omega_1)|^2,
/// optionally plus the second dipole harmonic.
ContrastReport contrast_3d_small(const SphereSpec& sphere, const Protocol& p, double spin_overlap,
                                 double T_ph, bool include_second_harmonic = false,
                                 double prefactor = 1.0);

/// Continuum limit prefactor (3 M L^3 k_B T / pi hbar^2 c^3) int a^2 dt with
/// M = rho L^3. Adds a note when omega_1 T_half > 2 pi.
ContrastReport contrast_macroscopic(const MaterialSpec& material, const Protocol& p, double length,
                                    double T_ph, double prefactor = 1.0);

/// As above with the total mass given explicitly.
ContrastReport contrast_macroscopic(double mass, double length, double sound_speed,
                                    const Protocol& p, double T_ph, double prefactor = 1.0);

/// Upper limit on (T_half / us)(b_max / (T/m))^2:
/// prefactor 1e15 (rho / g cm^-3)(c / 1e3 m/s)^3 / ((mu / mu_B)^2 (T_ph / 300 K)).
double gradient_time_bound(const MaterialSpec& material, double mu, double T_ph,
                           double prefactor = 1.0);

}  // namespace phc
