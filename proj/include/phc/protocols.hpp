#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace phc {

enum class ProtocolKind { square, quartic, bicosine, custom };

struct ProfileSample {
    double t;  // s
    double a;  // m/s^2
};

/// Spin-dependent acceleration profile on the window t in [-T_half, +T_half].
/// The moment of maximum arm splitting sits at t = 0.
///
///   square   : -a_max for |t| < T_half/2, +a_max for T_half/2 <= |t| <= T_half
///   quartic  : a_max [-1 + 6 x^2 - 5 x^4],          x = t / T_half
///   bicosine : -(a_max/2) [cos(pi x) + cos(2 pi x)]
///   custom   : piecewise-linear interpolation of samples
///
/// Immutable after construction.
class Protocol {
  public:
    static Protocol square(double a_max, double t_half);
    static Protocol quartic(double a_max, double t_half);
    static Protocol bicosine(double a_max, double t_half);
    /// order 0, 1, 2 -> square, quartic, bicosine.
    static Protocol named(int order, double a_max, double t_half);
    /// Samples must be strictly increasing in t and span exactly
    /// [-t_half, +t_half]. Throws ValidationError otherwise.
    static Protocol custom(std::vector<ProfileSample> samples, double t_half);
    /// As above with t_half inferred from a centred sample span.
    static Protocol custom(std::vector<ProfileSample> samples);

    ProtocolKind kind() const { return kind_; }
    /// Peak |a|; for custom profiles the largest sample magnitude.
    double a_max() const { return a_max_; }
    double t_half() const { return t_half_; }
    /// 0/1/2 for the named profiles.
    std::optional<int> order() const;
    std::span<const ProfileSample> samples() const { return samples_; }
    std::string name() const;

    /// Window edges plus every point where a(t) or its slope jumps.
    std::vector<double> breakpoints() const;

    /// Same shape with the acceleration multiplied by factor.
    Protocol scaled(double factor) const;

  private:
    Protocol() = default;

    ProtocolKind kind_ = ProtocolKind::square;
    double a_max_ = 0.0;
    double t_half_ = 0.0;
    std::vector<ProfileSample> samples_;
};

/// Throws std::domain_error outside the window.
double accel_at(const Protocol& p, double t);

/// Exact integral of a(t) over [t0, t1] (closed-form primitives).
double velocity_change(const Protocol& p, double t0, double t1);

/// Real transform A(omega) = int a(t) cos(omega t) dt over the window. The
/// named profiles are even, so the loop-end windowed transform is
/// exp(-i omega T_half) A(omega). Custom profiles throw std::invalid_argument.
double centered_transform(const Protocol& p, double omega);

/// |a(omega, 2 T_half)| from the closed forms.
double spectrum_analytic(const Protocol& p, double omega);

/// int_{-T_half}^{t} a(t') exp(i omega (t' - t)) dt' by adaptive quadrature.
std::complex<double> windowed_transform(const Protocol& p, double omega, double t,
                                        double rel_tol = 1e-10);

/// windowed_transform evaluated at the end of the loop.
std::complex<double> spectrum_numeric(const Protocol& p, double omega, double rel_tol = 1e-10);

struct Closure {
    double delta_v;  // m/s, int a dt
    double delta_z;  // m, displacement at loop end for zero initial velocity
};

/// Both entries by quadrature; nonzero values are reported, not rejected.
Closure closure_check(const Protocol& p);

/// int a(t)^2 dt over the full window (m^2/s^3).
double energy_norm(const Protocol& p);

/// energy_norm / (a_max^2 T_half): 2, 256/315, 1/2 for square, quartic, bicosine.
double energy_constant(const Protocol& p);

/// Two-column text (t [s], a [m/s^2]); '#' starts a comment line.
std::vector<ProfileSample> read_profile(std::istream& in);
Protocol load_profile(const std::string& path);

}  // namespace phc
