#include "phc/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "phc/errors.hpp"
#include "phc/numeric.hpp"

namespace phc {
namespace {

using std::numbers::pi;

void check_window(double a_max, double t_half) {
    if (!(t_half > 0.0) || !std::isfinite(t_half))
        throw std::invalid_argument("protocol: T_half must be positive");
    if (!(a_max >= 0.0) || !std::isfinite(a_max))
        throw std::invalid_argument("protocol: a_max must be finite and >= 0");
}

// Even moments m_2k = int_{-1}^{1} x^{2k} shape(x) dx feed the small-argument
// series  A(theta) / (a_max T) = sum_k (-1)^k theta^{2k} / (2k)! m_2k.
double square_moment(int k) {
    return 2.0 * (1.0 - std::pow(4.0, -k)) / (2 * k + 1);
}

double quartic_moment(int k) {
    return 2.0 * (-1.0 / (2 * k + 1) + 6.0 / (2 * k + 3) - 5.0 / (2 * k + 5));
}

template <typename Moment>
double even_series(double theta, Moment moment) {
    CompensatedSum<double> sum;
    double power = 1.0;  // theta^{2k} / (2k)!
    for (int k = 1; k < 40; ++k) {
        power *= -theta * theta / ((2.0 * k - 1.0) * (2.0 * k));
        double term = power * moment(k);
        sum.add(term);
        if (k > 2 && std::abs(term) < 1e-18 * std::abs(sum.value())) break;
    }
    return sum.value();
}

// Dimensionless centred transforms A(theta) / (a_max T_half), theta = omega T_half >= 0.

double square_shape(double theta) {
    if (theta < 0.1) return even_series(theta, square_moment);
    return (2.0 * std::sin(theta) - 4.0 * std::sin(0.5 * theta)) / theta;
}

double quartic_shape(double theta) {
    if (theta < 2.0) return even_series(theta, quartic_moment);
    const double t2 = theta * theta;
    return -16.0 * (std::cos(theta) / t2 * (1.0 - 15.0 / t2) -
                    std::sin(theta) / (t2 * theta) * (6.0 - 15.0 / t2));
}

// -3 pi^2 theta sin(theta) / ((theta^2 - pi^2)(theta^2 - 4 pi^2)), with the
// removable poles at pi and 2 pi resolved through sin(theta)/(theta - theta0)
// = cos(theta0) sin(eps)/eps, expanded to four terms inside a 1e-4 window.
double bicosine_shape(double theta) {
    constexpr double window = 1e-4;
    auto near_pole = [&](double pole, double other) {
        const double eps = theta - pole;
        const double e2 = eps * eps;
        const double sinc = 1.0 - e2 / 6.0 + e2 * e2 / 120.0 - e2 * e2 * e2 / 5040.0;
        const double ratio = std::cos(pole) * sinc;  // sin(theta) / (theta - pole)
        return -3.0 * pi * pi * theta * ratio / ((theta + pole) * (theta * theta - other * other));
    };
    if (std::abs(theta - pi) <= window * pi) return near_pole(pi, 2.0 * pi);
    if (std::abs(theta - 2.0 * pi) <= window * 2.0 * pi) return near_pole(2.0 * pi, pi);
    const double t2 = theta * theta;
    return -3.0 * pi * pi * theta * std::sin(theta) / ((t2 - pi * pi) * (t2 - 4.0 * pi * pi));
}

// Primitive V(t) = int_{-T}^{t} a for the named profiles.
double named_primitive(const Protocol& p, double t) {
    const double a = p.a_max();
    const double T = p.t_half();
    const double x = t / T;
    switch (p.kind()) {
        case ProtocolKind::square:
            if (t < -0.5 * T) return a * (t + T);
            if (t < 0.5 * T) return -a * t;
            return a * (t - T);
        case ProtocolKind::quartic:
            return a * T * (-x + 2.0 * x * x * x - std::pow(x, 5));
        case ProtocolKind::bicosine:
            return -0.5 * a * T * (std::sin(pi * x) / pi + std::sin(2.0 * pi * x) / (2.0 * pi));
        case ProtocolKind::custom:
            break;
    }
    throw std::logic_error("named_primitive: custom profile");
}

// Index of the segment [s_i, s_{i+1}] containing t.
std::size_t segment_of(std::span<const ProfileSample> s, double t) {
    auto it = std::upper_bound(s.begin(), s.end(), t,
                               [](double v, const ProfileSample& q) { return v < q.t; });
    std::size_t i = static_cast<std::size_t>(it - s.begin());
    if (i == 0) return 0;
    return std::min(i - 1, s.size() - 2);
}

double interpolate(std::span<const ProfileSample> s, double t) {
    const std::size_t i = segment_of(s, t);
    const auto& l = s[i];
    const auto& r = s[i + 1];
    const double w = (t - l.t) / (r.t - l.t);
    return l.a + w * (r.a - l.a);
}

// Integrate f over [lo, hi], splitting at the profile's breakpoints and, when
// omega * T_half > 50, into panels no longer than one oscillation period.
template <typename F>
auto integrate_window(const Protocol& p, double lo, double hi, double omega, F&& f,
                      double rel_tol) {
    using R = decltype(f(0.0));
    CompensatedSum<R> total;
    if (!(hi > lo)) return total.value();

    std::vector<double> cuts;
    for (double b : p.breakpoints())
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.insert(cuts.begin(), lo);
    cuts.push_back(hi);

    const bool oscillatory = std::abs(omega) * p.t_half() > 50.0;
    const double period = oscillatory ? 2.0 * pi / std::abs(omega) : 0.0;

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        std::size_t panels = 1;
        if (oscillatory) panels = static_cast<std::size_t>(std::ceil((b - a) / period));
        panels = std::max<std::size_t>(panels, 1);
        const double h = (b - a) / static_cast<double>(panels);
        for (std::size_t j = 0; j < panels; ++j) {
            const double pa = a + h * static_cast<double>(j);
            const double pb = (j + 1 == panels) ? b : a + h * static_cast<double>(j + 1);
            total.add(integrate_panel(f, pa, pb, rel_tol));
        }
    }
    return total.value();
}

// int_0^1 x^m exp(i u x) dx for m = 0, 1; series near u = 0 where the closed
// forms cancel.
std::pair<std::complex<double>, std::complex<double>> segment_moments(double u) {
    const std::complex<double> iu(0.0, u);
    if (std::abs(u) < 0.5) {
        std::complex<double> m0 = 0.0, m1 = 0.0, term = 1.0;  // (iu)^k / k!
        for (int k = 0; k < 24; ++k) {
            m0 += term / static_cast<double>(k + 1);
            m1 += term / static_cast<double>(k + 2);
            term *= iu / static_cast<double>(k + 1);
        }
        return {m0, m1};
    }
    const std::complex<double> e = std::polar(1.0, u);
    const std::complex<double> m0 = (e - 1.0) / iu;
    return {m0, (e - m0) / iu};
}

// Exact transform of the piecewise-linear interpolant over [-T, t].
std::complex<double> linear_transform(std::span<const ProfileSample> s, double omega, double t) {
    CompensatedSum<double> re, im;
    auto add = [&](double t0, double a0, double t1, double a1) {
        const double h = t1 - t0;
        if (!(h > 0.0)) return;
        const auto [m0, m1] = segment_moments(omega * h);
        const auto v = h * std::polar(1.0, omega * (t0 - t)) * (a0 * m0 + (a1 - a0) * m1);
        re.add(v.real());
        im.add(v.imag());
    };
    for (std::size_t i = 0; i + 1 < s.size() && s[i].t < t; ++i) {
        if (s[i + 1].t <= t) {
            add(s[i].t, s[i].a, s[i + 1].t, s[i + 1].a);
        } else {
            add(s[i].t, s[i].a, t, interpolate(s, t));
            break;
        }
    }
    return {re.value(), im.value()};
}

}  // namespace

Protocol Protocol::square(double a_max, double t_half) {
    check_window(a_max, t_half);
    Protocol p;
    p.kind_ = ProtocolKind::square;
    p.a_max_ = a_max;
    p.t_half_ = t_half;
    return p;
}

Protocol Protocol::quartic(double a_max, double t_half) {
    Protocol p = square(a_max, t_half);
    p.kind_ = ProtocolKind::quartic;
    return p;
}

Protocol Protocol::bicosine(double a_max, double t_half) {
    Protocol p = square(a_max, t_half);
    p.kind_ = ProtocolKind::bicosine;
    return p;
}

Protocol Protocol::named(int order, double a_max, double t_half) {
    switch (order) {
        case 0: return square(a_max, t_half);
        case 1: return quartic(a_max, t_half);
        case 2: return bicosine(a_max, t_half);
        default: throw std::invalid_argument("protocol order must be 0, 1 or 2");
    }
}

Protocol Protocol::custom(std::vector<ProfileSample> samples, double t_half) {
    if (!(t_half > 0.0)) throw ValidationError("custom profile: T_half must be positive");
    if (samples.size() < 2) throw ValidationError("custom profile: need at least two samples");
    double peak = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i].t) || !std::isfinite(samples[i].a))
            throw ValidationError("custom profile: non-finite sample " + std::to_string(i));
        if (i > 0 && !(samples[i].t > samples[i - 1].t))
            throw ValidationError("custom profile: sample times not strictly increasing at index " +
                                  std::to_string(i));
        peak = std::max(peak, std::abs(samples[i].a));
    }
    const double tol = 1e-9 * t_half;
    if (std::abs(samples.front().t + t_half) > tol || std::abs(samples.back().t - t_half) > tol)
        throw ValidationError("custom profile: samples must span [-T_half, +T_half]");
    samples.front().t = -t_half;
    samples.back().t = t_half;

    Protocol p;
    p.kind_ = ProtocolKind::custom;
    p.a_max_ = peak;
    p.t_half_ = t_half;
    p.samples_ = std::move(samples);
    return p;
}

Protocol Protocol::custom(std::vector<ProfileSample> samples) {
    if (samples.size() < 2) throw ValidationError("custom profile: need at least two samples");
    const double t_half = 0.5 * (samples.back().t - samples.front().t);
    return custom(std::move(samples), t_half);
}

std::optional<int> Protocol::order() const {
    switch (kind_) {
        case ProtocolKind::square: return 0;
        case ProtocolKind::quartic: return 1;
        case ProtocolKind::bicosine: return 2;
        case ProtocolKind::custom: break;
    }
    return std::nullopt;
}

std::string Protocol::name() const {
    switch (kind_) {
        case ProtocolKind::square: return "square";
        case ProtocolKind::quartic: return "quartic";
        case ProtocolKind::bicosine: return "bicosine";
        case ProtocolKind::custom: return "custom";
    }
    return "unknown";
}

std::vector<double> Protocol::breakpoints() const {
    std::vector<double> out;
    if (kind_ == ProtocolKind::custom) {
        out.reserve(samples_.size());
        for (const auto& s : samples_) out.push_back(s.t);
        return out;
    }
    out.push_back(-t_half_);
    if (kind_ == ProtocolKind::square) {
        out.push_back(-0.5 * t_half_);
        out.push_back(0.5 * t_half_);
    }
    out.push_back(t_half_);
    return out;
}

Protocol Protocol::scaled(double factor) const {
    if (kind_ != ProtocolKind::custom && factor < 0.0)
        throw std::invalid_argument("Protocol::scaled: named profiles need factor >= 0");
    Protocol p = *this;
    p.a_max_ = std::abs(factor) * a_max_;
    for (auto& s : p.samples_) s.a *= factor;
    return p;
}

double accel_at(const Protocol& p, double t) {
    const double T = p.t_half();
    if (!(std::abs(t) <= T)) throw std::domain_error("accel_at: t outside [-T_half, T_half]");
    const double a = p.a_max();
    const double x = t / T;
    switch (p.kind()) {
        case ProtocolKind::square:
            return std::abs(t) < 0.5 * T ? -a : a;
        case ProtocolKind::quartic: {
            const double x2 = x * x;
            return a * (-1.0 + 6.0 * x2 - 5.0 * x2 * x2);
        }
        case ProtocolKind::bicosine:
            return -0.5 * a * (std::cos(pi * x) + std::cos(2.0 * pi * x));
        case ProtocolKind::custom:
            return interpolate(p.samples(), t);
    }
    return 0.0;
}

double velocity_change(const Protocol& p, double t0, double t1) {
    const double T = p.t_half();
    t0 = std::clamp(t0, -T, T);
    t1 = std::clamp(t1, -T, T);
    if (p.kind() != ProtocolKind::custom) return named_primitive(p, t1) - named_primitive(p, t0);

    // Trapezoids are exact on a piecewise-linear profile.
    double sign = 1.0;
    if (t1 < t0) {
        std::swap(t0, t1);
        sign = -1.0;
    }
    const auto s = p.samples();
    CompensatedSum<double> sum;
    double left_t = t0;
    double left_a = interpolate(s, t0);
    for (std::size_t i = segment_of(s, t0) + 1; i < s.size() && s[i].t < t1; ++i) {
        sum.add(0.5 * (left_a + s[i].a) * (s[i].t - left_t));
        left_t = s[i].t;
        left_a = s[i].a;
    }
    sum.add(0.5 * (left_a + interpolate(s, t1)) * (t1 - left_t));
    return sign * sum.value();
}

double centered_transform(const Protocol& p, double omega) {
    const double theta = std::abs(omega) * p.t_half();
    const double scale = p.a_max() * p.t_half();
    switch (p.kind()) {
        case ProtocolKind::square: return scale * square_shape(theta);
        case ProtocolKind::quartic: return scale * quartic_shape(theta);
        case ProtocolKind::bicosine: return scale * bicosine_shape(theta);
        case ProtocolKind::custom: break;
    }
    throw std::invalid_argument("spectrum_analytic: custom profiles need spectrum_numeric");
}

double spectrum_analytic(const Protocol& p, double omega) {
    return std::abs(centered_transform(p, omega));
}

std::complex<double> windowed_transform(const Protocol& p, double omega, double t,
                                        double rel_tol) {
    const double T = p.t_half();
    if (!(std::abs(t) <= T)) throw std::domain_error("windowed_transform: t outside window");
    // Quadrature of a piecewise-linear profile is done exactly, segment by
    // segment; adaptive panels would need one per oscillation.
    if (p.kind() == ProtocolKind::custom) return linear_transform(p.samples(), omega, t);
    auto integrand = [&](double s) {
        return accel_at(p, s) * std::polar(1.0, omega * (s - t));
    };
    return integrate_window(p, -T, t, omega, integrand, rel_tol);
}

std::complex<double> spectrum_numeric(const Protocol& p, double omega, double rel_tol) {
    return windowed_transform(p, omega, p.t_half(), rel_tol);
}

Closure closure_check(const Protocol& p) {
    const double T = p.t_half();
    auto accel = [&](double s) { return accel_at(p, s); };
    auto lever = [&](double s) { return (T - s) * accel_at(p, s); };
    return {integrate_window(p, -T, T, 0.0, accel, 1e-14),
            integrate_window(p, -T, T, 0.0, lever, 1e-14)};
}

double energy_norm(const Protocol& p) {
    const double T = p.t_half();
    auto sq = [&](double s) {
        const double a = accel_at(p, s);
        return a * a;
    };
    return integrate_window(p, -T, T, 0.0, sq, 1e-14);
}

double energy_constant(const Protocol& p) {
    if (!(p.a_max() > 0.0)) throw std::domain_error("energy_constant: a_max must be positive");
    return energy_norm(p) / (p.a_max() * p.a_max() * p.t_half());
}

std::vector<ProfileSample> read_profile(std::istream& in) {
    std::vector<ProfileSample> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        ProfileSample s{};
        if (!(fields >> s.t >> s.a)) throw ValidationError("expected two numbers (t a)", lineno);
        std::string extra;
        if (fields >> extra) throw ValidationError("unexpected trailing field '" + extra + "'", lineno);
        if (!out.empty() && !(s.t > out.back().t))
            throw ValidationError("sample times must be strictly increasing", lineno);
        out.push_back(s);
    }
    if (out.size() < 2) throw ValidationError("profile needs at least two samples");
    return out;
}

Protocol load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open profile '" + path + "'");
    return Protocol::custom(read_profile(in));
}

}  // namespace phc
