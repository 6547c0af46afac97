#include "phc/md_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include "phc/numeric.hpp"

namespace phc {
namespace {

using std::numbers::pi;

void spring_accel(const ChainSpec& chain, double k_over_m, const std::vector<double>& z,
                  std::vector<double>& acc) {
    const std::size_t n = chain.sites;
    for (std::size_t i = 0; i < n; ++i) {
        double f = 0.0;
        if (i > 0) f += z[i - 1] - z[i];
        if (i + 1 < n) f += z[i + 1] - z[i];
        acc[i] = k_over_m * f;
    }
}

// int_{-T}^{t} (t - t') a(t') dt' = int_{-T}^{t} dv(s) ds. dv is polynomial
// or a few sinusoids on each panel, so a fixed 20-point rule is exact to
// rounding.
double driven_com_shift(const Protocol& p, double t) {
    const double T = p.t_half();
    CompensatedSum<double> sum;
    double lo = -T;
    auto dv = [&](double s) { return velocity_change(p, -T, s); };
    for (double b : p.breakpoints()) {
        if (b <= lo) continue;
        const double hi = std::min(b, t);
        if (hi > lo) sum.add(boost::math::quadrature::gauss<double, 20>::integrate(dv, lo, hi));
        lo = hi;
        if (lo >= t) break;
    }
    return sum.value();
}

double phase_norm(double u, double udot, double omega) {
    return std::hypot(u, udot / omega);
}

}  // namespace

double max_stable_dt(const ChainSpec& chain) { return 2.0 * pi / (100.0 * chain.band_edge()); }

ChainState rest_state(const ChainSpec& chain, double t) {
    return {std::vector<double>(chain.sites, 0.0), std::vector<double>(chain.sites, 0.0), t};
}

ChainState thermal_state(const ChainSpec& chain, double T, std::uint64_t seed, double t) {
    chain.validate();
    if (T < 0.0) throw std::invalid_argument("thermal_state: negative temperature");
    const ModeTable modes(chain);
    const double mass = chain.total_mass();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> u(chain.sites, 0.0), udot(chain.sites, 0.0);
    const double sv = std::sqrt(2.0 * PhysicalConstants::k_B * T / mass);
    for (std::size_t k = 1; k < chain.sites; ++k) {
        u[k] = gauss(rng) * sv / modes.omegas()[k];
        udot[k] = gauss(rng) * sv;
    }
    return {reconstruct_displacements(chain, u), reconstruct_displacements(chain, udot), t};
}

Trajectory integrate(const ChainSpec& chain, const Protocol& p, int spin_sign, double dt,
                     const ChainState& initial, std::uint64_t seed, std::size_t stride) {
    chain.validate();
    if (spin_sign != 1 && spin_sign != -1)
        throw std::invalid_argument("integrate: spin_sign must be +1 or -1");
    const double bound = max_stable_dt(chain);
    if (!(dt > 0.0) || dt > bound)
        throw std::invalid_argument(
            fmt::format("integrate: dt = {:.6g} s exceeds the stability bound 2 pi / (100 omega_max) = "
                        "{:.6g} s",
                        dt, bound));
    const std::size_t n = chain.sites;
    if (initial.z.size() != n || initial.v.size() != n)
        throw std::invalid_argument("integrate: initial state has the wrong length");

    const double T = p.t_half();
    const auto steps = static_cast<std::size_t>(std::ceil(2.0 * T / dt - 1e-9));
    const double h = 2.0 * T / static_cast<double>(steps);
    const double k_over_m = chain.spring_constant() / chain.site_mass;
    // (M/2) a / m on the spin site.
    const double kick_scale = spin_sign * 0.5 * chain.total_mass() / chain.site_mass;
    const std::size_t s = chain.spin_site;

    Trajectory traj;
    traj.spin_sign = spin_sign;
    traj.seed = seed;
    traj.dt = h;
    traj.protocol = p.name();

    std::vector<double> z = initial.z, v = initial.v, acc(n);
    spring_accel(chain, k_over_m, z, acc);
    traj.samples.push_back({z, v, -T});

    CompensatedSum<double> work;
    // Kahan carries: millions of small increments would otherwise bury the
    // weakly driven modes in rounding noise.
    std::vector<double> cz(n, 0.0), cv(n, 0.0);
    auto bump = [](double& x, double& carry, double dx) {
        const double y = dx - carry;
        const double t = x + y;
        carry = (t - x) - y;
        x = t;
    };
    auto kick = [&](double t0, double t1) {
        const double dv = kick_scale * velocity_change(p, t0, t1);
        const double before = v[s];
        bump(v[s], cv[s], dv);
        work.add(chain.site_mass * dv * 0.5 * (before + v[s]));
    };

    for (std::size_t i = 0; i < steps; ++i) {
        const double t0 = -T + static_cast<double>(i) * h;
        const double t1 = i + 1 == steps ? T : -T + static_cast<double>(i + 1) * h;
        const double tm = 0.5 * (t0 + t1);
        for (std::size_t j = 0; j < n; ++j) bump(v[j], cv[j], 0.5 * h * acc[j]);
        kick(t0, tm);
        for (std::size_t j = 0; j < n; ++j) bump(z[j], cz[j], h * v[j]);
        spring_accel(chain, k_over_m, z, acc);
        kick(tm, t1);
        for (std::size_t j = 0; j < n; ++j) bump(v[j], cv[j], 0.5 * h * acc[j]);
        if (i + 1 == steps || (stride > 0 && (i + 1) % stride == 0)) traj.samples.push_back({z, v, t1});
    }
    traj.work = work.value();
    return traj;
}

double mechanical_energy(const ChainSpec& chain, const ChainState& st) {
    CompensatedSum<double> e;
    const double K = chain.spring_constant();
    for (std::size_t i = 0; i < chain.sites; ++i) {
        e.add(0.5 * chain.site_mass * st.v[i] * st.v[i]);
        if (i + 1 < chain.sites) {
            const double d = st.z[i + 1] - st.z[i];
            e.add(0.5 * K * d * d);
        }
    }
    return e.value();
}

ModeCheck check_modes(const ChainSpec& chain, const Protocol& p, const Trajectory& traj) {
    const ModeTable modes(chain);
    const std::size_t n = chain.sites;
    const auto& first = traj.samples.front();
    const auto u0 = project_modes(chain, first.z);
    const auto v0 = project_modes(chain, first.v);
    const double T = p.t_half();

    ModeCheck out;
    out.rel_error.assign(n - 1, 0.0);
    std::vector<double> max_err(n, 0.0), max_amp(n, 0.0);
    for (const auto& st : traj.samples) {
        const auto u = project_modes(chain, st.z);
        const auto ud = project_modes(chain, st.v);
        const double tau = st.t + T;
        for (std::size_t k = 1; k < n; ++k) {
            const double w = modes.omegas()[k];
            const double c = modes.spin_amplitudes()[k];
            const auto W = st.t > -T ? windowed_transform(p, w, st.t) : std::complex<double>{};
            const double cs = std::cos(w * tau), sn = std::sin(w * tau);
            const double ua = u0[k] * cs + v0[k] / w * sn - traj.spin_sign * c / w * W.imag();
            const double va = -u0[k] * w * sn + v0[k] * cs + traj.spin_sign * c * W.real();
            max_err[k] = std::max(max_err[k], phase_norm(u[k] - ua, ud[k] - va, w));
            max_amp[k] = std::max(max_amp[k], phase_norm(ua, va, w));
        }
    }
    for (std::size_t k = 1; k < n; ++k) {
        const double e = max_amp[k] > 0.0 ? max_err[k] / max_amp[k] : max_err[k];
        out.rel_error[k - 1] = e;
        out.worst = std::max(out.worst, e);
    }
    return out;
}

ComCheck com_limit_check(const ChainSpec& chain, const Protocol& p, const Trajectory& traj) {
    const double M = chain.total_mass();
    const double T = p.t_half();
    const double m = chain.site_mass;
    const auto& first = traj.samples.front();
    double Z0 = 0.0, P0 = 0.0;
    {
        CompensatedSum<double> z, pm;
        for (std::size_t i = 0; i < chain.sites; ++i) {
            z.add(first.z[i]);
            pm.add(m * first.v[i]);
        }
        Z0 = z.value() / static_cast<double>(chain.sites);
        P0 = pm.value();
    }
    const double V0 = P0 / M;
    double err_p = 0.0, err_z = 0.0, scale_p = 0.0, scale_z = 0.0;
    ComCheck out;
    for (const auto& st : traj.samples) {
        CompensatedSum<double> z, pm;
        for (std::size_t i = 0; i < chain.sites; ++i) {
            z.add(st.z[i]);
            pm.add(m * st.v[i]);
        }
        const double Z = z.value() / static_cast<double>(chain.sites);
        const double P = pm.value();
        const double dv = 0.5 * traj.spin_sign * velocity_change(p, -T, st.t);
        const double dz = st.t > -T ? 0.5 * traj.spin_sign * driven_com_shift(p, st.t) : 0.0;
        const double Pa = P0 + M * dv;
        const double Za = Z0 + V0 * (st.t + T) + dz;
        err_p = std::max(err_p, std::abs(P - Pa));
        err_z = std::max(err_z, std::abs(Z - Za));
        scale_p = std::max(scale_p, std::abs(Pa));
        scale_z = std::max(scale_z, std::abs(Za));
        out.final_delta_v = P / M - V0;
        out.final_delta_z = Z - Z0 - V0 * (st.t + T);
    }
    out.momentum_rel_error = scale_p > 0.0 ? err_p / scale_p : err_p;
    out.position_rel_error = scale_z > 0.0 ? err_z / scale_z : err_z;
    return out;
}

std::vector<PhaseSpaceShift> differential_displacement(const ChainSpec& chain, const Protocol& p,
                                                       double dt, const ChainState& initial) {
    const auto up = integrate(chain, p, +1, dt, initial);
    const auto down = integrate(chain, p, -1, dt, initial);
    const auto& a = up.samples.back();
    const auto& b = down.samples.back();
    const auto ua = project_modes(chain, a.z), ub = project_modes(chain, b.z);
    const auto va = project_modes(chain, a.v), vb = project_modes(chain, b.v);
    std::vector<PhaseSpaceShift> out(chain.sites);
    for (std::size_t k = 0; k < chain.sites; ++k) out[k] = {ua[k] - ub[k], va[k] - vb[k]};
    return out;
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
    out << "# trajectory\n";
    out << "# protocol = " << traj.protocol << "\n";
    out << "# spin_sign = " << traj.spin_sign << "\n";
    out << "# seed = " << traj.seed << "\n";
    out << fmt::format("# dt = {:.17g}\n", traj.dt);
    out << fmt::format("# work = {:.17g}\n", traj.work);
    const std::size_t n = traj.samples.empty() ? 0 : traj.samples.front().z.size();
    out << "t";
    for (std::size_t i = 0; i < n; ++i) out << " z_" << i;
    out << "\n";
    for (const auto& st : traj.samples) {
        out << fmt::format("{:.17g}", st.t);
        for (double z : st.z) out << fmt::format(" {:.17g}", z);
        out << "\n";
    }
}

bool OracleSuite::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.pass; });
}

OracleSuite run_oracle_suite(const ChainSpec& chain, const Protocol& p, double T_ph,
                             std::uint64_t seed, double dt, double dd_dt) {
    if (!(dd_dt > 0.0)) dd_dt = dt;
    OracleSuite suite;
    auto add = [&](std::string name, double value, double tol) {
        suite.checks.push_back({std::move(name), value, tol, value <= tol});
    };
    const double T = p.t_half();
    const auto steps = static_cast<std::size_t>(std::ceil(2.0 * T / dt - 1e-9));
    const std::size_t stride = std::max<std::size_t>(1, steps / 32);
    const auto init = thermal_state(chain, T_ph, seed, -T);

    {
        const auto idle = integrate(chain, p.scaled(0.0), +1, dt, init, seed, stride);
        const double e0 = mechanical_energy(chain, idle.samples.front());
        double worst = 0.0;
        for (const auto& st : idle.samples)
            worst = std::max(worst, std::abs(mechanical_energy(chain, st) - e0));
        add("energy drift (no drive)", e0 > 0.0 ? worst / e0 : worst, 1e-8);
    }

    const auto up = integrate(chain, p, +1, dt, init, seed, stride);
    const auto com = com_limit_check(chain, p, up);
    add("CoM momentum", com.momentum_rel_error, 1e-8);
    add("CoM position", com.position_rel_error, 1e-8);
    if (p.order()) {
        add("loop closure, velocity", std::abs(com.final_delta_v) / (p.a_max() * T), 1e-8);
        add("loop closure, position", std::abs(com.final_delta_z) / (p.a_max() * T * T), 1e-8);
    }
    add("mode amplitudes", check_modes(chain, p, up).worst, 1e-6);

    const double gain = mechanical_energy(chain, up.samples.back()) - mechanical_energy(chain, up.samples.front());
    add("work vs energy gain", gain != 0.0 ? std::abs(up.work - gain) / std::abs(gain) : std::abs(up.work),
        1e-6);

    const auto dd = differential_displacement(chain, p, dd_dt, init);
    double scale = 0.0;
    std::vector<PhaseSpaceShift> engine(chain.sites);
    for (std::size_t k = 1; k < chain.sites; ++k) {
        engine[k] = mode_displacement(chain, p, k);
        scale = std::max(scale, phase_norm(engine[k].delta_u, engine[k].delta_udot, dispersion(chain, k)));
    }
    double worst_rel = 0.0, worst_zero = 0.0;
    for (std::size_t k = 1; k < chain.sites; ++k) {
        const double w = dispersion(chain, k);
        const double ref = phase_norm(engine[k].delta_u, engine[k].delta_udot, w);
        const double err = phase_norm(dd[k].delta_u - engine[k].delta_u,
                                      dd[k].delta_udot - engine[k].delta_udot, w);
        // cos(k pi / 2) is not exactly zero in floating point.
        if (ref > 1e-12 * scale)
            worst_rel = std::max(worst_rel, err / ref);
        else
            worst_zero = std::max(worst_zero, scale > 0.0 ? err / scale : err);
    }
    add("differential vs engine", worst_rel, 1e-6);
    if (chain.spin_site * 2 + 1 == chain.sites)
        add("uncoupled modes stay at rest", worst_zero, 1e-9);

    // Same step for both runs, so only the initial state differs.
    const auto dd_hot = differential_displacement(chain, p, dt, init);
    const auto dd_rest = differential_displacement(chain, p, dt, rest_state(chain, -T));
    double diff = 0.0;
    for (std::size_t k = 1; k < chain.sites; ++k) {
        const double w = dispersion(chain, k);
        diff = std::max(diff, phase_norm(dd_hot[k].delta_u - dd_rest[k].delta_u,
                                         dd_hot[k].delta_udot - dd_rest[k].delta_udot, w));
    }
    add("initial-state independence", scale > 0.0 ? diff / scale : diff, 1e-9);
    return suite;
}

}  // namespace phc
