#include "phc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "phc/report.hpp"

namespace phc {

std::vector<double> sweep_values(const RunConfig& cfg) {
    std::vector<double> v(cfg.sweep_count);
    const double n = static_cast<double>(cfg.sweep_count - 1);
    for (std::size_t i = 0; i < cfg.sweep_count; ++i) {
        const double f = static_cast<double>(i) / n;
        v[i] = cfg.sweep_scale == SweepScale::log
                   ? std::exp(std::log(cfg.sweep_min) + f * (std::log(cfg.sweep_max) - std::log(cfg.sweep_min)))
                   : cfg.sweep_min + f * (cfg.sweep_max - cfg.sweep_min);
    }
    v.front() = cfg.sweep_min;
    v.back() = cfg.sweep_max;
    return v;
}

SweepRow evaluate_point(const RunConfig& base, double value) {
    RunConfig cfg = base;
    switch (cfg.sweep_variable) {
        case SweepVariable::length:
            cfg.length = value;
            cfg.sites = 0;
            break;
        case SweepVariable::a_max: cfg.a_max = value; cfg.gradient.reset(); break;
        case SweepVariable::t_half: cfg.t_half = value; cfg.t_half_in_sound_times.reset(); break;
        case SweepVariable::t_ph: cfg.t_ph = value; cfg.t_ph_in_quanta.reset(); break;
        case SweepVariable::spin_site:
            cfg.spin_placement = SpinPlacement::index;
            cfg.spin_index = static_cast<std::size_t>(std::llround(value));
            break;
    }
    SweepRow row;
    row.value = value;
    row.length = cfg.regime == Regime::exact_1d ? cfg.chain().length() : cfg.length;
    const double L = row.length;
    row.mass = cfg.object_mass(L);
    row.omega1 = cfg.fundamental(L);
    const auto d = cfg.derive(L);
    row.a_max = d.a_max;
    row.t_half = d.t_half;
    row.t_ph = d.t_ph;
    const double mu = cfg.magnetic_moment;

    if (cfg.constraint == Constraint::fixed_fractional_splitting) {
        const double dz = cfg.split_fraction * L;
        row.t_half = dz / cfg.dv_max;
        if (row.t_half > cfg.t_half_cap) {
            row.t_half = cfg.t_half_cap;
            row.capped = true;
        }
        row.a_max = dz / (row.t_half * row.t_half);
    }
    row.b_max = gradient_for_acceleration(mu, row.a_max, row.mass);
    if (cfg.constraint == Constraint::fixed_fractional_splitting && row.b_max > cfg.gradient_cap) {
        row.b_max = cfg.gradient_cap;
        row.a_max = acceleration_from_gradient(mu, row.b_max, row.mass);
        row.capped = true;
    }
    row.classical = PhysicalConstants::hbar * row.omega1 < PhysicalConstants::k_B * row.t_ph / 3.0;

    double overlap = 0.0;
    if (cfg.regime == Regime::sphere_dominant) overlap = spin_mode_overlap(cfg.sphere_for_diameter(L));
    for (int n = 0; n < 3; ++n) {
        const Protocol p = Protocol::named(n, row.a_max, row.t_half);
        ContrastReport r;
        switch (cfg.regime) {
            case Regime::exact_1d:
                r = contrast_total_1d(cfg.chain(), p, row.t_ph, cfg.thermal_model);
                break;
            case Regime::sphere_dominant:
                r = contrast_3d_small(cfg.sphere_for_diameter(L), p, overlap, row.t_ph, cfg.second_harmonic,
                                      cfg.prefactor);
                break;
            case Regime::macroscopic:
                r = contrast_macroscopic(cfg.material, p, L, row.t_ph, cfg.prefactor);
                break;
        }
        row.minus_log_C[n] = r.minus_log_C;
        row.estimate[n] = r.estimate_fS;
    }
    return row;
}

SweepResult run_sweep(const RunConfig& cfg, unsigned threads) {
    const auto values = sweep_values(cfg);
    SweepResult res;
    res.rows.resize(values.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(values.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            try {
                res.rows[i] = evaluate_point(cfg, values[i]);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);

    for (int n = 0; n < 3; ++n) {
        std::vector<double> x, y;
        for (const auto& r : res.rows) {
            if (!r.classical || r.capped) continue;
            x.push_back(r.value);
            y.push_back(r.minus_log_C[n]);
        }
        try {
            res.fits[n] = fit_power_law(x, y);
        } catch (const std::invalid_argument&) {
            res.fits[n].reset();
        }
    }
    return res;
}

void write_sweep_csv(std::ostream& out, const RunConfig& cfg, const SweepResult& result) {
    out << "# regime = " << to_string(cfg.regime) << "\n";
    out << "# constraint = " << to_string(cfg.constraint) << "\n";
    out << to_string(cfg.sweep_variable)
        << ",L,M,omega1,T_half,a_max,b_max,T_ph,minus_log_C_0,minus_log_C_1,minus_log_C_2,"
           "estimate_0,estimate_1,estimate_2,classical,capped\n";
    for (const auto& r : result.rows) {
        out << format_double(r.value) << ',' << format_double(r.length) << ',' << format_double(r.mass)
            << ',' << format_double(r.omega1) << ',' << format_double(r.t_half) << ','
            << format_double(r.a_max) << ',' << format_double(r.b_max) << ',' << format_double(r.t_ph);
        for (double v : r.minus_log_C) out << ',' << format_double(v);
        for (double v : r.estimate) out << ',' << format_double(v);
        out << ',' << (r.classical ? 1 : 0) << ',' << (r.capped ? 1 : 0) << "\n";
    }
    for (int n = 0; n < 3; ++n) {
        if (const auto& f = result.fits[n])
            out << fmt::format("# fit protocol={} slope={:.17g} intercept={:.17g} r2={:.17g} points={}\n", n,
                               f->slope, f->intercept, f->r_squared, f->points);
        else
            out << "# fit protocol=" << n << " insufficient points\n";
    }
}

}  // namespace phc
