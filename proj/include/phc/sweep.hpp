#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include "phc/config.hpp"
#include "phc/fit.hpp"

namespace phc {

struct SweepRow {
    double value = 0.0;   // the swept quantity
    double length = 0.0;  // m
    double mass = 0.0;    // kg
    double omega1 = 0.0;  // rad/s
    double t_half = 0.0;  // s
    double a_max = 0.0;   // m/s^2
    double b_max = 0.0;   // T/m, gradient needed for a_max
    double t_ph = 0.0;    // K
    std::array<double, 3> minus_log_C{};  // protocols 0, 1, 2
    std::array<double, 3> estimate{};
    bool classical = false;  // hbar omega_1 < k_B T_ph / 3
    bool capped = false;     // clamped to the gradient or duration cap
};

struct SweepResult {
    std::vector<SweepRow> rows;
    /// Log-log fit of -log C against the swept value over classical,
    /// uncapped rows, per protocol; empty with fewer than two such rows.
    std::array<std::optional<PowerLawFit>, 3> fits;
};

/// Grid of swept values, inclusive of both ends.
std::vector<double> sweep_values(const RunConfig& cfg);

/// All three protocols at one grid value.
SweepRow evaluate_point(const RunConfig& cfg, double value);

/// Points are evaluated on `threads` workers (0: hardware concurrency) and
/// stored in grid order, so the result does not depend on the thread count.
SweepResult run_sweep(const RunConfig& cfg, unsigned threads = 0);

/// Column header plus one row per point, then "# fit" lines.
void write_sweep_csv(std::ostream& out, const RunConfig& cfg, const SweepResult& result);

}  // namespace phc
