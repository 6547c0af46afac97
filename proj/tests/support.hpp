#pragma once

// Helpers shared by the unit tests and the acceptance binary.

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "phc/contrast.hpp"
#include "phc/fit.hpp"
#include "phc/protocols.hpp"
#include "phc/units.hpp"

namespace phc::testing {

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
    return v;
}

/// Log-log slope of the local maxima of |a(omega)| over omega T_half in
/// [lo, hi], found on a grid of `per_unit` points per unit of omega T.
inline PowerLawFit envelope_fit(const Protocol& p, double lo = 50.0, double hi = 500.0,
                                int per_unit = 200) {
    const double T = p.t_half();
    const auto n = static_cast<std::size_t>((hi - lo) * per_unit) + 1;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        y[i] = spectrum_analytic(p, x[i] / T);
    }
    std::vector<double> px, py;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
            px.push_back(x[i]);
            py.push_back(y[i]);
        }
    return fit_power_law(px, py);
}

// Brute-force |Tr[rho D]| for a thermal mode of mass M/2: 2D Gauss-Legendre
// quadrature of the Wigner function against the displacement phase.
inline double wigner_overlap(const PhaseSpaceShift& d, double omega, double M, double T) {
    using boost::math::quadrature::gauss;
    using PC = PhysicalConstants;
    const double mu = 0.5 * M;
    const double coth = T > 0 ? 1.0 / std::tanh(PC::hbar * omega / (2 * PC::k_B * T)) : 1.0;
    const double su = std::sqrt(PC::hbar / (2 * mu * omega) * coth);
    const double sp = std::sqrt(PC::hbar * mu * omega / 2 * coth);
    const double dp = mu * d.delta_udot;
    const double du = d.delta_u;
    auto w = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); };
    const double edge = 12.0;
    const int panels = 48;
    const double h = 2 * edge / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i)
        for (int j = 0; j < panels; ++j) {
            const double x0 = -edge + i * h, y0 = -edge + j * h;
            total += gauss<double, 20>::integrate(
                [&](double x) {
                    return gauss<double, 20>::integrate(
                        [&](double y) {
                            return w(x) * w(y) * std::cos((dp * su * x - du * sp * y) / PC::hbar);
                        },
                        y0, y0 + h);
                },
                x0, x0 + h);
        }
    return std::abs(total);
}

}  // namespace phc::testing
