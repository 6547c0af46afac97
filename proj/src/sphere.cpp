#include "phc/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

namespace phc {
namespace {

using std::numbers::pi;

double g_of(double x) {
    if (x < 0.05) {
        const double x2 = x * x;
        return x * (1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0);
    }
    return std::sin(x) / (x * x) - std::cos(x) / x;
}

// g(x) / x, finite at the origin.
double g_over_x(double x) {
    if (x < 0.05) {
        const double x2 = x * x;
        return 1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0;
    }
    return g_of(x) / x;
}

double field_magnitude(double x, double cos_theta) {
    const double gp = dipole_boundary_function(x);
    const double gx = g_over_x(x);
    const double c2 = cos_theta * cos_theta;
    return std::sqrt(c2 * gp * gp + (1.0 - c2) * gx * gx);
}

double grid_maximum(double x_edge, int radial, int polar) {
    double best = 0.0;
    for (int i = 0; i <= radial; ++i) {
        const double x = x_edge * static_cast<double>(i) / radial;
        for (int j = 0; j <= polar; ++j) {
            const double theta = pi * static_cast<double>(j) / polar;
            best = std::max(best, field_magnitude(x, std::cos(theta)));
        }
    }
    return best;
}

}  // namespace

double SphereSpec::mass() const { return material.density * pi * diameter * diameter * diameter / 6.0; }

void SphereSpec::validate() const {
    material.validate();
    if (!(diameter > 0.0)) throw std::invalid_argument("sphere: diameter must be positive");
    if (!(spin_radius >= 0.0) || spin_radius > radius())
        throw std::invalid_argument("sphere: spin radius must lie in [0, D/2]");
    if (!(spin_alignment >= 0.0) || spin_alignment > 1.0)
        throw std::invalid_argument("sphere: spin alignment must lie in [0, 1]");
}

double dipole_radial_function(double q, double r) { return g_of(q * r); }

double dipole_boundary_function(double x) {
    if (x < 0.05) {
        const double x2 = x * x;
        return 1.0 / 3.0 - x2 / 10.0 + x2 * x2 / 168.0 - x2 * x2 * x2 / 6480.0;
    }
    return ((x * x - 2.0) * std::sin(x) + 2.0 * x * std::cos(x)) / (x * x * x);
}

double dipole_boundary_root(int index) {
    if (index < 1) throw std::invalid_argument("dipole_boundary_root: index must be >= 1");
    // Roots are spaced by roughly pi; scan finely from 0.1 and take the
    // index-th sign change.
    const double step = 3.9e-3;
    double lo = 0.1;
    double f_lo = dipole_boundary_function(lo);
    int found = 0;
    const double limit = 0.1 + (index + 2) * pi;
    for (double hi = lo + step; hi < limit; hi += step) {
        const double f_hi = dipole_boundary_function(hi);
        if ((f_lo < 0.0) != (f_hi < 0.0) && ++found == index) {
            std::uintmax_t iters = 100;
            auto tol = boost::math::tools::eps_tolerance<double>(50);
            auto [a, b] = boost::math::tools::toms748_solve(dipole_boundary_function, lo, hi, f_lo,
                                                             f_hi, tol, iters);
            if (iters >= 100 || !(std::abs(b - a) <= 1e-12 * b)) {
                std::ostringstream msg;
                msg << "dipole_boundary_root: no convergence in [" << lo << ", " << hi
                    << "], last bracket [" << a << ", " << b << "]";
                throw std::runtime_error(msg.str());
            }
            return 0.5 * (a + b);
        }
        lo = hi;
        f_lo = f_hi;
    }
    throw std::runtime_error("dipole_boundary_root: root not bracketed");
}

double fundamental_dipole_wavenumber(double diameter) {
    if (!(diameter > 0.0)) throw std::domain_error("fundamental_dipole_wavenumber: D must be positive");
    static const double x1 = dipole_boundary_root(1);
    return 2.0 * x1 / diameter;
}

double fundamental_frequency(const SphereSpec& sphere) {
    return sphere.material.sound_speed * fundamental_dipole_wavenumber(sphere.diameter);
}

double dipole_field_maximum(double x_edge) {
    int radial = 200;
    int polar = 100;
    double previous = grid_maximum(x_edge, radial, polar);
    for (int pass = 0; pass < 8; ++pass) {
        radial *= 2;
        polar *= 2;
        const double current = grid_maximum(x_edge, radial, polar);
        if (std::abs(current - previous) <= 1e-4 * current) return current;
        previous = current;
    }
    return previous;
}

double spin_mode_overlap(const SphereSpec& sphere, int mode_index) {
    sphere.validate();
    const double x_edge = dipole_boundary_root(mode_index);
    const double x_spin = x_edge * sphere.spin_radius / sphere.radius();
    const double amplitude = std::abs(dipole_boundary_function(x_spin)) / dipole_field_maximum(x_edge);
    const double proj = amplitude * sphere.spin_alignment;
    return std::min(1.0, proj * proj);
}

}  // namespace phc
