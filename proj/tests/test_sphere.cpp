#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "phc/sphere.hpp"

using namespace phc;
using std::numbers::pi;

namespace {

SphereSpec sphere(double d, double rs_frac = 0.1, double align = 1.0) {
    SphereSpec s;
    s.diameter = d;
    s.material = MaterialSpec::diamond();
    s.spin_radius = rs_frac * d / 2;
    s.spin_alignment = align;
    return s;
}

}  // namespace

TEST_CASE("radial function") {
    for (double x : {1e-6, 1e-4, 1e-3, 0.01})
        CHECK(dipole_radial_function(x, 1.0) == doctest::Approx(x / 3).epsilon(x * x / 5));
    CHECK(dipole_radial_function(pi, 1.0) == doctest::Approx(1 / pi).epsilon(1e-14));
    CHECK(dipole_radial_function(2.0, 1.5) == doctest::Approx(std::sin(3.0) / 9 - std::cos(3.0) / 3).epsilon(1e-14));
    // continuity across the series switch
    CHECK(dipole_boundary_function(0.05 - 1e-12) == doctest::Approx(dipole_boundary_function(0.05 + 1e-12)).epsilon(1e-10));
    for (int i = 1; i <= 5000; ++i) CHECK(std::abs(dipole_radial_function(i * 0.01, 1.0)) <= 1.0);
}

TEST_CASE("fundamental dipole wavenumber") {
    const double qd = fundamental_dipole_wavenumber(1e-7) * 1e-7;
    CHECK(std::abs(qd - 4.1632) <= 5e-4);
    CHECK(fundamental_dipole_wavenumber(2e-7) == doctest::Approx(fundamental_dipole_wavenumber(1e-7) / 2).epsilon(1e-15));
    CHECK_THROWS_AS(fundamental_dipole_wavenumber(0.0), std::domain_error);
}

TEST_CASE("one sign change of the boundary function on (0.1, 4)") {
    int changes = 0;
    double prev = dipole_boundary_function(0.1);
    for (int i = 1; i <= 1000; ++i) {
        const double cur = dipole_boundary_function(0.1 + 3.9 * i / 1000.0);
        if ((cur > 0) != (prev > 0)) ++changes;
        prev = cur;
    }
    CHECK(changes == 1);
}

TEST_CASE("root residual") {
    for (int i = 1; i <= 3; ++i) {
        const double x = dipole_boundary_root(i);
        double scale = 0.0;
        for (int j = 0; j <= 400; ++j) scale = std::max(scale, std::abs(dipole_boundary_function(0.01 * j + 0.01)));
        CHECK(std::abs(dipole_boundary_function(x)) < 1e-9 * scale);
        if (i > 1) CHECK(x > dipole_boundary_root(i - 1) + 2.0);
    }
    CHECK_THROWS_AS(dipole_boundary_root(0), std::invalid_argument);
}

TEST_CASE("fundamental frequency") {
    const auto s = sphere(100e-9);
    CHECK(fundamental_frequency(s) / (2 * pi) == doctest::Approx(116e9).epsilon(0.005));
    const double cube = pi * s.material.sound_speed / s.diameter;
    CHECK(fundamental_frequency(s) / cube == doctest::Approx(4.1632 / pi).epsilon(2e-4));
    CHECK(std::isfinite(fundamental_frequency(sphere(1e-9))));
    CHECK(s.mass() == doctest::Approx(3.5e3 * pi * 1e-21 / 6).epsilon(1e-15));
}

TEST_CASE("spin overlap") {
    // Finite and uniform at the centre, unlike the odd chain modes.
    CHECK(spin_mode_overlap(sphere(1e-7, 0.0)) > 0.1);
    CHECK(spin_mode_overlap(sphere(1e-7, 1e-6)) == doctest::Approx(spin_mode_overlap(sphere(1e-7, 0.0))).epsilon(1e-9));
    CHECK(spin_mode_overlap(sphere(1e-7, 0.3, 0.0)) == 0.0);
    CHECK(spin_mode_overlap(sphere(1e-7, 0.3, 0.5)) ==
          doctest::Approx(0.25 * spin_mode_overlap(sphere(1e-7, 0.3))).epsilon(1e-14));
    for (int mode = 1; mode <= 2; ++mode)
        for (int i = 0; i <= 50; ++i) {
            const double o = spin_mode_overlap(sphere(1e-7, i / 50.0), mode);
            CHECK(o >= 0.0);
            CHECK(o <= 1.0 + 1e-12);
        }
    // size independent: the mode shape scales with D
    CHECK(spin_mode_overlap(sphere(1e-8)) == doctest::Approx(spin_mode_overlap(sphere(1e-6))).epsilon(1e-12));
}

TEST_CASE("field normalisation is grid-stable") {
    const double x1 = dipole_boundary_root(1);
    const double m = dipole_field_maximum(x1);
    // |f| / q at the centre is |g'(0)| = 1/3, a lower bound for the maximum
    CHECK(m >= 1.0 / 3.0);
    // brute-force polar-axis and equator scans never exceed it
    for (int i = 0; i <= 2000; ++i) {
        const double x = x1 * i / 2000.0;
        CHECK(std::abs(dipole_boundary_function(x)) <= m * (1 + 1e-4));
        const double equator = x > 0 ? std::abs(dipole_radial_function(x, 1.0)) / x : 1.0 / 3.0;
        CHECK(equator <= m * (1 + 1e-4));
    }
}

TEST_CASE("sphere validation") {
    auto s = sphere(1e-7);
    s.spin_radius = 0.6e-7;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = sphere(1e-7, 0.1, 1.5);
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = sphere(-1e-7);
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
