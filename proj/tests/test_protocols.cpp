#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "phc/errors.hpp"
#include "phc/protocols.hpp"
#include "support.hpp"

using namespace phc;
using std::numbers::pi;

namespace {

constexpr double kA = 100.0;
constexpr double kT = 30e-6;

Protocol named(int n) { return Protocol::named(n, kA, kT); }

// Closed form minus quadrature, both as complex loop-end values.
std::complex<double> loop_end_difference(const Protocol& p, double w) {
    const auto closed = std::polar(centered_transform(p, w), -w * p.t_half());
    return closed - spectrum_numeric(p, w);
}

}  // namespace

TEST_CASE("accel_at special points") {
    CHECK(accel_at(named(1), 0.0) == doctest::Approx(-kA));
    CHECK(accel_at(named(1), kT) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(accel_at(named(1), -kT) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(accel_at(named(2), 0.0) == doctest::Approx(-kA));
    CHECK(accel_at(named(0), 0.0) == -kA);
    CHECK(accel_at(named(0), 0.49 * kT) == -kA);
    CHECK(accel_at(named(0), 0.5 * kT) == kA);
    CHECK(accel_at(named(0), -kT) == kA);
    CHECK_THROWS_AS(accel_at(named(1), 1.01 * kT), std::domain_error);
}

TEST_CASE("square layout reproduces its closed-form spectrum") {
    const auto p = named(0);
    for (double x : {0.3, 1.7, 5.0, 22.0}) {
        const double w = x / kT;
        const double closed = kA / w * (2 * std::sin(x) - 4 * std::sin(x / 2));
        CHECK(std::abs(spectrum_numeric(p, w)) == doctest::Approx(std::abs(closed)).epsilon(1e-9));
    }
}

TEST_CASE("spectrum limits") {
    for (int n = 0; n < 3; ++n) CHECK(spectrum_analytic(named(n), 1e-9 / kT) < 1e-12 * kA * kT);
    CHECK(spectrum_analytic(named(2), pi / kT) == doctest::Approx(kA * kT / 2).epsilon(1e-12));
    CHECK(spectrum_analytic(named(0), pi / kT) == doctest::Approx(4 * kA * kT / pi).epsilon(1e-12));
    CHECK(std::abs(spectrum_numeric(named(0), 0.0)) < 1e-12 * kA * kT);
    CHECK_THROWS_AS(spectrum_analytic(Protocol::custom({{-kT, 1.0}, {kT, 1.0}}), 1.0), std::invalid_argument);
}

TEST_CASE("analytic and numeric spectra agree") {
    for (int n = 0; n < 3; ++n) {
        const auto p = named(n);
        for (double x : testing::log_grid(1e-2, 1e3, 60)) {
            const double d = std::abs(loop_end_difference(p, x / kT));
            CHECK(d <= 1e-9 * kA * kT);
        }
    }
}

TEST_CASE("bicosine singular windows") {
    const auto p = named(2);
    for (double s : {pi, 2 * pi})
        for (double r : {-9e-5, -1e-6, 0.0, 1e-8, 5e-5, 1.1e-4}) {
            const double w = s * (1 + r) / kT;
            const double a = spectrum_analytic(p, w);
            const double b = std::abs(spectrum_numeric(p, w));
            CHECK(std::abs(a - b) <= 1e-6 * kA * kT);
        }
}

TEST_CASE("quartic at omega T = 3") {
    const auto p = named(1);
    const double a = spectrum_analytic(p, 3.0 / kT);
    CHECK(std::abs(spectrum_numeric(p, 3.0 / kT)) == doctest::Approx(a).epsilon(1e-9));
}

TEST_CASE("sampled quartic as a custom profile") {
    const auto q = named(1);
    auto sampled = [&](std::size_t count) {
        std::vector<ProfileSample> s(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double t = -kT + 2 * kT * static_cast<double>(i) / static_cast<double>(count - 1);
            s[i] = {t, accel_at(q, t)};
        }
        s.back().t = kT;
        return Protocol::custom(s, kT);
    };
    const auto c1 = sampled(1000), c2 = sampled(2000);
    // Linear interpolation: |a - a_lin| <= h^2 max|a''| / 8 with max|a''| = 48 a_max / T^2.
    const double h = 2 * kT / 999.0;
    const double bound = h * h / 8 * 48 * kA / (kT * kT) * 2 * kT;
    for (double x : {0.5, 3.0, 10.0}) {
        const double exact = spectrum_analytic(q, x / kT);
        const double e1 = std::abs(std::abs(spectrum_numeric(c1, x / kT)) - exact);
        const double e2 = std::abs(std::abs(spectrum_numeric(c2, x / kT)) - exact);
        CHECK(e1 <= bound);
        CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
    }
}

TEST_CASE("closed loops") {
    for (int n = 0; n < 3; ++n) {
        const auto c = closure_check(named(n));
        CHECK(std::abs(c.delta_v) <= 1e-12 * kA * kT);
        CHECK(std::abs(c.delta_z) <= 1e-12 * kA * kT * kT);
    }
    const auto c = closure_check(Protocol::custom({{-kT, kA}, {kT, kA}}, kT));
    CHECK(c.delta_v == doctest::Approx(2 * kA * kT).epsilon(1e-12));
    CHECK(c.delta_z == doctest::Approx(2 * kA * kT * kT).epsilon(1e-12));
}

TEST_CASE("energy constants over the full window") {
    CHECK(energy_constant(named(0)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(energy_constant(named(1)) == doctest::Approx(256.0 / 315.0).epsilon(1e-12));
    CHECK(energy_constant(named(2)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(energy_norm(named(1)) == doctest::Approx(256.0 / 315.0 * kA * kA * kT).epsilon(1e-12));
}

TEST_CASE("Parseval over a wide band") {
    using boost::math::quadrature::gauss;
    for (int n = 0; n < 3; ++n) {
        const auto p = named(n);
        // Panels of one period of the slowest oscillation, out to omega T = 4 pi m.
        const double top = n == 0 ? 4 * pi * 4000 : 4 * pi * 100;
        const double panel = 4 * pi / kT / 4;
        double band = 0.0;
        for (double w0 = 0.0; w0 < top / kT - 0.5 * panel; w0 += panel)
            band += gauss<double, 20>::integrate(
                [&](double w) {
                    const double s = spectrum_analytic(p, w);
                    return s * s;
                },
                w0, w0 + panel);
        // Square tail: |a|^2 averages to 10 a^2 / omega^2.
        if (n == 0) band += 10 * kA * kA / (top / kT);
        CHECK(2 * band == doctest::Approx(2 * pi * energy_norm(p)).epsilon(1e-6));
    }
}

TEST_CASE("envelope slopes") {
    for (int n = 0; n < 3; ++n) {
        const auto fit = testing::envelope_fit(named(n));
        CHECK(fit.slope == doctest::Approx(-(n + 1)).epsilon(0.1 / (n + 1)));
    }
}

TEST_CASE("spectra scale linearly in a_max") {
    for (int n = 0; n < 3; ++n) {
        const double w = 7.3 / kT;
        CHECK(spectrum_analytic(Protocol::named(n, 2 * kA, kT), w) ==
              doctest::Approx(2 * spectrum_analytic(named(n), w)).epsilon(1e-15));
    }
}

TEST_CASE("custom profile validation") {
    CHECK_THROWS_AS(Protocol::custom({{-kT, 0.0}}, kT), ValidationError);
    CHECK_THROWS_AS(Protocol::custom({{-kT, 0.0}, {0.5 * kT, 1.0}}, kT), ValidationError);
    CHECK_THROWS_AS(Protocol::custom({{-kT, 0.0}, {0.0, 1.0}, {-0.5 * kT, 1.0}, {kT, 0.0}}, kT),
                    ValidationError);

    std::istringstream bad("# t a\n-1 0\n0 1 2\n1 0\n");
    try {
        read_profile(bad);
        FAIL("expected throw");
    } catch (const ValidationError& e) {
        CHECK(e.line() == 3);
    }
    std::istringstream ok("# t a\n-1e-6 0\n\n0 5\n1e-6 0\n");
    const auto p = Protocol::custom(read_profile(ok));
    CHECK(p.t_half() == doctest::Approx(1e-6));
    CHECK(p.a_max() == 5.0);
    CHECK(accel_at(p, 0.5e-6) == doctest::Approx(2.5));
}

TEST_CASE("custom transform against brute-force quadrature") {
    using boost::math::quadrature::gauss;
    const auto p = Protocol::custom({{-kT, 0.0}, {-0.3 * kT, kA}, {0.1 * kT, -0.5 * kA}, {kT, 0.2 * kA}}, kT);
    for (double x : {0.0, 1e-7, 0.02, 0.9, 7.0, 60.0})
        for (double t : {-0.5 * kT, 0.05 * kT, kT}) {
            const double w = x / kT;
            std::complex<double> ref = 0.0;
            const double edges[] = {-kT, -0.3 * kT, 0.1 * kT, kT};
            for (int i = 0; i < 3; ++i) {
                const double lo = edges[i], hi = std::min(edges[i + 1], t);
                if (hi <= lo) break;
                const int pieces = 64;
                for (int j = 0; j < pieces; ++j) {
                    const double a = lo + (hi - lo) * j / pieces, b = lo + (hi - lo) * (j + 1) / pieces;
                    ref += gauss<double, 20>::integrate(
                        [&](double s) { return accel_at(p, s) * std::cos(w * (s - t)); }, a, b);
                    ref += std::complex<double>(0, 1) * gauss<double, 20>::integrate(
                        [&](double s) { return accel_at(p, s) * std::sin(w * (s - t)); }, a, b);
                }
            }
            CHECK(std::abs(windowed_transform(p, w, t) - ref) <= 1e-12 * kA * kT);
        }
    // fast even far above the sampling rate
    CHECK(std::isfinite(std::abs(spectrum_numeric(p, 1e9 / kT))));
}
