#pragma once

#include <cmath>
#include <span>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace phc {

/// Neumaier-compensated running sum. Order-dependent but deterministic.
template <typename T>
class CompensatedSum {
  public:
    void add(T x) {
        T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(T x) {
        add(x);
        return *this;
    }
    T value() const { return sum_ + carry_; }

  private:
    T sum_{};
    T carry_{};
};

template <typename T>
T compensated_sum(std::span<const T> xs) {
    CompensatedSum<T> s;
    for (T x : xs) s.add(x);
    return s.value();
}

/// Adaptive Gauss-Kronrod on one smooth panel; relative tolerance w.r.t. the
/// panel's L1 norm.
///
/// The panel is mapped onto [0, 1] first: Boost's termination test compares
/// the error of the unscaled rule with a tolerance built from the scaled
/// estimate, so very short physical intervals (ps windows) never converge.
template <typename F>
auto integrate_panel(F&& f, double a, double b, double rel_tol = 1e-12) {
    using boost::math::quadrature::gauss_kronrod;
    const double width = b - a;
    auto unit = [&](double x) { return f(a + width * x); };
    return width * gauss_kronrod<double, 31>::integrate(unit, 0.0, 1.0, 20, rel_tol);
}

}  // namespace phc
