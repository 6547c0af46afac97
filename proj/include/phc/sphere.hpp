#pragma once

#include "phc/units.hpp"

namespace phc {

/// Homogeneous elastic sphere in the single-sound-speed continuum model.
struct SphereSpec {
    double diameter = 0.0;  // m
    MaterialSpec material;
    double spin_radius = 0.0;     // distance of the spin from the centre, m
    double spin_alignment = 1.0;  // |e_z . f_hat| at the spin site, in [0, 1]

    double radius() const { return 0.5 * diameter; }
    /// rho pi D^3 / 6.
    double mass() const;
    void validate() const;
};

/// g(x) = sin(x)/x^2 - cos(x)/x (the l = 1 spherical Bessel function) at x = q r.
double dipole_radial_function(double q, double r);

/// g'(x). The dipole potential cos(theta) g(q r) satisfies the Neumann
/// condition at the surface when g'(q D / 2) = 0.
double dipole_boundary_function(double x);

/// index-th positive root (1-based) of g'(x). Throws std::runtime_error with
/// the bracket if the solver does not converge.
double dipole_boundary_root(int index);

/// Lowest nonzero Neumann eigen-wavenumber of the dipole family, q = 2 x_1 / D.
double fundamental_dipole_wavenumber(double diameter);

/// omega_1 = c q.
double fundamental_frequency(const SphereSpec& sphere);

/// |e_z . f(r_s)|^2 for the index-th dipole mode, with f = grad[cos(theta)
/// g(q r)] normalised to unit maximum magnitude over the sphere. The spin sits
/// on the polar axis through the centre (the force axis), so |f(r_s)| =
/// q |g'(q r_s)|; spin_alignment supplies the remaining projection.
///
/// Unlike the odd chain modes, the dipole field is finite and uniform at the
/// centre (g(x) ~ x/3), so a central spin still couples to this mode.
double spin_mode_overlap(const SphereSpec& sphere, int mode_index = 1);

/// Maximum of |f| / q over the ball for the dipole mode with q R = x_edge,
/// found on a radial x polar grid refined until the maximum changes by less
/// than 1e-4 (relative).
double dipole_field_maximum(double x_edge);

}  // namespace phc
