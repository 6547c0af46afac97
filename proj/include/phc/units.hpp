#pragma once

#include <optional>
#include <string>

namespace phc {

/// CODATA 2018 values, SI.
struct PhysicalConstants {
    static constexpr double hbar = 1.054571817e-34;   // J s
    static constexpr double k_B = 1.380649e-23;       // J/K
    static constexpr double amu = 1.66053906660e-27;  // kg
    static constexpr double mu_B = 9.2740100783e-24;  // J/T
};

/// Per-site mass of the 1D chain model (one carbon atom per lattice step).
inline constexpr double kChainSiteMass = 12.0 * PhysicalConstants::amu;

/// Crystal the levitated object is made of. All fields SI.
struct MaterialSpec {
    std::string name;
    double lattice_constant = 0.0;  // m
    double atom_mass = 0.0;         // kg
    int atoms_per_cell = 1;
    double sound_speed = 0.0;  // m/s
    double density = 0.0;      // kg/m^3

    /// K = m c^2 / a^2, the nearest-neighbour spring that reproduces c in the
    /// acoustic limit of the chain dispersion.
    double spring_constant() const;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    static MaterialSpec diamond();
};

struct ThermalState {
    double T_ph = 0.0;  // internal phonon temperature, K
    double T_cm = 0.0;  // centre-of-mass kinetic temperature, K

    void validate() const;
};

/// a = mu b / M. Throws std::domain_error for M <= 0.
double acceleration_from_gradient(double mu, double gradient, double mass);

/// Inverse of acceleration_from_gradient: b = M a / mu.
double gradient_for_acceleration(double mu, double acceleration, double mass);

/// hbar (M k_B T)^{-1/2}; std::nullopt at T = 0 (infinite coherence length).
std::optional<double> thermal_coherence_length(double mass, double temperature);

/// Lowest standing-wave tone pi c / L of a free bar of length L.
double fundamental_tone(double sound_speed, double length);

}  // namespace phc
