#include "phc/units.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phc {

double MaterialSpec::spring_constant() const {
    return atom_mass * sound_speed * sound_speed / (lattice_constant * lattice_constant);
}

void MaterialSpec::validate() const {
    auto require_positive = [](double v, const char* field) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("material: ") + field + " must be positive");
    };
    require_positive(lattice_constant, "lattice_constant");
    require_positive(atom_mass, "atom_mass");
    require_positive(sound_speed, "sound_speed");
    require_positive(density, "density");
    if (atoms_per_cell < 1)
        throw std::invalid_argument("material: atoms_per_cell must be >= 1");
}

MaterialSpec MaterialSpec::diamond() {
    MaterialSpec m;
    m.name = "diamond";
    m.lattice_constant = 3.6e-10;
    m.atom_mass = 12.0 * PhysicalConstants::amu;
    m.atoms_per_cell = 8;
    m.sound_speed = 17.5e3;
    m.density = 3.5e3;
    return m;
}

void ThermalState::validate() const {
    if (!(T_ph >= 0.0) || !(T_cm >= 0.0))
        throw std::invalid_argument("thermal state: temperatures must be >= 0");
}

double acceleration_from_gradient(double mu, double gradient, double mass) {
    if (!(mass > 0.0))
        throw std::domain_error("acceleration_from_gradient: mass must be positive");
    return mu * gradient / mass;
}

double gradient_for_acceleration(double mu, double acceleration, double mass) {
    if (!(mu > 0.0))
        throw std::domain_error("gradient_for_acceleration: magnetic moment must be positive");
    return mass * acceleration / mu;
}

std::optional<double> thermal_coherence_length(double mass, double temperature) {
    if (!(mass > 0.0))
        throw std::domain_error("thermal_coherence_length: mass must be positive");
    if (temperature < 0.0)
        throw std::domain_error("thermal_coherence_length: negative temperature");
    if (temperature == 0.0)
        return std::nullopt;
    return PhysicalConstants::hbar / std::sqrt(mass * PhysicalConstants::k_B * temperature);
}

double fundamental_tone(double sound_speed, double length) {
    if (!(sound_speed > 0.0) || !(length > 0.0))
        throw std::domain_error("fundamental_tone: speed and length must be positive");
    return std::numbers::pi * sound_speed / length;
}

}  // namespace phc
