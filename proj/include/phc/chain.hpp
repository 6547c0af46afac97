#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "phc/units.hpp"

namespace phc {

/// Linear chain of N equal masses with free ends and nearest-neighbour springs.
/// Site n sits at (n + 1/2) a from the left end; the spin lives on site
/// `spin_site`.
struct ChainSpec {
    std::size_t sites = 2;
    double spacing = 0.0;      // a, m
    double site_mass = 0.0;    // m, kg
    double sound_speed = 0.0;  // c, m/s; fixes K = m c^2 / a^2
    std::size_t spin_site = 0;

    double length() const { return spacing * static_cast<double>(sites); }
    double total_mass() const { return site_mass * static_cast<double>(sites); }
    double spring_constant() const;
    /// sqrt(4K/m), the zone-boundary limit of the dispersion.
    double band_edge() const;

    void validate() const;

    /// N = round(L / a) sites of the material's lattice step and the default
    /// per-site mass.
    static ChainSpec from_length(const MaterialSpec& material, double length,
                                 std::size_t spin_site = 0);
    /// Site whose centre is closest to the chain centre; exact when N is odd.
    std::size_t center_site() const { return (sites - 1) / 2; }
};

/// omega_k = sqrt(4K/m) sin(q a / 2), q = pi k / L. k = 0 is the rigid mode.
double dispersion(const ChainSpec& chain, std::size_t k);

/// cos[(s + 1/2) q a] for mode k.
double mode_amplitude_at_spin(const ChainSpec& chain, std::size_t k);

/// Wavenumber, frequency and spin-site amplitude of every mode, k = 0..N-1.
class ModeTable {
  public:
    explicit ModeTable(const ChainSpec& chain);

    std::size_t size() const { return omega_.size(); }
    std::span<const double> wavenumbers() const { return q_; }
    std::span<const double> omegas() const { return omega_; }
    std::span<const double> spin_amplitudes() const { return spin_amp_; }

  private:
    std::vector<double> q_;
    std::vector<double> omega_;
    std::vector<double> spin_amp_;
};

/// Mode coordinates of a displacement field: element 0 is the centre of mass
/// Z = (1/N) sum z_n, element k >= 1 is u_k = (2/N) sum z_n cos[(n + 1/2) q_k a].
/// Throws std::invalid_argument on a length mismatch.
std::vector<double> project_modes(const ChainSpec& chain, std::span<const double> displacements);

/// Inverse of project_modes: z_n = Z + sum_k u_k cos[(n + 1/2) q_k a].
std::vector<double> reconstruct_displacements(const ChainSpec& chain, std::span<const double> modes);

}  // namespace phc
