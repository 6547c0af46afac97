#include "phc/chain.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "phc/numeric.hpp"

namespace phc {
namespace {

using std::numbers::pi;

void check_index(const ChainSpec& chain, std::size_t k) {
    if (k >= chain.sites)
        throw std::out_of_range("mode index " + std::to_string(k) + " outside [0, " +
                                std::to_string(chain.sites) + ")");
}

// cos(pi j / (2N)) for j in [0, 4N). The basis cos[(n + 1/2) pi k / N] is
// table[((2n + 1) k) mod 4N], which keeps argument reduction exact.
std::vector<double> cosine_table(std::size_t n) {
    std::vector<double> t(4 * n);
    for (std::size_t j = 0; j < t.size(); ++j)
        t[j] = std::cos(pi * static_cast<double>(j) / (2.0 * static_cast<double>(n)));
    return t;
}

}  // namespace

double ChainSpec::spring_constant() const {
    return site_mass * sound_speed * sound_speed / (spacing * spacing);
}

double ChainSpec::band_edge() const { return std::sqrt(4.0 * spring_constant() / site_mass); }

void ChainSpec::validate() const {
    if (sites < 2) throw std::invalid_argument("chain: need at least 2 sites");
    if (!(spacing > 0.0) || !(site_mass > 0.0) || !(sound_speed > 0.0))
        throw std::invalid_argument("chain: spacing, site mass and sound speed must be positive");
    if (spin_site >= sites)
        throw std::invalid_argument("chain: spin site " + std::to_string(spin_site) +
                                    " outside [0, " + std::to_string(sites) + ")");
}

ChainSpec ChainSpec::from_length(const MaterialSpec& material, double length,
                                 std::size_t spin_site) {
    if (!(length > 0.0)) throw std::invalid_argument("chain: length must be positive");
    ChainSpec c;
    c.sites = static_cast<std::size_t>(std::llround(length / material.lattice_constant));
    if (c.sites < 2) c.sites = 2;
    c.spacing = material.lattice_constant;
    c.site_mass = kChainSiteMass;
    c.sound_speed = material.sound_speed;
    c.spin_site = spin_site;
    c.validate();
    return c;
}

double dispersion(const ChainSpec& chain, std::size_t k) {
    check_index(chain, k);
    const double qa = pi * static_cast<double>(k) / static_cast<double>(chain.sites);
    return chain.band_edge() * std::sin(0.5 * qa);
}

double mode_amplitude_at_spin(const ChainSpec& chain, std::size_t k) {
    check_index(chain, k);
    const double n = static_cast<double>(chain.sites);
    return std::cos((static_cast<double>(chain.spin_site) + 0.5) * pi * static_cast<double>(k) / n);
}

ModeTable::ModeTable(const ChainSpec& chain) {
    chain.validate();
    const std::size_t n = chain.sites;
    q_.resize(n);
    omega_.resize(n);
    spin_amp_.resize(n);
    const double edge = chain.band_edge();
    const double L = chain.length();
    for (std::size_t k = 0; k < n; ++k) {
        const double qa = pi * static_cast<double>(k) / static_cast<double>(n);
        q_[k] = pi * static_cast<double>(k) / L;
        omega_[k] = edge * std::sin(0.5 * qa);
        spin_amp_[k] = mode_amplitude_at_spin(chain, k);
    }
}

std::vector<double> project_modes(const ChainSpec& chain, std::span<const double> displacements) {
    const std::size_t n = chain.sites;
    if (displacements.size() != n)
        throw std::invalid_argument("project_modes: expected " + std::to_string(n) +
                                    " displacements, got " + std::to_string(displacements.size()));
    const auto table = cosine_table(n);
    const std::size_t period = 4 * n;
    std::vector<double> modes(n);
    for (std::size_t k = 0; k < n; ++k) {
        CompensatedSum<double> sum;
        std::size_t j = k % period;           // (2n + 1) k mod 4N at n = 0
        const std::size_t step = (2 * k) % period;
        for (std::size_t site = 0; site < n; ++site) {
            sum.add(displacements[site] * table[j]);
            j += step;
            if (j >= period) j -= period;
        }
        modes[k] = (k == 0 ? 1.0 : 2.0) * sum.value() / static_cast<double>(n);
    }
    return modes;
}

std::vector<double> reconstruct_displacements(const ChainSpec& chain, std::span<const double> modes) {
    const std::size_t n = chain.sites;
    if (modes.size() != n)
        throw std::invalid_argument("reconstruct_displacements: expected " + std::to_string(n) +
                                    " modes, got " + std::to_string(modes.size()));
    const auto table = cosine_table(n);
    const std::size_t period = 4 * n;
    std::vector<double> z(n);
    for (std::size_t site = 0; site < n; ++site) {
        CompensatedSum<double> sum;
        sum.add(modes[0]);
        const std::size_t step = (2 * site + 1) % period;
        std::size_t j = 0;
        for (std::size_t k = 1; k < n; ++k) {
            j += step;
            if (j >= period) j -= period;
            sum.add(modes[k] * table[j]);
        }
        z[site] = sum.value();
    }
    return z;
}

}  // namespace phc
