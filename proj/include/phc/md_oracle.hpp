#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "phc/chain.hpp"
#include "phc/contrast.hpp"
#include "phc/protocols.hpp"

namespace phc {

/// Site displacements from equilibrium and velocities at time t.
struct ChainState {
    std::vector<double> z;  // m
    std::vector<double> v;  // m/s
    double t = 0.0;         // s
};

struct Trajectory {
    std::vector<ChainState> samples;  // strictly increasing t
    int spin_sign = 1;
    std::uint64_t seed = 0;
    double dt = 0.0;     // step actually used (divides the window evenly)
    double work = 0.0;   // J, work done by the spin-site force
    std::string protocol;
};

/// 2 pi / (100 omega_max), omega_max = sqrt(4K/m).
double max_stable_dt(const ChainSpec& chain);

/// All sites at rest at t.
ChainState rest_state(const ChainSpec& chain, double t);

/// Per-mode Gaussian draw with sigma_u^2 = 2 k_B T / (M omega^2) and
/// sigma_udot^2 = 2 k_B T / M; the centre of mass starts at rest.
ChainState thermal_state(const ChainSpec& chain, double T, std::uint64_t seed, double t);

/// Velocity Verlet over [-T_half, +T_half] with free ends. The spin site
/// feels spin_sign (M/2) a(t), applied as the exact impulse over each half
/// step. dt is shrunk so that an integer number of steps fills the window.
/// Samples are kept every `stride` steps (0: first and last only).
/// Throws std::invalid_argument if dt exceeds max_stable_dt.
Trajectory integrate(const ChainSpec& chain, const Protocol& p, int spin_sign, double dt,
                     const ChainState& initial, std::uint64_t seed = 0, std::size_t stride = 0);

/// Kinetic plus spring energy.
double mechanical_energy(const ChainSpec& chain, const ChainState& s);

struct ModeCheck {
    std::vector<double> rel_error;  // per mode k >= 1 (index k - 1)
    double worst = 0.0;
};

/// Compares the mode projections of every sample with the free rotation of
/// the initial mode coordinates plus the driven convolution
/// spin_sign (c_k / omega_k) int a(t') sin[omega_k (t - t')] dt'. Errors are
/// phase-space distances relative to the largest analytic amplitude of the mode.
ModeCheck check_modes(const ChainSpec& chain, const Protocol& p, const Trajectory& traj);

struct ComCheck {
    double momentum_rel_error = 0.0;  // P(t) vs P(0) + spin_sign (M/2) int a
    double position_rel_error = 0.0;  // Z(t) vs free drift + spin_sign (1/2) int int a
    double final_delta_v = 0.0;       // driven part of V at the loop end
    double final_delta_z = 0.0;       // driven part of Z at the loop end
};

ComCheck com_limit_check(const ChainSpec& chain, const Protocol& p, const Trajectory& traj);

/// Runs both spin signs from the same initial state and returns the final
/// differences of the mode coordinates; element 0 holds (Delta Z, Delta V).
std::vector<PhaseSpaceShift> differential_displacement(const ChainSpec& chain, const Protocol& p,
                                                       double dt, const ChainState& initial);

/// Columnar text: '#' metadata header then t z_0 ... z_{N-1} per sample.
void write_trajectory(std::ostream& out, const Trajectory& traj);

struct OracleCheck {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct OracleSuite {
    std::vector<OracleCheck> checks;
    bool all_pass() const;
};

/// CoM, mode, differential-displacement, energy and work checks at the
/// module tolerances. The comparison against the engine runs at dd_dt
/// (0: dt); modes close to a spectral zero need a finer step there.
OracleSuite run_oracle_suite(const ChainSpec& chain, const Protocol& p, double T_ph,
                             std::uint64_t seed, double dt, double dd_dt = 0.0);

}  // namespace phc
