#pragma once

// Monte Carlo wavefunction sampling of the ancilla-augmented system. An
// ancilla qubit selects which hypothesis acts on the system; the overlap of
// the joint system-environment states is twice the ancilla coherence
// <sigma_A^+>, estimated here as an ensemble average over quantum-jump
// trajectories. This is a statistical check on the deterministic two-sided
// solver, not a replacement for it.

#include "qhypo/model.hpp"
#include "qhypo/numerics.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qhypo {

// Basis ordering: index = ancilla * d + system.
struct AugmentedModel {
  Eigen::Index dim = 0;  // 2d
  TimeDependentHamiltonian hamiltonian;  // diag(H0, H1)
  std::vector<ComplexMatrix> channels;   // diag(c0_m, c1_m)
  ComplexMatrix sigma_plus;              // |1><0|_A kron I_d
  ComplexVector initial_state;           // (|0> + |1>)/sqrt(2) kron psi_S(0)
};

AugmentedModel build_augmented(const HypothesisPair& pair);

struct EnsembleConfig {
  std::size_t n_traj = 1000;
  std::uint64_t seed = 0;
  double dt = 1e-3;
};

struct EnsembleEstimate {
  std::vector<double> times;
  std::vector<Complex> mean_overlap;  // 2 <sigma_A^+> averaged over trajectories
  std::vector<double> std_err;
};

// dt * (sum of the largest eigenvalues of c_m^+ c_m) must stay below this.
inline constexpr double kJumpStabilityBound = 0.05;

// Largest total jump rate the model can reach in any state.
double max_jump_rate(const AugmentedModel& model);

// First-order quantum-jump unraveling with fixed step dt. Every t_grid point
// must be a non-negative integer multiple of dt. Trajectory i draws from its
// own generator, a 64-bit Mersenne twister seeded with
// splitmix64(seed ^ splitmix64(i)), so results do not depend on threading.
EnsembleEstimate run_ensemble(const AugmentedModel& model, std::span<const double> t_grid,
                              const EnsembleConfig& cfg);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qhypo
