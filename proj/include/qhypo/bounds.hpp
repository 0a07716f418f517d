#pragma once

// Error probabilities for deciding between two hypotheses with equal priors.

#include "qhypo/numerics.hpp"

#include <span>
#include <vector>

namespace qhypo {

// Minimal error for two pure states with overlap alpha:
//   1/2 (1 - sqrt(1 - |alpha|^2)).
// |alpha| up to 1 + 1e-9 is clamped to 1; beyond that throws ValidationError.
double error_from_overlap(Complex alpha);

// Best single measurement on the system alone:
//   1/2 + sum of the negative eigenvalues of (rho1 - rho0) / 2.
double helstrom_error(const ComplexMatrix& rho0, const ComplexMatrix& rho1);

// Un-normalized no-jump wavefunction a|g> + b|e> of a driven decaying
// two-level atom, i d/dt psi = H_NH psi with
//   H_NH = (omega/2)(|e><g| + |g><e|) - (i kappa/2)|e><e|,
// started in |g>.
struct NoJumpState {
  std::vector<double> times;
  std::vector<Complex> a;
  std::vector<Complex> b;

  // Probability of no detection up to times[i]: |a|^2 + |b|^2.
  double no_jump_probability(std::size_t i) const { return std::norm(a[i]) + std::norm(b[i]); }
};

NoJumpState no_jump_evolution(double omega, double kappa, std::span<const double> t_grid,
                              const OdeSettings& settings = {});

struct CountingCurves {
  std::vector<double> pe_counting;       // photon counting only
  std::vector<double> pe_counting_atom;  // photon counting plus final atomic readout
};

// Zero drive versus drive omega1, shared decay kappa.
CountingCurves counting_error_curves(double omega1, double kappa, std::span<const double> t_grid,
                                     const OdeSettings& settings = {});

struct Fig2Bundle {
  std::vector<double> times;
  std::vector<double> pe_min;
  std::vector<double> pe_counting;
  std::vector<double> pe_counting_atom;
  std::vector<double> pe_helstrom;
};

// Four error curves for rabi 0 versus omega1 on resonance, atom starting in
// |g>. t_grid must start at 0. Throws ValidationError if omega0 != 0.
Fig2Bundle fig2_bundle(double omega0, double omega1, double kappa,
                       std::span<const double> t_grid, const OdeSettings& settings = {});

inline constexpr double kOverlapClampTol = 1e-9;
inline constexpr double kHelstromInputTol = 1e-8;

}  // namespace qhypo
