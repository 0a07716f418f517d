#pragma once

// Vectorized two-sided generator and its slowest decay rate, which sets the
// asymptotic exponential convergence of the overlap.

#include "qhypo/model.hpp"
#include "qhypo/numerics.hpp"

#include <functional>
#include <span>
#include <vector>

namespace qhypo {

// d^2 x d^2 matrix L with vec(d/dt rho01) = L vec(rho01) under column stacking:
//   L = -i (I kron H0 - H1^T kron I)
//       + sum_m [ conj(c1_m) kron c0_m - 1/2 (I kron c0_m^+ c0_m + (c1_m^+ c1_m)^T kron I) ]
// Throws ValidationError for time-dependent Hamiltonians.
ComplexMatrix vectorize_two_sided(const HypothesisPair& pair);

struct SpectrumResult {
  std::vector<Complex> eigenvalues;
  double rate = 0.0;       // smallest |Re lambda| among non-zero modes; 0 if none
  int zero_modes = 0;      // eigenvalues with |Re lambda| <= zero_tol
  double max_real_part = 0.0;
  bool dissipative = true;  // every Re lambda <= zero_tol
};

SpectrumResult convergence_rate(const HypothesisPair& pair, double zero_tol = 1e-10);

// Overlaps Tr(exp(L t) vec(rho01(0))) for a time-independent pair.
std::vector<Complex> propagate_two_sided_expm(const HypothesisPair& pair,
                                              std::span<const double> t_grid);

// Builds the hypothesis for a given (rabi, detuning).
using RabiDetuningBuilder = std::function<Hypothesis(double rabi, double detuning)>;

// Two-level atom with unit decay.
Hypothesis default_two_level_builder(double rabi, double detuning);

struct RateScan {
  double detuning = 0.0;
  std::vector<double> omegas;
  std::vector<double> rates;
  double argmax_omega = 0.0;      // parabolically refined
  double max_rate = 0.0;          // parabola value at argmax_omega
  double refinement_shift = 0.0;  // |argmax_omega - best grid omega|
};

// rates[i] is the convergence rate for detuning 0 versus `delta`, both driven
// with rabi omegas[i]. Points are evaluated in parallel.
RateScan scan_rate_over_rabi(double delta, std::span<const double> omega_grid,
                             const RabiDetuningBuilder& builder = default_two_level_builder);

// Vertex of the parabola through (x[i-1..i+1], y[i-1..i+1]).
struct ParabolaVertex {
  double x;
  double y;
};
ParabolaVertex parabolic_vertex(double x0, double y0, double x1, double y1, double x2, double y2);

}  // namespace qhypo
