#pragma once

// Hypotheses about an open quantum system: a (possibly driven) Hamiltonian
// plus Lindblad channels. Units: hbar = 1, rates in units of the decay rate.

#include "qhypo/numerics.hpp"

#include <string>
#include <variant>
#include <vector>

namespace qhypo {

struct ConstantCoefficient {
  double value = 1.0;
};

// value[i] applies on [breaks[i], breaks[i+1]); the last value holds for all
// later times and the first for earlier ones. breaks.size() == values.size().
struct PiecewiseConstantCoefficient {
  std::vector<double> breaks;
  std::vector<double> values;
};

// amplitude * sin(frequency * t + phase)
struct SinusoidCoefficient {
  double amplitude = 1.0;
  double frequency = 0.0;
  double phase = 0.0;
};

using Coefficient =
    std::variant<ConstantCoefficient, PiecewiseConstantCoefficient, SinusoidCoefficient>;

double evaluate(const Coefficient& c, double t);
bool is_constant(const Coefficient& c);

struct DriveTerm {
  Coefficient coefficient;
  ComplexMatrix op;
};

// H(t) = constant_part + sum_j f_j(t) H_j
struct TimeDependentHamiltonian {
  ComplexMatrix constant_part;
  std::vector<DriveTerm> drive_terms;

  Eigen::Index dim() const { return constant_part.rows(); }
  ComplexMatrix at(double t) const;
  bool is_time_independent() const;
  // Only valid when is_time_independent().
  ComplexMatrix static_matrix() const;
};

// Rates are folded into the operator: c = sqrt(kappa) L.
struct LindbladChannel {
  ComplexMatrix op;
};

struct Hypothesis {
  std::string label;
  TimeDependentHamiltonian hamiltonian;
  std::vector<LindbladChannel> channels;

  Eigen::Index dim() const { return hamiltonian.dim(); }
};

struct HypothesisPair {
  Hypothesis hyp0;
  Hypothesis hyp1;
  ComplexVector initial_state;  // pure system state psi_S(0)

  Eigen::Index dim() const { return initial_state.size(); }
  bool is_time_independent() const {
    return hyp0.hamiltonian.is_time_independent() && hyp1.hamiltonian.is_time_independent();
  }
};

struct TwoLevelParams {
  double rabi = 0.0;
  double detuning = 0.0;
  double kappa = 1.0;
};

// Basis (|g>, |e>). H = (rabi/2) sigma_x + detuning |e><e|,
// one channel sqrt(kappa) |g><e|.
Hypothesis build_two_level(const TwoLevelParams& p);

ComplexVector ground_state();   // |g> = (1, 0)
ComplexVector excited_state();  // |e> = (0, 1)

HypothesisPair two_level_pair(const TwoLevelParams& p0, const TwoLevelParams& p1);

// Checks every HypothesisPair invariant and returns a copy whose channel lists
// are padded with zero operators to equal length. Throws ValidationError.
HypothesisPair validate_pair(const HypothesisPair& pair);

// Checks a single hypothesis (square, equal dimensions, Hermitian, finite).
void validate_hypothesis(const Hypothesis& hyp, Eigen::Index dim);

// Hermitian, unit trace, positive semidefinite within tol.
void validate_density_matrix(const ComplexMatrix& rho, double tol, const char* who);

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kNormTol = 1e-12;

}  // namespace qhypo
