#pragma once

// Time-domain propagation of the two-sided master equation
//
//   d/dt rho01 = -i (H0 rho01 - rho01 H1)
//              + sum_m [ c0_m rho01 c1_m^+ - 1/2 (c0_m^+ c0_m rho01 + rho01 c1_m^+ c1_m) ]
//
// whose trace is the overlap <psi1_SE(t)|psi0_SE(t)> of the joint system and
// environment states under the two hypotheses. rho01 is stored without the
// factor 1/2 that it carries as a block of the ancilla-system density matrix,
// so the overlap is Tr(rho01) directly. With identical hypotheses the same
// equation is the ordinary Lindblad equation.

#include "qhypo/model.hpp"
#include "qhypo/numerics.hpp"

#include <span>
#include <vector>

namespace qhypo {

// Left multiplications use `left`, right multiplications use `right`. The
// channel lists must already have equal length (see validate_pair).
class TwoSidedGenerator {
 public:
  TwoSidedGenerator(const Hypothesis& left, const Hypothesis& right);

  Eigen::Index dim() const { return dim_; }

  // out = L_t(rho); out may not alias rho.
  void apply(const ComplexMatrix& rho, double t, ComplexMatrix& out) const;
  ComplexMatrix apply(const ComplexMatrix& rho, double t) const;

 private:
  Eigen::Index dim_;
  TimeDependentHamiltonian h_left_;
  TimeDependentHamiltonian h_right_;
  bool static_;
  // Effective left/right generators with the Hamiltonians folded in when static:
  //   rho' = left_ rho + rho right_ + sum_m jump_left_[m] rho jump_right_dag_[m]
  ComplexMatrix left_static_;
  ComplexMatrix right_static_;
  ComplexMatrix half_k_left_;
  ComplexMatrix half_k_right_;
  std::vector<ComplexMatrix> jump_left_;
  std::vector<ComplexMatrix> jump_right_dag_;
};

struct TwoSidedState {
  ComplexMatrix rho01;
  double time = 0.0;
};

struct OverlapCurve {
  std::vector<double> times;
  std::vector<Complex> overlaps;  // Tr rho01(t)
  std::vector<double> pe_min;     // minimal error probability from the overlap
  std::vector<ComplexMatrix> states;
};

struct DensityTrajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
};

// Trace of rho01 for a (possibly mixed) initial system state. No error
// probability is attached: the minimal-error formula presumes pure joint states.
struct TwoSidedTraceCurve {
  std::vector<double> times;
  std::vector<Complex> traces;
};

ComplexMatrix two_sided_derivative(const HypothesisPair& pair, const ComplexMatrix& rho01,
                                   double t);

// Propagates rho01 from |psi_S(0)><psi_S(0)| over t_grid (which must start at 0).
OverlapCurve solve_two_sided(const HypothesisPair& pair, std::span<const double> t_grid,
                             const OdeSettings& settings = {});

TwoSidedTraceCurve solve_two_sided_trace(const Hypothesis& hyp0, const Hypothesis& hyp1,
                                         const ComplexMatrix& initial_rho,
                                         std::span<const double> t_grid,
                                         const OdeSettings& settings = {});

// Single-hypothesis Lindblad evolution of a density matrix, sampled at t_grid.
DensityTrajectory solve_lindblad(const Hypothesis& hyp, const ComplexMatrix& initial,
                                 std::span<const double> t_grid,
                                 const OdeSettings& settings = {});

// Loose enough for roundoff, tight enough to flag real violations.
inline constexpr double kOverlapBoundTol = 1e-8;
inline constexpr double kDensityTol = 1e-10;

}  // namespace qhypo
