#include "qhypo/twosided.hpp"

#include "qhypo/bounds.hpp"
#include "qhypo/errors.hpp"

#include <cmath>
#include <string>

namespace qhypo {

TwoSidedGenerator::TwoSidedGenerator(const Hypothesis& left, const Hypothesis& right)
    : dim_(left.dim()),
      h_left_(left.hamiltonian),
      h_right_(right.hamiltonian),
      static_(left.hamiltonian.is_time_independent() && right.hamiltonian.is_time_independent()) {
  if (right.dim() != dim_) throw ValidationError("two-sided generator: dimension mismatch");
  if (left.channels.size() != right.channels.size())
    throw ValidationError("two-sided generator: channel lists differ in length");

  half_k_left_ = ComplexMatrix::Zero(dim_, dim_);
  half_k_right_ = ComplexMatrix::Zero(dim_, dim_);
  for (std::size_t m = 0; m < left.channels.size(); ++m) {
    const ComplexMatrix& c0 = left.channels[m].op;
    const ComplexMatrix& c1 = right.channels[m].op;
    if (c0.rows() != dim_ || c1.rows() != dim_)
      throw ValidationError("two-sided generator: channel dimension mismatch");
    half_k_left_ += 0.5 * c0.adjoint() * c0;
    half_k_right_ += 0.5 * c1.adjoint() * c1;
    if (c0.isZero(0.0) || c1.isZero(0.0)) continue;  // jump term vanishes
    jump_left_.push_back(c0);
    jump_right_dag_.push_back(c1.adjoint());
  }
  if (static_) {
    left_static_ = -kI * h_left_.static_matrix() - half_k_left_;
    right_static_ = kI * h_right_.static_matrix() - half_k_right_;
  }
}

void TwoSidedGenerator::apply(const ComplexMatrix& rho, double t, ComplexMatrix& out) const {
  if (static_) {
    out.noalias() = left_static_ * rho;
    out.noalias() += rho * right_static_;
  } else {
    const ComplexMatrix left = -kI * h_left_.at(t) - half_k_left_;
    const ComplexMatrix right = kI * h_right_.at(t) - half_k_right_;
    out.noalias() = left * rho;
    out.noalias() += rho * right;
  }
  for (std::size_t m = 0; m < jump_left_.size(); ++m)
    out.noalias() += jump_left_[m] * rho * jump_right_dag_[m];
}

ComplexMatrix TwoSidedGenerator::apply(const ComplexMatrix& rho, double t) const {
  ComplexMatrix out(dim_, dim_);
  apply(rho, t, out);
  return out;
}

ComplexMatrix two_sided_derivative(const HypothesisPair& pair, const ComplexMatrix& rho01,
                                   double t) {
  const HypothesisPair valid = validate_pair(pair);
  if (rho01.rows() != valid.dim() || rho01.cols() != valid.dim())
    throw ValidationError("two_sided_derivative: rho01 dimension mismatch");
  return TwoSidedGenerator(valid.hyp0, valid.hyp1).apply(rho01, t);
}

namespace {

std::vector<ComplexMatrix> propagate(const TwoSidedGenerator& gen, const ComplexMatrix& rho0,
                                     std::span<const double> t_grid,
                                     const OdeSettings& settings) {
  const Eigen::Index d = gen.dim();
  Derivative f = [&gen, d](double t, const ComplexVector& y, ComplexVector& dy) {
    const Eigen::Map<const ComplexMatrix> rho(y.data(), d, d);
    ComplexMatrix out(d, d);
    gen.apply(rho, t, out);
    dy = Eigen::Map<const ComplexVector>(out.data(), out.size());
  };
  const auto ys = integrate_adaptive(f, vec(rho0), t_grid, settings);
  std::vector<ComplexMatrix> states;
  states.reserve(ys.size());
  for (const auto& y : ys) states.push_back(unvec(y, d));
  return states;
}

void require_grid_from_zero(std::span<const double> t_grid, const char* who) {
  if (t_grid.empty() || t_grid.front() != 0.0)
    throw ValidationError(std::string(who) + ": t_grid must start at 0");
}

}  // namespace

OverlapCurve solve_two_sided(const HypothesisPair& pair, std::span<const double> t_grid,
                             const OdeSettings& settings) {
  require_grid_from_zero(t_grid, "solve_two_sided");
  const HypothesisPair valid = validate_pair(pair);
  const TwoSidedGenerator gen(valid.hyp0, valid.hyp1);
  const ComplexMatrix rho0 = valid.initial_state * valid.initial_state.adjoint();

  OverlapCurve curve;
  curve.times.assign(t_grid.begin(), t_grid.end());
  curve.states = propagate(gen, rho0, t_grid, settings);
  curve.overlaps.reserve(curve.states.size());
  curve.pe_min.reserve(curve.states.size());
  for (std::size_t i = 0; i < curve.states.size(); ++i) {
    const Complex alpha = curve.states[i].trace();
    if (std::abs(alpha) > 1.0 + kOverlapBoundTol)
      throw NumericalError("solve_two_sided: |overlap| = " + std::to_string(std::abs(alpha)) +
                           " exceeds 1 at t = " + std::to_string(curve.times[i]));
    curve.overlaps.push_back(alpha);
    curve.pe_min.push_back(error_from_overlap(alpha));
  }
  return curve;
}

TwoSidedTraceCurve solve_two_sided_trace(const Hypothesis& hyp0, const Hypothesis& hyp1,
                                         const ComplexMatrix& initial_rho,
                                         std::span<const double> t_grid,
                                         const OdeSettings& settings) {
  require_grid_from_zero(t_grid, "solve_two_sided_trace");
  validate_density_matrix(initial_rho, kDensityTol, "solve_two_sided_trace");
  // Reuse pair validation (padding, Hermiticity) with a placeholder pure state.
  ComplexVector probe = ComplexVector::Zero(initial_rho.rows());
  probe(0) = 1.0;
  const HypothesisPair valid = validate_pair({hyp0, hyp1, probe});
  const TwoSidedGenerator gen(valid.hyp0, valid.hyp1);

  TwoSidedTraceCurve curve;
  curve.times.assign(t_grid.begin(), t_grid.end());
  for (const auto& s : propagate(gen, initial_rho, t_grid, settings))
    curve.traces.push_back(s.trace());
  return curve;
}

DensityTrajectory solve_lindblad(const Hypothesis& hyp, const ComplexMatrix& initial,
                                 std::span<const double> t_grid, const OdeSettings& settings) {
  validate_density_matrix(initial, kDensityTol, "solve_lindblad");
  validate_hypothesis(hyp, initial.rows());
  const TwoSidedGenerator gen(hyp, hyp);

  DensityTrajectory traj;
  traj.times.assign(t_grid.begin(), t_grid.end());
  traj.states = propagate(gen, initial, t_grid, settings);
  return traj;
}

}  // namespace qhypo
