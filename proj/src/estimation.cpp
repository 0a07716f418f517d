#include "qhypo/estimation.hpp"

#include "qhypo/errors.hpp"
#include "qhypo/twosided.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace qhypo {

OdeSettings fisher_ode_settings() {
  OdeSettings s;
  s.rel_tol = 1e-13;
  s.abs_tol = 1e-15;
  return s;
}

namespace {

// Identical generators give identical joint states, so the overlap is exactly
// one. Checked explicitly so trace drift of the solver cannot masquerade as
// information. Drive terms are not compared; such pairs are always integrated.
bool same_static_hypothesis(const Hypothesis& a, const Hypothesis& b) {
  if (!a.hamiltonian.drive_terms.empty() || !b.hamiltonian.drive_terms.empty()) return false;
  if (a.channels.size() != b.channels.size()) return false;
  if (a.hamiltonian.constant_part != b.hamiltonian.constant_part) return false;
  for (std::size_t m = 0; m < a.channels.size(); ++m)
    if (a.channels[m].op != b.channels[m].op) return false;
  return true;
}

}  // namespace

Complex overlap_function(const ParametrizedScenario& scn, double theta, double theta_prime,
                         const OdeSettings& settings) {
  if (!scn.builder) throw ValidationError("overlap_function: scenario has no builder");
  if (!(scn.t >= 0.0)) throw ValidationError("overlap_function: t must be >= 0");
  if (scn.t == 0.0) return 1.0;
  const HypothesisPair pair{scn.builder(theta), scn.builder(theta_prime), scn.initial_state};
  if (same_static_hypothesis(pair.hyp0, pair.hyp1)) {
    validate_pair(pair);
    return 1.0;
  }
  const std::array<double, 2> grid{0.0, scn.t};
  return solve_two_sided(pair, grid, settings).overlaps.back();
}

OverlapFunction make_overlap_function(const ParametrizedScenario& scn,
                                      const OdeSettings& settings) {
  return [scn, settings](double a, double b) { return overlap_function(scn, a, b, settings); };
}

OverlapFunction make_gaussian_overlap_function(const GaussianScenario& base) {
  return [base](double a, double b) {
    GaussianScenario s = base;
    s.g0 = a;
    s.g1 = b;
    return Complex(gaussian_overlap(s));
  };
}

namespace {

double fidelity_difference(const OverlapFunction& overlap, double theta, double h) {
  const double fid = std::norm(overlap(theta - 0.5 * h, theta + 0.5 * h));
  return 4.0 * (1.0 - fid) / (h * h);
}

}  // namespace

FisherResult fisher_information(const OverlapFunction& overlap, double theta, double t,
                                double h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw ValidationError("fisher_information: step h must be > 0");
  const double coarse = fidelity_difference(overlap, theta, h);
  const double fine = fidelity_difference(overlap, theta, 0.5 * h);
  double fisher = (4.0 * fine - coarse) / 3.0;

  FisherResult r;
  r.theta = theta;
  r.t = t;
  r.step_h = h;
  r.richardson_error_estimate = std::abs(fine - coarse);
  if (fisher < -1e-9)
    throw NumericalError("fisher_information: negative estimate " + std::to_string(fisher));
  if (fisher < 0.0) fisher = 0.0;
  if (r.richardson_error_estimate > kRichardsonNoiseFraction * fisher &&
      r.richardson_error_estimate > 1e-9)
    throw NumericalError("fisher_information: estimate dominated by integrator noise "
                         "(Richardson difference " +
                         std::to_string(r.richardson_error_estimate) + ", estimate " +
                         std::to_string(fisher) + ")");
  r.fisher = fisher;
  r.crb = cramer_rao(r);
  return r;
}

FisherResult fisher_information(const ParametrizedScenario& scn, double theta, double h,
                                const OdeSettings& settings) {
  return fisher_information(make_overlap_function(scn, settings), theta, scn.t, h);
}

double fisher_mixed_stencil(const OverlapFunction& overlap, double theta, double h) {
  if (!(h > 0.0)) throw ValidationError("fisher_mixed_stencil: step h must be > 0");
  // overlap(a, b) = <psi(b)|psi(a)>, so g(a, b) = overlap(b, a).
  auto g = [&](double a, double b) { return overlap(b, a); };
  const double p = theta + h, m = theta - h;
  const Complex mixed = (g(p, p) - g(p, m) - g(m, p) + g(m, m)) / (4.0 * h * h);
  const Complex d_first = (g(p, theta) - g(m, theta)) / (2.0 * h);
  const Complex d_second = (g(theta, p) - g(theta, m)) / (2.0 * h);
  return 4.0 * (mixed - d_first * d_second).real();
}

double cramer_rao(const FisherResult& fr) {
  return fr.fisher > 0.0 ? 1.0 / fr.fisher : std::numeric_limits<double>::infinity();
}

}  // namespace qhypo
