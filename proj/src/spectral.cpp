#include "qhypo/spectral.hpp"

#include "qhypo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qhypo {

ComplexMatrix vectorize_two_sided(const HypothesisPair& pair) {
  const HypothesisPair valid = validate_pair(pair);
  if (!valid.is_time_independent())
    throw ValidationError("vectorize_two_sided: hypotheses must be time independent");
  const Eigen::Index d = valid.dim();
  const ComplexMatrix eye = identity(d);
  const ComplexMatrix h0 = valid.hyp0.hamiltonian.static_matrix();
  const ComplexMatrix h1 = valid.hyp1.hamiltonian.static_matrix();

  ComplexMatrix l = -kI * (kron(eye, h0) - kron(h1.transpose(), eye));
  for (std::size_t m = 0; m < valid.hyp0.channels.size(); ++m) {
    const ComplexMatrix& c0 = valid.hyp0.channels[m].op;
    const ComplexMatrix& c1 = valid.hyp1.channels[m].op;
    const ComplexMatrix k0 = c0.adjoint() * c0;
    const ComplexMatrix k1 = c1.adjoint() * c1;
    l += kron(c1.conjugate(), c0) - 0.5 * (kron(eye, k0) + kron(k1.transpose(), eye));
  }
  return l;
}

SpectrumResult convergence_rate(const HypothesisPair& pair, double zero_tol) {
  SpectrumResult r;
  r.eigenvalues = eig_general(vectorize_two_sided(pair));
  double rate = std::numeric_limits<double>::infinity();
  r.max_real_part = -std::numeric_limits<double>::infinity();
  for (const Complex& lam : r.eigenvalues) {
    const double re = lam.real();
    r.max_real_part = std::max(r.max_real_part, re);
    if (std::abs(re) <= zero_tol) {
      ++r.zero_modes;
      continue;
    }
    rate = std::min(rate, std::abs(re));
  }
  r.rate = std::isfinite(rate) ? rate : 0.0;
  r.dissipative = r.max_real_part <= zero_tol;
  return r;
}

std::vector<Complex> propagate_two_sided_expm(const HypothesisPair& pair,
                                              std::span<const double> t_grid) {
  const HypothesisPair valid = validate_pair(pair);
  const ComplexMatrix l = vectorize_two_sided(valid);
  const ComplexVector v0 = vec(valid.initial_state * valid.initial_state.adjoint());
  std::vector<Complex> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back(unvec(expm(l * t) * v0, valid.dim()).trace());
  return out;
}

Hypothesis default_two_level_builder(double rabi, double detuning) {
  return build_two_level({rabi, detuning, 1.0});
}

ParabolaVertex parabolic_vertex(double x0, double y0, double x1, double y1, double x2,
                                double y2) {
  const double d10 = x1 - x0;
  const double d12 = x1 - x2;
  const double num = d10 * d10 * (y1 - y2) - d12 * d12 * (y1 - y0);
  const double den = d10 * (y1 - y2) - d12 * (y1 - y0);
  if (den == 0.0) return {x1, y1};
  const double xv = x1 - 0.5 * num / den;
  // Lagrange form evaluated at the vertex.
  const double l0 = (xv - x1) * (xv - x2) / ((x0 - x1) * (x0 - x2));
  const double l1 = (xv - x0) * (xv - x2) / ((x1 - x0) * (x1 - x2));
  const double l2 = (xv - x0) * (xv - x1) / ((x2 - x0) * (x2 - x1));
  return {xv, y0 * l0 + y1 * l1 + y2 * l2};
}

RateScan scan_rate_over_rabi(double delta, std::span<const double> omega_grid,
                             const RabiDetuningBuilder& builder) {
  if (omega_grid.empty()) throw ValidationError("scan_rate_over_rabi: empty omega grid");
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    if (!(omega_grid[i] > 0.0))
      throw ValidationError("scan_rate_over_rabi: omega grid must be positive");
    if (i > 0 && !(omega_grid[i] > omega_grid[i - 1]))
      throw ValidationError("scan_rate_over_rabi: omega grid must be strictly increasing");
  }

  RateScan scan;
  scan.detuning = delta;
  scan.omegas.assign(omega_grid.begin(), omega_grid.end());
  scan.rates.assign(omega_grid.size(), 0.0);
  parallel_for(omega_grid.size(), [&](std::size_t i) {
    Hypothesis h0 = builder(omega_grid[i], 0.0);
    Hypothesis h1 = builder(omega_grid[i], delta);
    ComplexVector psi = ComplexVector::Zero(h0.dim());
    psi(0) = 1.0;
    scan.rates[i] = convergence_rate({std::move(h0), std::move(h1), psi}).rate;
  });

  const auto best = static_cast<std::size_t>(
      std::max_element(scan.rates.begin(), scan.rates.end()) - scan.rates.begin());
  scan.argmax_omega = scan.omegas[best];
  scan.max_rate = scan.rates[best];
  if (best > 0 && best + 1 < scan.omegas.size()) {
    const auto v = parabolic_vertex(scan.omegas[best - 1], scan.rates[best - 1], scan.omegas[best],
                                    scan.rates[best], scan.omegas[best + 1], scan.rates[best + 1]);
    // Keep the refinement inside the bracketing interval.
    if (v.x >= scan.omegas[best - 1] && v.x <= scan.omegas[best + 1]) {
      scan.argmax_omega = v.x;
      scan.max_rate = std::max(v.y, scan.rates[best]);
    }
  }
  scan.refinement_shift = std::abs(scan.argmax_omega - scan.omegas[best]);
  return scan;
}

}  // namespace qhypo
