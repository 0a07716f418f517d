#include "qhypo/bounds.hpp"

#include "qhypo/errors.hpp"
#include "qhypo/model.hpp"
#include "qhypo/twosided.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qhypo {

double error_from_overlap(Complex alpha) {
  double mag = std::abs(alpha);
  if (!std::isfinite(mag)) throw ValidationError("error_from_overlap: non-finite overlap");
  if (mag > 1.0 + kOverlapClampTol)
    throw ValidationError("error_from_overlap: |alpha| = " + std::to_string(mag) + " > 1");
  mag = std::min(mag, 1.0);
  return 0.5 * (1.0 - std::sqrt(1.0 - mag * mag));
}

double helstrom_error(const ComplexMatrix& rho0, const ComplexMatrix& rho1) {
  if (rho0.rows() != rho1.rows())
    throw ValidationError("helstrom_error: density matrices differ in dimension");
  validate_density_matrix(rho0, kHelstromInputTol, "helstrom_error(rho0)");
  validate_density_matrix(rho1, kHelstromInputTol, "helstrom_error(rho1)");
  const auto eig = eig_hermitian(0.5 * (rho1 - rho0), kHelstromInputTol);
  double pe = 0.5;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) < 0.0) pe += eig.values(i);
  return std::clamp(pe, 0.0, 0.5);
}

NoJumpState no_jump_evolution(double omega, double kappa, std::span<const double> t_grid,
                              const OdeSettings& settings) {
  if (!(kappa >= 0.0)) throw ValidationError("no_jump_evolution: kappa must be >= 0");
  ComplexMatrix h_nh(2, 2);
  h_nh << 0.0, 0.5 * omega,
          0.5 * omega, Complex(0.0, -0.5 * kappa);
  const ComplexMatrix gen = -kI * h_nh;
  Derivative f = [&gen](double, const ComplexVector& y, ComplexVector& dy) { dy.noalias() = gen * y; };

  const auto ys = integrate_adaptive(f, ground_state(), t_grid, settings);
  NoJumpState s;
  s.times.assign(t_grid.begin(), t_grid.end());
  s.a.reserve(ys.size());
  s.b.reserve(ys.size());
  for (const auto& y : ys) {
    s.a.push_back(y(0));
    s.b.push_back(y(1));
  }
  return s;
}

CountingCurves counting_error_curves(double omega1, double kappa, std::span<const double> t_grid,
                                     const OdeSettings& settings) {
  const NoJumpState nj = no_jump_evolution(omega1, kappa, t_grid, settings);
  CountingCurves c;
  c.pe_counting.reserve(nj.times.size());
  c.pe_counting_atom.reserve(nj.times.size());
  for (std::size_t i = 0; i < nj.times.size(); ++i) {
    c.pe_counting.push_back(0.5 * nj.no_jump_probability(i));
    c.pe_counting_atom.push_back(0.5 * std::norm(nj.a[i]));
  }
  return c;
}

Fig2Bundle fig2_bundle(double omega0, double omega1, double kappa,
                       std::span<const double> t_grid, const OdeSettings& settings) {
  if (omega0 != 0.0)
    throw ValidationError("fig2_bundle: counting curves are only defined for omega0 = 0");
  const TwoLevelParams p0{omega0, 0.0, kappa};
  const TwoLevelParams p1{omega1, 0.0, kappa};
  const HypothesisPair pair = two_level_pair(p0, p1);

  Fig2Bundle out;
  out.times.assign(t_grid.begin(), t_grid.end());
  out.pe_min = solve_two_sided(pair, t_grid, settings).pe_min;

  const CountingCurves counting = counting_error_curves(omega1, kappa, t_grid, settings);
  out.pe_counting = counting.pe_counting;
  out.pe_counting_atom = counting.pe_counting_atom;

  const ComplexMatrix rho_g = ground_state() * ground_state().adjoint();
  const auto traj0 = solve_lindblad(pair.hyp0, rho_g, t_grid, settings);
  const auto traj1 = solve_lindblad(pair.hyp1, rho_g, t_grid, settings);
  out.pe_helstrom.reserve(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    out.pe_helstrom.push_back(helstrom_error(traj0.states[i], traj1.states[i]));
  return out;
}

}  // namespace qhypo
