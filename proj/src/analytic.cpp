#include "qhypo/analytic.hpp"

#include "qhypo/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qhypo {

namespace {

void validate(const GaussianScenario& s) {
  if (!(s.k >= 0.0)) throw ValidationError("gaussian scenario: k must be >= 0");
  if (!(s.t >= 0.0)) throw ValidationError("gaussian scenario: t must be >= 0");
}

double vacuum(double x) { return std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x); }

constexpr double kTailTol = 1e-12;

}  // namespace

double gaussian_overlap(const GaussianScenario& s) {
  validate(s);
  const double dg2 = (s.g0 - s.g1) * (s.g0 - s.g1);
  return std::exp(-dg2 * s.t * s.t / 4.0) * std::exp(-dg2 * s.k * s.t * s.t * s.t / 3.0);
}

double gaussian_grid_oracle(const GaussianScenario& s, const GridOracleConfig& cfg) {
  validate(s);
  if (!(cfg.x_max > cfg.x_min)) throw ValidationError("grid oracle: x_max must exceed x_min");
  if (cfg.n_points < 64) throw ValidationError("grid oracle: n_points must be >= 64");

  const int n = cfg.n_points;
  const double h = (cfg.x_max - cfg.x_min) / (n - 1);
  const double dg = s.g0 - s.g1;
  const double shift = dg * s.t;
  const double t = s.t;

  // Gaussians must vanish at the grid edges, and the shifted diagonal must
  // leave enough room for the overlap integrand.
  const double edge = std::max(vacuum(cfg.x_min), vacuum(cfg.x_max));
  const double lo = std::max(cfg.x_min, cfg.x_min - shift);
  const double hi = std::min(cfg.x_max, cfg.x_max - shift);
  const double envelope = hi > lo ? std::max(vacuum(lo) * vacuum(lo + shift),
                                             vacuum(hi) * vacuum(hi + shift))
                                  : 1.0;
  if (edge >= kTailTol || envelope >= kTailTol)
    throw ValidationError("grid oracle: grid too narrow for displacement " +
                          std::to_string(shift) + " (tails exceed 1e-12)");

  Eigen::VectorXd x(n), psi(n);
  for (int i = 0; i < n; ++i) {
    x(i) = cfg.x_min + h * i;
    psi(i) = vacuum(x(i));
  }
  // sigma(x_i, x_j, t); real because both kernels are real.
  Eigen::MatrixXd sigma(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double u = x(i) - x(j);
      const double exposure = u * u * t - u * dg * t * t + dg * dg * t * t * t / 3.0;
      sigma(i, j) = psi(i) * psi(j) * std::exp(-s.k * exposure);
    }
  }

  // Tr(D(g0 t) sigma D(-g1 t)) = integral dx sigma(x + g0 t, x + g1 t)
  //                            = integral dy sigma(y + shift, y).
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    const double p = x(j) + shift;
    if (p < cfg.x_min || p > cfg.x_max) continue;
    const double f = (p - cfg.x_min) / h;
    const int i0 = std::clamp(static_cast<int>(std::floor(f)) - 1, 0, n - 4);
    double value = 0.0;
    for (int a = i0; a < i0 + 4; ++a) {
      double weight = 1.0;
      for (int b = i0; b < i0 + 4; ++b)
        if (b != a) weight *= (f - b) / static_cast<double>(a - b);
      value += weight * sigma(a, j);
    }
    const double trap = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    total += trap * value;
  }
  return total * h;
}

}  // namespace qhypo
