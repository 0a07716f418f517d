#pragma once

// Gaussian collective-spin probing model. Two candidate fields displace a
// vacuum-like Gaussian at rates g0 and g1 (Hamiltonians g_i p) while a probe
// term -k[x,[x,rho]] acts. Quadratures follow x = (a + a^+)/sqrt(2), so the
// vacuum has <x^2> = 1/2.

namespace qhypo {

struct GaussianScenario {
  double g0 = 0.0;
  double g1 = 0.0;
  double k = 0.0;  // probe strength
  double t = 0.0;
};

// Closed form Tr rho01(t) = exp(-dg^2 t^2 / 4) * exp(-dg^2 k t^3 / 3), dg = g0 - g1.
double gaussian_overlap(const GaussianScenario& s);

struct GridOracleConfig {
  double x_min = -12.0;
  double x_max = 12.0;
  int n_points = 1024;
};

// Independent evaluation on an (x, x') grid. sigma(x, x', t) is the vacuum
// kernel psi0(x) psi0(x') times exp(-k integral_0^t (x - x' - dg s)^2 ds),
// which is integrated in closed form per grid pair. The trace of
// D(g0 t) sigma D(-g1 t) then reads sigma along the diagonal shifted by dg t
// in x, which is sampled off-grid with 4-point Lagrange interpolation and
// summed with the trapezoid rule. Throws ValidationError if the Gaussians are
// not contained in the grid (edge tails must stay below 1e-12).
double gaussian_grid_oracle(const GaussianScenario& s, const GridOracleConfig& cfg = {});

}  // namespace qhypo
