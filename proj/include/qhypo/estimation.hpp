#pragma once

// Fisher information of a continuous parameter from finite differences of the
// joint-state overlap, and the resulting Cramer-Rao bound.

#include "qhypo/analytic.hpp"
#include "qhypo/model.hpp"
#include "qhypo/numerics.hpp"

#include <functional>

namespace qhypo {

// 1 - |f|^2 is O(h^2) ~ 1e-7, so overlaps need far tighter tolerances than
// the integrator defaults.
OdeSettings fisher_ode_settings();

struct ParametrizedScenario {
  std::function<Hypothesis(double theta)> builder;
  ComplexVector initial_state;
  double t = 0.0;
};

// (theta, theta') -> overlap of the joint states under the two parameter values.
using OverlapFunction = std::function<Complex(double theta, double theta_prime)>;

// Tr rho01(t) with hyp0 = builder(theta), hyp1 = builder(theta_prime). This is
// <psi(theta')|psi(theta)>; its modulus is symmetric in the two arguments.
Complex overlap_function(const ParametrizedScenario& scn, double theta, double theta_prime,
                         const OdeSettings& settings = fisher_ode_settings());

OverlapFunction make_overlap_function(const ParametrizedScenario& scn,
                                      const OdeSettings& settings = fisher_ode_settings());

// theta is the displacement rate g of one hypothesis; k and t come from `base`.
OverlapFunction make_gaussian_overlap_function(const GaussianScenario& base);

struct FisherResult {
  double theta = 0.0;
  double t = 0.0;
  double fisher = 0.0;
  double crb = 0.0;
  double step_h = 0.0;
  double richardson_error_estimate = 0.0;
};

// I(theta) from the fidelity second difference
//   I_h = 4 (1 - |f(theta - h/2, theta + h/2)|^2) / h^2,
// Richardson-extrapolated from steps h and h/2. Throws NumericalError when the
// two estimates differ by more than 10% of the result or when the estimate is
// negative beyond -1e-9 (small negatives are clamped to 0).
FisherResult fisher_information(const OverlapFunction& overlap, double theta, double t,
                                double h = 1e-3);

FisherResult fisher_information(const ParametrizedScenario& scn, double theta, double h = 1e-3,
                                const OdeSettings& settings = fisher_ode_settings());

// Debug cross-check using the mixed-derivative form
//   4 Re( d_theta d_theta' g - d_theta g * d_theta' g ) at theta = theta',
// with g(theta, theta') = <psi(theta)|psi(theta')> and central differences.
double fisher_mixed_stencil(const OverlapFunction& overlap, double theta, double h = 1e-3);

// Variance bound 1 / I, +infinity when I = 0.
double cramer_rao(const FisherResult& fr);

inline constexpr double kRichardsonNoiseFraction = 0.1;

}  // namespace qhypo
