#include "qhypo/analytic.hpp"
#include "qhypo/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace qhypo;

TEST_CASE("closed-form Gaussian overlap") {
  CHECK(gaussian_overlap({1.0, 0.0, 1.0, 1.0}) == doctest::Approx(std::exp(-7.0 / 12.0)));
  CHECK(gaussian_overlap({1.0, 0.0, 1.0, 1.0}) == doctest::Approx(0.558035).epsilon(1e-6));
  CHECK(gaussian_overlap({0.3, 0.3, 2.0, 5.0}) == 1.0);
  CHECK(gaussian_overlap({1.0, 0.0, 1.0, 0.0}) == 1.0);
  CHECK(gaussian_overlap({2.0, 0.0, 0.0, 1.0}) == doctest::Approx(std::exp(-1.0)));
  CHECK(gaussian_overlap({0.0, 1.0, 1.0, 1.0}) == gaussian_overlap({1.0, 0.0, 1.0, 1.0}));
  CHECK_THROWS_AS(gaussian_overlap({1.0, 0.0, -1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(gaussian_overlap({1.0, 0.0, 1.0, -1.0}), ValidationError);
}

TEST_CASE("grid oracle reproduces the closed form") {
  for (double dg : {0.5, 1.0, 2.0})
    for (double k : {0.0, 0.5, 1.0})
      for (double t : {0.5, 1.0, 2.0}) {
        const GaussianScenario s{dg, 0.0, k, t};
        const double exact = gaussian_overlap(s);
        const double grid = gaussian_grid_oracle(s);
        INFO("dg=" << dg << " k=" << k << " t=" << t);
        CHECK(std::abs(grid - exact) <= 1e-3 * exact);
      }
}

TEST_CASE("grid oracle depends only on the field difference") {
  const double a = gaussian_grid_oracle({1.3, 0.3, 0.5, 1.0});
  const double b = gaussian_grid_oracle({0.3, 1.3, 0.5, 1.0});
  const double c = gaussian_grid_oracle({1.0, 0.0, 0.5, 1.0});
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
  CHECK(a == doctest::Approx(c).epsilon(1e-9));
}

TEST_CASE("log-overlap is quadratic plus cubic in time") {
  // Fit log Tr = a t^2 + b t^3 on oracle values; expect a = -dg^2/4, b = -dg^2 k/3.
  const double dg = 1.0, k = 0.7;
  double s44 = 0, s45 = 0, s55 = 0, s2y = 0, s3y = 0;
  for (int i = 1; i <= 8; ++i) {
    const double t = 0.25 * i;
    const double y = std::log(gaussian_grid_oracle({dg, 0.0, k, t}, {-12.0, 12.0, 4096}));
    const double t2 = t * t, t3 = t2 * t;
    s44 += t2 * t2;
    s45 += t2 * t3;
    s55 += t3 * t3;
    s2y += t2 * y;
    s3y += t3 * y;
  }
  const double det = s44 * s55 - s45 * s45;
  const double a = (s2y * s55 - s3y * s45) / det;
  const double b = (s44 * s3y - s45 * s2y) / det;
  CHECK(std::abs(a + dg * dg / 4) < 1e-6);
  CHECK(std::abs(b + dg * dg * k / 3) < 1e-6);
}

TEST_CASE("grid oracle converges under refinement") {
  const GaussianScenario s{1.0, 0.0, 1.0, 1.0};
  const double exact = gaussian_overlap(s);
  std::vector<double> errors;
  for (int n : {65, 129, 257, 513}) errors.push_back(std::abs(gaussian_grid_oracle(s, {-12.0, 12.0, n}) - exact));
  for (std::size_t i = 1; i < errors.size(); ++i) {
    INFO("refinement " << i);
    CHECK(errors[i - 1] / errors[i] >= 3.0);
  }
}

TEST_CASE("grid oracle preconditions") {
  const GaussianScenario s{1.0, 0.0, 1.0, 1.0};
  CHECK_THROWS_AS(gaussian_grid_oracle(s, {-3.0, 3.0, 1024}), ValidationError);
  CHECK_THROWS_AS(gaussian_grid_oracle(s, {-12.0, 12.0, 32}), ValidationError);
  CHECK_THROWS_AS(gaussian_grid_oracle(s, {1.0, -1.0, 1024}), ValidationError);
  // a displacement of dg t = 30 leaves the default window
  CHECK_THROWS_AS(gaussian_grid_oracle({10.0, 0.0, 0.0, 3.0}), ValidationError);
}
