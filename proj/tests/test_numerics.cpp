#include "qhypo/errors.hpp"
#include "qhypo/numerics.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace qhypo;
using namespace qhypo::testing;

namespace {

ComplexMatrix diag(std::initializer_list<Complex> d) {
  ComplexVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (Complex c : d) v(i++) = c;
  return v.asDiagonal();
}

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

bool contains_value(const std::vector<Complex>& vals, Complex target, double tol) {
  return std::any_of(vals.begin(), vals.end(), [&](Complex v) { return std::abs(v - target) < tol; });
}

}  // namespace

TEST_CASE("kron") {
  CHECK(max_abs(kron(identity(2), identity(2)) - identity(4)) == 0.0);
  CHECK(max_abs(kron(diag({2, 3}), identity(2)) - diag({2, 2, 3, 3})) == 0.0);

  // [[0,1],[0,0]] kron [[0,0],[1,0]]: only block (0,1) is non-zero and it
  // holds a 1 at its (1,0) entry, i.e. global (1, 2).
  const ComplexMatrix k = kron(mat2(0, 1, 0, 0), mat2(0, 0, 1, 0));
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(1, 2) = 1.0;
  CHECK(max_abs(k - expected) == 0.0);

  const ComplexMatrix r = kron(ComplexMatrix::Ones(2, 3), ComplexMatrix::Ones(3, 1));
  CHECK(r.rows() == 6);
  CHECK(r.cols() == 3);
}

TEST_CASE("column-stacking vec identity") {
  std::mt19937_64 rng(1);
  const ComplexMatrix a = random_matrix(rng, 3, 3);
  const ComplexMatrix x = random_matrix(rng, 3, 3);
  const ComplexMatrix b = random_matrix(rng, 3, 3);
  CHECK(max_abs(vec(a * x * b) - kron(b.transpose(), a) * vec(x)) < 1e-12);
  CHECK(max_abs(unvec(vec(x), 3) - x) == 0.0);
  CHECK_THROWS_AS(unvec(vec(x), 4), ValidationError);
}

TEST_CASE("expm examples") {
  CHECK(max_abs(expm(ComplexMatrix::Zero(3, 3)) - identity(3)) < 1e-15);
  CHECK(max_abs(expm(diag({Complex(0, std::numbers::pi), 0})) - diag({-1, 1})) < 1e-14);
  CHECK(max_abs(expm(mat2(0, 1, 0, 0)) - mat2(1, 1, 0, 1)) < 1e-15);
  CHECK_THROWS_AS(expm(ComplexMatrix::Zero(2, 3)), ValidationError);
}

TEST_CASE("expm(A) expm(-A) = I for random A with norm <= 10") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index d = 2 + trial % 5;
    ComplexMatrix a = random_matrix(rng, d, d);
    a *= (1.0 + 9.0 * trial / 24.0) / a.norm();
    CHECK(max_abs(expm(a) * expm(-a) - identity(d)) < 1e-10);
  }
}

TEST_CASE("expm relative accuracy up to norm 100") {
  // Skew-Hermitian generators have a closed form through the Hermitian
  // eigendecomposition, independent of the Pade path.
  std::mt19937_64 rng(11);
  for (double scale : {0.1, 1.0, 10.0, 100.0}) {
    ComplexMatrix h = random_hermitian(rng, 4);
    h *= scale / h.norm();
    const auto eig = eig_hermitian(h);
    ComplexVector phases(4);
    for (int i = 0; i < 4; ++i) phases(i) = std::exp(kI * eig.values(i));
    const ComplexMatrix exact = eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
    const ComplexMatrix approx = expm(kI * h);
    CHECK((approx - exact).norm() / exact.norm() <= 1e-12);
  }
}

TEST_CASE("expm agrees with eigendecomposition cross-check") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a = random_matrix(rng, 4, 4);
    CHECK(max_abs(expm(a) - expm_by_eigendecomposition(a)) < 1e-10 * expm(a).norm());
  }
}

TEST_CASE("eig_general examples") {
  auto ev = eig_general(diag({1, Complex(0, 2)}));
  CHECK(ev.size() == 2);
  CHECK(contains_value(ev, 1.0, 1e-14));
  CHECK(contains_value(ev, Complex(0, 2), 1e-14));

  ev = eig_general(identity(3));
  CHECK(std::all_of(ev.begin(), ev.end(), [](Complex v) { return std::abs(v - 1.0) < 1e-14; }));

  // Characteristic polynomial lambda^2 + 1.
  ev = eig_general(mat2(0, 1, -1, 0));
  CHECK(contains_value(ev, kI, 1e-14));
  CHECK(contains_value(ev, -kI, 1e-14));

  CHECK_THROWS_AS(eig_general(ComplexMatrix::Zero(2, 3)), ValidationError);
}

TEST_CASE("eig_general: trace equals eigenvalue sum and residuals are small") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 2 + trial % 8;
    const ComplexMatrix m = random_matrix(rng, d, d);
    const EigenPairs ep = eig_general_with_vectors(m);
    Complex sum = 0.0;
    for (Complex v : ep.values) sum += v;
    CHECK(std::abs(sum - m.trace()) < 1e-10 * std::max(1.0, std::abs(m.trace())));
    for (std::size_t j = 0; j < ep.values.size(); ++j) {
      const ComplexVector v = ep.vectors.col(static_cast<Eigen::Index>(j)).normalized();
      CHECK((m * v - ep.values[j] * v).norm() <= 1e-10 * m.norm());
    }
  }
}

TEST_CASE("eig_hermitian examples") {
  auto e = eig_hermitian(diag({-1, 1}));
  CHECK(e.values(0) == doctest::Approx(-1.0));
  CHECK(e.values(1) == doctest::Approx(1.0));

  e = eig_hermitian(mat2(0, 1, 1, 0));
  CHECK(e.values(0) == doctest::Approx(-1.0));
  CHECK(e.values(1) == doctest::Approx(1.0));

  const ComplexMatrix rho0 = diag({1, 0});
  const ComplexMatrix rho1 = 0.5 * identity(2);
  e = eig_hermitian(0.5 * (rho1 - rho0));
  CHECK(e.values(0) == doctest::Approx(-0.25));
  CHECK(e.values(1) == doctest::Approx(0.25));

  CHECK_THROWS_AS(eig_hermitian(mat2(0, 1, 0, 0)), ValidationError);
}

TEST_CASE("eig_hermitian reconstructs random Hermitian matrices") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 1 + trial % 7;
    const ComplexMatrix h = random_hermitian(rng, d);
    const auto e = eig_hermitian(h);
    for (Eigen::Index i = 1; i < d; ++i) CHECK(e.values(i - 1) <= e.values(i));
    const ComplexMatrix rebuilt = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    CHECK(max_abs(rebuilt - h) < 1e-10);
    CHECK(max_abs(e.vectors.adjoint() * e.vectors - identity(d)) < 1e-12);
  }
}

TEST_CASE("integrate_adaptive examples") {
  const std::vector<double> grid{0.0, 0.5, 1.0};

  SUBCASE("zero derivative keeps the state") {
    ComplexVector y0(3);
    y0 << 1.0, Complex(0, 2), -3.0;
    const auto ys = integrate_adaptive(
        [](double, const ComplexVector& y, ComplexVector& dy) { dy.setZero(y.size()); }, y0, grid);
    REQUIRE(ys.size() == 3);
    for (const auto& y : ys) CHECK(max_abs(y - y0) == 0.0);
  }

  SUBCASE("scalar decay") {
    OdeSettings s;
    const auto ys = integrate_adaptive(
        [](double, const ComplexVector& y, ComplexVector& dy) { dy = -y; },
        ComplexVector::Ones(1), grid, s);
    CHECK(std::abs(ys.back()(0) - std::exp(-1.0)) <= s.rel_tol * std::exp(-1.0));
  }

  SUBCASE("rotation reaches (0, -1) at pi/2") {
    ComplexMatrix a = mat2(0, 1, -1, 0);
    ComplexVector y0(2);
    y0 << 1.0, 0.0;
    const std::vector<double> g{0.0, std::numbers::pi / 2};
    OdeSettings s;
    const auto ys = integrate_adaptive(
        [&a](double, const ComplexVector& y, ComplexVector& dy) { dy = a * y; }, y0, g, s);
    CHECK(std::abs(ys.back()(0)) <= s.rel_tol);
    CHECK(std::abs(ys.back()(1) + 1.0) <= s.rel_tol);
  }
}

TEST_CASE("integrate_adaptive matches expm propagation for random 4x4 generators") {
  std::mt19937_64 rng(21);
  OdeSettings s;
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.2 * i);
  for (int trial = 0; trial < 10; ++trial) {
    ComplexMatrix a = random_matrix(rng, 4, 4);
    a /= a.norm();
    const ComplexVector y0 = random_state(rng, 4);
    const auto ys = integrate_adaptive(
        [&a](double, const ComplexVector& y, ComplexVector& dy) { dy.noalias() = a * y; }, y0, grid, s);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const ComplexVector exact = expm(a * grid[i]) * y0;
      CHECK((ys[i] - exact).norm() <= 10 * s.rel_tol * std::max(1.0, exact.norm()));
    }
  }
}

TEST_CASE("integrate_adaptive error paths") {
  const auto identity_rhs = [](double, const ComplexVector& y, ComplexVector& dy) { dy = y; };
  const ComplexVector y0 = ComplexVector::Ones(1);

  SUBCASE("non-increasing grid") {
    const std::vector<double> g{0.0, 1.0, 1.0};
    CHECK_THROWS_AS(integrate_adaptive(identity_rhs, y0, g), ValidationError);
  }
  SUBCASE("step budget") {
    OdeSettings s;
    s.max_steps = 3;
    const std::vector<double> g{0.0, 50.0};
    CHECK_THROWS_AS(integrate_adaptive(identity_rhs, y0, g, s), NumericalError);
  }
  SUBCASE("NaN derivative") {
    const std::vector<double> g{0.0, 1.0};
    CHECK_THROWS_AS(integrate_adaptive(
                        [](double t, const ComplexVector& y, ComplexVector& dy) {
                          dy = y * (t > 0.3 ? std::nan("") : 1.0);
                        },
                        y0, g),
                    NumericalError);
  }
  SUBCASE("invalid tolerances") {
    OdeSettings s;
    s.rel_tol = 0.0;
    const std::vector<double> g{0.0, 1.0};
    CHECK_THROWS_AS(integrate_adaptive(identity_rhs, y0, g, s), ValidationError);
  }
}

TEST_CASE("uniform_grid") {
  const auto g = uniform_grid(5.0, 500);
  CHECK(g.size() == 501);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 5.0);
  CHECK(g[100] == doctest::Approx(1.0));
  CHECK_THROWS_AS(uniform_grid(5.0, 0), ValidationError);
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i == 3) throw NumericalError("x"); }),
                  NumericalError);
}
