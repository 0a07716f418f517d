#pragma once

// Dense complex linear algebra and ODE integration used throughout qhypo.
//
// Vectorization convention is column-stacking everywhere:
//   vec(A X B) = (B^T kron A) vec(X).

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qhypo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

bool all_finite(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol);

ComplexMatrix identity(Eigen::Index dim);

// Kronecker product; block (i, j) of the result is a(i, j) * b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Column-stacking vectorization and its inverse.
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows);

// Matrix exponential by scaling and squaring with a [13/13] Pade kernel.
ComplexMatrix expm(const ComplexMatrix& m);

// exp(m) via eigendecomposition. Only meaningful for diagonalizable input;
// kept as an independent cross-check of expm().
ComplexMatrix expm_by_eigendecomposition(const ComplexMatrix& m);

// All eigenvalues of a general complex matrix (complex Schur form via
// shifted QR). Throws NumericalError if the iteration does not converge.
std::vector<Complex> eig_general(const ComplexMatrix& m);

struct EigenPairs {
  std::vector<Complex> values;
  ComplexMatrix vectors;  // column j pairs with values[j]
};
EigenPairs eig_general_with_vectors(const ComplexMatrix& m);

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  ComplexMatrix vectors;   // orthonormal columns
};

// Throws ValidationError if m deviates from Hermitian by more than tol
// (max-abs entry of m - m^dagger).
HermitianEigen eig_hermitian(const ComplexMatrix& m, double tol = 1e-10);

struct OdeSettings {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // <= 0 selects a starting step automatically
  long max_steps = 2'000'000;

  void validate() const;
};

// dydt = f(t, y); dydt is pre-sized by the caller.
using Derivative = std::function<void(double t, const ComplexVector& y, ComplexVector& dydt)>;

// Dormand-Prince 5(4) with PI step-size control. Returns the solution at every
// point of t_grid, which must be strictly increasing; y0 is the state at
// t_grid.front().
std::vector<ComplexVector> integrate_adaptive(const Derivative& f, const ComplexVector& y0,
                                              std::span<const double> t_grid,
                                              const OdeSettings& settings = {});

// Uniform grid t_i = i * t_max / steps, i = 0..steps (steps + 1 points).
std::vector<double> uniform_grid(double t_max, int steps);

// Worker count: hardware concurrency, capped by QHYPO_THREADS when set.
unsigned thread_budget();

// Runs body(i) for i in [0, n) on up to thread_budget() threads. Each index is
// executed exactly once; callers write results into per-index slots so the
// outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qhypo
