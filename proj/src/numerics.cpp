#include "qhypo/numerics.hpp"

#include "qhypo/errors.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace qhypo {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows) {
  if (rows <= 0 || v.size() % rows != 0)
    throw ValidationError("unvec: length " + std::to_string(v.size()) +
                          " is not a multiple of rows " + std::to_string(rows));
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, v.size() / rows);
}

namespace {

// Higham (2005) [13/13] coefficients and the 1-norm bound below which no
// scaling is needed.
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols())
    throw ValidationError(std::string(who) + ": matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected square");
}

}  // namespace

ComplexMatrix expm(const ComplexMatrix& m) {
  require_square(m, "expm");
  const Eigen::Index n = m.rows();
  if (n == 0) return m;
  if (!all_finite(m)) throw ValidationError("expm: non-finite entries");

  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
  const ComplexMatrix a = m / std::ldexp(1.0, squarings);

  const auto& b = kPade13;
  const ComplexMatrix eye = identity(n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;

  ComplexMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  u_inner += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye;
  const ComplexMatrix u = a * u_inner;

  ComplexMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye;

  ComplexMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

ComplexMatrix expm_by_eigendecomposition(const ComplexMatrix& m) {
  const EigenPairs ep = eig_general_with_vectors(m);
  ComplexVector expd(static_cast<Eigen::Index>(ep.values.size()));
  for (std::size_t i = 0; i < ep.values.size(); ++i) expd(static_cast<Eigen::Index>(i)) = std::exp(ep.values[i]);
  return ep.vectors * expd.asDiagonal() * ep.vectors.inverse();
}

std::vector<Complex> eig_general(const ComplexMatrix& m) {
  require_square(m, "eig_general");
  if (!all_finite(m)) throw ValidationError("eig_general: non-finite entries");
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eig_general: QR iteration did not converge");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

EigenPairs eig_general_with_vectors(const ComplexMatrix& m) {
  require_square(m, "eig_general");
  if (!all_finite(m)) throw ValidationError("eig_general: non-finite entries");
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eig_general: QR iteration did not converge");
  const auto& ev = solver.eigenvalues();
  return {{ev.data(), ev.data() + ev.size()}, solver.eigenvectors()};
}

HermitianEigen eig_hermitian(const ComplexMatrix& m, double tol) {
  require_square(m, "eig_hermitian");
  if (!all_finite(m)) throw ValidationError("eig_hermitian: non-finite entries");
  if (!is_hermitian(m, tol))
    throw ValidationError("eig_hermitian: input is not Hermitian within tolerance");
  // Symmetrize so roundoff-level anti-Hermitian parts do not leak in.
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eig_hermitian: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

void OdeSettings::validate() const {
  if (!(rel_tol > 0.0)) throw ValidationError("OdeSettings: rel_tol must be > 0");
  if (!(abs_tol > 0.0)) throw ValidationError("OdeSettings: abs_tol must be > 0");
  if (max_steps < 1) throw ValidationError("OdeSettings: max_steps must be >= 1");
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// Difference between the 5th and embedded 4th order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;
constexpr double kBeta = 0.04;           // PI term
constexpr double kAlpha = 0.2 - 0.75 * kBeta;

double error_norm(const ComplexVector& err, const ComplexVector& y0, const ComplexVector& y1,
                  const OdeSettings& s) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = s.abs_tol + s.rel_tol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double r = std::abs(err(i)) / scale;
    sum += r * r;
  }
  return err.size() > 0 ? std::sqrt(sum / static_cast<double>(err.size())) : 0.0;
}

void check_finite(const ComplexVector& v, double t) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag()))
      throw NumericalError("integrate_adaptive: non-finite derivative at t = " + std::to_string(t));
}

double initial_step_guess(const Derivative& f, double t0, const ComplexVector& y0,
                          const ComplexVector& f0, double span, const OdeSettings& s) {
  // Hairer, Norsett & Wanner, Solving ODEs I, Sec. II.4.
  ComplexVector zero = ComplexVector::Zero(y0.size());
  const double d0 = error_norm(y0, y0, zero, s);
  const double d1 = error_norm(f0, y0, zero, s);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  const ComplexVector y1 = y0 + h0 * f0;
  ComplexVector f1(y0.size());
  f(t0 + h0, y1, f1);
  const double d2 = error_norm(f1 - f0, y0, zero, s) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, span});
}

}  // namespace

std::vector<ComplexVector> integrate_adaptive(const Derivative& f, const ComplexVector& y0,
                                              std::span<const double> t_grid,
                                              const OdeSettings& settings) {
  settings.validate();
  if (t_grid.empty()) return {};
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw ValidationError("integrate_adaptive: t_grid must be strictly increasing");

  std::vector<ComplexVector> out;
  out.reserve(t_grid.size());
  out.push_back(y0);
  if (t_grid.size() == 1) return out;

  const Eigen::Index n = y0.size();
  ComplexVector y = y0, y_new(n), y_stage(n), err(n);
  ComplexVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);

  double t = t_grid.front();
  const double t_end = t_grid.back();
  f(t, y, k1);
  check_finite(k1, t);

  double h = settings.initial_step > 0.0
                 ? settings.initial_step
                 : initial_step_guess(f, t, y, k1, t_end - t, settings);
  double err_prev = 1e-4;
  long steps = 0;
  std::size_t next = 1;

  while (next < t_grid.size()) {
    const double target = t_grid[next];
    bool clipped = false;
    double h_try = h;
    if (t + h_try >= target) {
      h_try = target - t;
      clipped = true;
    }

    while (true) {
      if (++steps > settings.max_steps)
        throw NumericalError("integrate_adaptive: max_steps (" +
                             std::to_string(settings.max_steps) + ") exceeded at t = " +
                             std::to_string(t));

      y_stage = y + h_try * (a21 * k1);
      f(t + c2 * h_try, y_stage, k2);
      y_stage = y + h_try * (a31 * k1 + a32 * k2);
      f(t + c3 * h_try, y_stage, k3);
      y_stage = y + h_try * (a41 * k1 + a42 * k2 + a43 * k3);
      f(t + c4 * h_try, y_stage, k4);
      y_stage = y + h_try * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      f(t + c5 * h_try, y_stage, k5);
      y_stage = y + h_try * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      f(t + h_try, y_stage, k6);
      y_new = y + h_try * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      f(t + h_try, y_new, k7);
      check_finite(k7, t + h_try);

      err = h_try * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double en = error_norm(err, y, y_new, settings);

      if (en <= 1.0) {
        double factor = en == 0.0 ? kMaxFactor
                                  : kSafety * std::pow(en, -kAlpha) * std::pow(err_prev, kBeta);
        factor = std::clamp(factor, kMinFactor, kMaxFactor);
        err_prev = std::max(en, 1e-4);
        t = clipped ? target : t + h_try;
        y = y_new;
        k1 = k7;  // FSAL
        // A clipped step says nothing about the natural step size; keep h.
        h = clipped ? std::max(h, h_try * factor) : h_try * factor;
        break;
      }
      const double factor = std::max(kMinFactor, kSafety * std::pow(en, -kAlpha));
      h_try *= factor;
      h = h_try;
      clipped = false;
      if (h_try < 1e-14 * std::max(1.0, std::abs(t)))
        throw NumericalError("integrate_adaptive: step size underflow at t = " +
                             std::to_string(t));
    }

    if (t == target) {
      out.push_back(y);
      ++next;
    }
  }
  return out;
}

std::vector<double> uniform_grid(double t_max, int steps) {
  if (steps < 1) throw ValidationError("uniform_grid: steps must be >= 1");
  if (!(t_max > 0.0)) throw ValidationError("uniform_grid: t_max must be > 0");
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) grid[static_cast<std::size_t>(i)] = t_max * i / steps;
  return grid;
}

unsigned thread_budget() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QHYPO_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_budget(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = cursor++; i < n; i = cursor++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        cursor = n;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace qhypo
