// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include "qhypo/analytic.hpp"
#include "qhypo/bounds.hpp"
#include "qhypo/cli.hpp"
#include "qhypo/estimation.hpp"
#include "qhypo/spectral.hpp"
#include "qhypo/trajectories.hpp"
#include "qhypo/twosided.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>

using namespace qhypo;
using namespace qhypo::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

HypothesisPair reference_pair() { return two_level_pair({0.0, 0.0, 1.0}, {4.0, 0.0, 1.0}); }

Outcome overlap_identity() {
  const auto start = Clock::now();
  const auto grid = uniform_grid(5.0, 500);
  const OverlapCurve curve = solve_two_sided(reference_pair(), grid);
  const NoJumpState nj = no_jump_evolution(4.0, 1.0, grid);
  const double elapsed = seconds_since(start);
  double dev = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    dev = std::max(dev, std::abs(std::norm(curve.overlaps[i]) - std::norm(nj.a[i])));
  return {dev <= 1e-6 && elapsed < 1.0,
          fmt("max | |Tr rho01|^2 - |a|^2 | = %.2e over %zu points, %.3f s", dev, grid.size(), elapsed)};
}

Outcome certainty_times() {
  const auto grid = uniform_grid(5.0, 500);
  const OverlapCurve curve = solve_two_sided(reference_pair(), grid);
  double best = 1.0, at = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (curve.pe_min[i] < best) {
      best = curve.pe_min[i];
      at = grid[i];
    }
  return {best < 1e-6, fmt("min pe_min = %.2e at t = %.2f", best, at)};
}

Outcome curve_ordering() {
  const auto grid = uniform_grid(5.0, 500);
  const Fig2Bundle b = fig2_bundle(0.0, 4.0, 1.0, grid);
  double worst = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, b.pe_min[i] - b.pe_counting_atom[i]);
    worst = std::max(worst, b.pe_counting_atom[i] - b.pe_counting[i]);
    worst = std::max(worst, b.pe_min[i] - b.pe_helstrom[i]);
  }
  const std::vector<double> late{0.0, 10.0};
  const Fig2Bundle l = fig2_bundle(0.0, 4.0, 1.0, late);
  // resonant Bloch steady state against |g><g|
  const double ree = 16.0 / 33.0, reg = 4.0 / 33.0;
  const double floor = 0.5 - 0.5 * std::sqrt(ree * ree + reg * reg);
  const double helstrom = l.pe_helstrom.back();
  const bool pass = worst <= 1e-9 && helstrom > 0.05 && l.pe_min.back() < 1e-3 &&
                    std::abs(helstrom - floor) < 1e-3;
  return {pass, fmt("worst ordering violation %.1e; t=10: helstrom %.5f (steady floor %.5f), "
                    "pe_min %.1e",
                    std::max(worst, 0.0), helstrom, floor, l.pe_min.back())};
}

Outcome rabi_shift() {
  const auto grid = uniform_grid(5.0, 500);
  OdeSettings tight;
  tight.rel_tol = 1e-12;
  tight.abs_tol = 1e-14;
  const OverlapCurve a = solve_two_sided(two_level_pair({-2.0, 0.0, 1.0}, {2.0, 0.0, 1.0}), grid, tight);
  const OverlapCurve b = solve_two_sided(reference_pair(), grid, tight);
  double dev = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) dev = std::max(dev, std::abs(a.overlaps[i] - b.overlaps[i]));
  return {dev <= 1e-9, fmt("max |alpha(-2,2) - alpha(0,4)| = %.2e", dev)};
}

Outcome fig3_optima() {
  const auto start = Clock::now();
  const cli::Fig3Tables t = cli::fig3_tables(cli::kFig3Detunings);
  const double elapsed = seconds_since(start);
  bool pass = elapsed < 10.0;
  std::string detail;
  for (std::size_t i = 0; i < t.detunings.size(); ++i) {
    const RateScan& s = scan_rate_over_rabi(t.detunings[i], cli::fig3_omega_grid());
    const double target = t.detunings[i] == 0.5 ? 0.62 : 0.75;
    const double tol = t.detunings[i] == 0.5 ? 0.03 : 0.05;
    const double low = s.rates.front() / s.max_rate;
    pass = pass && std::abs(s.argmax_omega - target) <= tol && low < 0.1;
    detail += fmt("d=%g: argmax %.3f, r(0.01)/max %.1e; ", t.detunings[i], s.argmax_omega, low);
  }
  return {pass, detail + fmt("scan %.2f s", elapsed)};
}

Outcome spectral_vs_time() {
  const HypothesisPair p = two_level_pair({0.75, 0.0, 1.0}, {0.75, 1.0, 1.0});
  const double rate = convergence_rate(p).rate;
  std::vector<double> times;
  for (int i = 0; i <= 300; ++i) times.push_back(30.0 + 0.1 * i);
  const auto overlaps = propagate_two_sided_expm(p, times);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double y = std::log(std::abs(overlaps[i]));
    sx += times[i];
    sy += y;
    sxx += times[i] * times[i];
    sxy += times[i] * y;
  }
  const double n = static_cast<double>(times.size());
  const double fitted = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double rel = std::abs(fitted - rate) / rate;
  return {rel <= 0.02, fmt("spectral %.5f, fitted %.5f, rel diff %.1e", rate, fitted, rel)};
}

Outcome vectorization() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const HypothesisPair p{random_hypothesis(rng, 2, 1 + trial % 2), random_hypothesis(rng, 2, 1 + trial % 2),
                           random_state(rng, 2)};
    const ComplexMatrix rho = random_matrix(rng, 2, 2);
    const ComplexVector diff = vectorize_two_sided(p) * vec(rho) - vec(two_sided_derivative(p, rho, 0.0));
    worst = std::max(worst, diff.cwiseAbs().maxCoeff());
  }
  const HypothesisPair p = two_level_pair({0.75, 0.0, 1.0}, {0.75, 1.0, 1.0});
  const auto grid = uniform_grid(10.0, 100);
  const auto by_expm = propagate_two_sided_expm(p, grid);
  const OverlapCurve ode = solve_two_sided(p, grid);
  double prop = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) prop = std::max(prop, std::abs(by_expm[i] - ode.overlaps[i]));
  return {worst <= 1e-12 && prop <= 1e-8,
          fmt("max |L vec(rho) - vec(drho)| = %.1e; max |expm - ode| = %.1e", worst, prop)};
}

Outcome gaussian_closed_form() {
  double worst = 0.0;
  for (double dg : {0.5, 1.0, 2.0})
    for (double k : {0.0, 0.5, 1.0})
      for (double t : {0.5, 1.0, 2.0}) {
        const GaussianScenario s{dg, 0.0, k, t};
        const double exact = gaussian_overlap(s);
        worst = std::max(worst, std::abs(gaussian_grid_oracle(s) - exact) / exact);
      }
  // least squares log Tr = a t^2 + b t^3 on oracle values
  double coef_err = 0.0;
  for (double k : {0.5, 1.0}) {
    const double dg = 1.0;
    double s44 = 0, s45 = 0, s55 = 0, s2y = 0, s3y = 0;
    for (int i = 1; i <= 8; ++i) {
      const double t = 0.25 * i, t2 = t * t, t3 = t2 * t;
      const double y = std::log(gaussian_grid_oracle({dg, 0.0, k, t}, {-12.0, 12.0, 4096}));
      s44 += t2 * t2;
      s45 += t2 * t3;
      s55 += t3 * t3;
      s2y += t2 * y;
      s3y += t3 * y;
    }
    const double b = (s44 * s3y - s45 * s2y) / (s44 * s55 - s45 * s45);
    coef_err = std::max(coef_err, std::abs(b + dg * dg * k / 3));
  }
  return {worst <= 1e-3 && coef_err <= 1e-6,
          fmt("max rel err over 27 points %.1e; cubic coefficient err %.1e", worst, coef_err)};
}

Outcome fisher_checks() {
  const ParametrizedScenario rabi{[](double theta) { return build_two_level({theta, 0.0, 0.0}); },
                                  ground_state(), 1.0};
  const double i_rabi = fisher_information(rabi, 1.0).fisher;
  const double k = 1.0, t = 2.0;
  const double expected = t * t + 4 * k * t * t * t / 3;
  const double i_gauss = fisher_information(make_gaussian_overlap_function({0.0, 0.0, k, t}), 0.0, t).fisher;
  const bool rabi_ok = std::abs(i_rabi - 1.0) <= 1e-4;
  const bool gauss_ok = std::abs(i_gauss - expected) <= 0.01 * expected;
  return {rabi_ok && gauss_ok,
          fmt("two-level I = %.6f (%s); gaussian I = %.4f vs stated t^2 + 4kt^3/3 = %.4f (%s)", i_rabi,
              rabi_ok ? "ok" : "off", i_gauss, expected, gauss_ok ? "ok" : "off")};
}

Outcome trajectory_verification() {
  const HypothesisPair p = reference_pair();
  std::vector<double> times;
  for (int i = 1; i <= 10; ++i) times.push_back(0.5 * i);
  const AugmentedModel m = build_augmented(p);
  const EnsembleConfig cfg{2000, 12345, 1e-3};
  const auto start = Clock::now();
  const EnsembleEstimate a = run_ensemble(m, times, cfg);
  const double elapsed = seconds_since(start);
  const EnsembleEstimate b = run_ensemble(m, times, cfg);
  std::vector<double> grid{0.0};
  grid.insert(grid.end(), times.begin(), times.end());
  const OverlapCurve exact = solve_two_sided(p, grid);
  int within = 0;
  bool identical = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double z = std::abs(a.mean_overlap[i] - exact.overlaps[i + 1]) / a.std_err[i];
    worst = std::max(worst, z);
    if (z <= 3.5) ++within;
    identical = identical && a.mean_overlap[i] == b.mean_overlap[i] && a.std_err[i] == b.std_err[i];
  }
  return {within == 10 && identical && elapsed < 30.0,
          fmt("%d/10 times within 3.5 se (max %.2f se); bitwise repeat %s; %.2f s per run", within, worst,
              identical ? "yes" : "no", elapsed)};
}

Outcome lindblad_hygiene() {
  std::mt19937_64 rng(77);
  const auto grid = uniform_grid(5.0, 50);
  double trace_err = 0.0, herm_err = 0.0, min_eig = 1.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const Hypothesis h = random_hypothesis(rng, d, 1 + trial % 3);
    // pure starts sit on the positivity boundary, which is the harder case
    ComplexMatrix rho0 = random_density(rng, d);
    if (trial % 2 == 0) {
      const ComplexVector psi = random_state(rng, d);
      rho0 = psi * psi.adjoint();
    }
    const DensityTrajectory traj = solve_lindblad(h, rho0, grid);
    for (const auto& rho : traj.states) {
      trace_err = std::max(trace_err, std::abs(rho.trace() - 1.0));
      herm_err = std::max(herm_err, max_abs(rho - rho.adjoint()));
      const ComplexMatrix sym = 0.5 * (rho + rho.adjoint());
      min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<ComplexMatrix>(sym).eigenvalues().minCoeff());
    }
  }
  return {trace_err <= 1e-10 && herm_err <= 1e-10 && min_eig >= -1e-10,
          fmt("max trace err %.1e, max Hermiticity err %.1e, min eigenvalue %.2e", trace_err, herm_err, min_eig)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"overlap identity", overlap_identity},
      {"certainty times", certainty_times},
      {"curve ordering", curve_ordering},
      {"rabi-shift invariance", rabi_shift},
      {"rate optima", fig3_optima},
      {"spectral vs time domain", spectral_vs_time},
      {"vectorization oracle", vectorization},
      {"gaussian closed form", gaussian_closed_form},
      {"fisher checks", fisher_checks},
      {"trajectory verification", trajectory_verification},
      {"lindblad hygiene", lindblad_hygiene},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %-24s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
