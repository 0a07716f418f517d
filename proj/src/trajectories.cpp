#include "qhypo/trajectories.hpp"

#include "qhypo/errors.hpp"

#include <cmath>
#include <random>
#include <string>

namespace qhypo {

namespace {

ComplexMatrix block_diag(const ComplexMatrix& upper, const ComplexMatrix& lower) {
  const Eigen::Index d = upper.rows();
  ComplexMatrix out = ComplexMatrix::Zero(2 * d, 2 * d);
  out.topLeftCorner(d, d) = upper;
  out.bottomRightCorner(d, d) = lower;
  return out;
}

}  // namespace

AugmentedModel build_augmented(const HypothesisPair& pair) {
  const HypothesisPair valid = validate_pair(pair);
  const Eigen::Index d = valid.dim();
  const ComplexMatrix zero = ComplexMatrix::Zero(d, d);

  AugmentedModel m;
  m.dim = 2 * d;
  m.hamiltonian.constant_part = block_diag(valid.hyp0.hamiltonian.constant_part,
                                           valid.hyp1.hamiltonian.constant_part);
  for (const auto& term : valid.hyp0.hamiltonian.drive_terms)
    m.hamiltonian.drive_terms.push_back({term.coefficient, block_diag(term.op, zero)});
  for (const auto& term : valid.hyp1.hamiltonian.drive_terms)
    m.hamiltonian.drive_terms.push_back({term.coefficient, block_diag(zero, term.op)});

  for (std::size_t k = 0; k < valid.hyp0.channels.size(); ++k)
    m.channels.push_back(block_diag(valid.hyp0.channels[k].op, valid.hyp1.channels[k].op));

  m.sigma_plus = ComplexMatrix::Zero(2 * d, 2 * d);
  m.sigma_plus.bottomLeftCorner(d, d) = identity(d);

  m.initial_state.resize(2 * d);
  m.initial_state.head(d) = valid.initial_state / std::sqrt(2.0);
  m.initial_state.tail(d) = valid.initial_state / std::sqrt(2.0);
  return m;
}

double max_jump_rate(const AugmentedModel& model) {
  double total = 0.0;
  for (const auto& c : model.channels) {
    const auto eig = eig_hermitian(c.adjoint() * c, 1e-9);
    total += std::max(0.0, eig.values(eig.values.size() - 1));
  }
  return total;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Grid index -> number of dt steps from 0.
std::vector<long> grid_steps(std::span<const double> t_grid, double dt) {
  std::vector<long> steps;
  steps.reserve(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double ratio = t_grid[i] / dt;
    const long n = std::lround(ratio);
    if (n < 0 || std::abs(ratio - static_cast<double>(n)) > 1e-6)
      throw ValidationError("run_ensemble: grid time " + std::to_string(t_grid[i]) +
                            " is not a multiple of dt");
    if (i > 0 && n <= steps.back())
      throw ValidationError("run_ensemble: t_grid must be strictly increasing");
    steps.push_back(n);
  }
  return steps;
}

}  // namespace

EnsembleEstimate run_ensemble(const AugmentedModel& model, std::span<const double> t_grid,
                              const EnsembleConfig& cfg) {
  if (cfg.n_traj == 0) throw ValidationError("run_ensemble: n_traj must be >= 1");
  if (!(cfg.dt > 0.0)) throw ValidationError("run_ensemble: dt must be > 0");
  const double stiffness = cfg.dt * max_jump_rate(model);
  if (!(stiffness < kJumpStabilityBound))
    throw ValidationError("run_ensemble: dt * max jump rate = " + std::to_string(stiffness) +
                          " violates the stability bound " + std::to_string(kJumpStabilityBound));
  if (t_grid.empty()) return {};
  const std::vector<long> record_at = grid_steps(t_grid, cfg.dt);

  const Eigen::Index n = model.dim;
  ComplexMatrix half_k = ComplexMatrix::Zero(n, n);
  for (const auto& c : model.channels) half_k += 0.5 * c.adjoint() * c;
  const bool is_static = model.hamiltonian.is_time_independent();
  auto no_jump_propagator = [&](double t_mid) {
    return expm(-kI * (model.hamiltonian.at(t_mid) - kI * half_k) * cfg.dt);
  };
  const ComplexMatrix static_u = is_static ? no_jump_propagator(0.0) : ComplexMatrix();

  const std::size_t n_rec = t_grid.size();
  std::vector<Complex> samples(cfg.n_traj * n_rec);

  parallel_for(cfg.n_traj, [&](std::size_t traj) {
    std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(traj)));
    ComplexVector psi = model.initial_state.normalized();
    ComplexVector scratch(n);
    std::vector<double> weights(model.channels.size());
    Complex* out = samples.data() + traj * n_rec;

    long step = 0;
    for (std::size_t r = 0; r < n_rec; ++r) {
      for (; step < record_at[r]; ++step) {
        double total = 0.0;
        for (std::size_t m = 0; m < model.channels.size(); ++m) {
          scratch.noalias() = model.channels[m] * psi;
          weights[m] = cfg.dt * scratch.squaredNorm();
          total += weights[m];
        }
        const double u = uniform01(rng);
        if (u < total) {
          std::size_t m = 0;
          double acc = weights[0];
          while (u >= acc && m + 1 < weights.size()) acc += weights[++m];
          scratch.noalias() = model.channels[m] * psi;
        } else if (is_static) {
          scratch.noalias() = static_u * psi;
        } else {
          scratch.noalias() = no_jump_propagator((static_cast<double>(step) + 0.5) * cfg.dt) * psi;
        }
        const double norm = scratch.norm();
        if (!(norm > 0.0) || !std::isfinite(norm))
          throw NumericalError("run_ensemble: trajectory state collapsed to zero norm");
        psi = scratch / norm;
      }
      out[r] = 2.0 * psi.dot(model.sigma_plus * psi);  // dot conjugates psi
    }
  });

  EnsembleEstimate est;
  est.times.assign(t_grid.begin(), t_grid.end());
  est.mean_overlap.assign(n_rec, Complex(0.0));
  est.std_err.assign(n_rec, 0.0);
  const double count = static_cast<double>(cfg.n_traj);
  for (std::size_t r = 0; r < n_rec; ++r) {
    Complex sum(0.0);
    for (std::size_t traj = 0; traj < cfg.n_traj; ++traj) sum += samples[traj * n_rec + r];
    const Complex mean = sum / count;
    double ss = 0.0;
    for (std::size_t traj = 0; traj < cfg.n_traj; ++traj)
      ss += std::norm(samples[traj * n_rec + r] - mean);
    est.mean_overlap[r] = mean;
    est.std_err[r] = cfg.n_traj > 1 ? std::sqrt(ss / (count - 1.0) / count) : 0.0;
  }
  return est;
}

}  // namespace qhypo
