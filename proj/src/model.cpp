#include "qhypo/model.hpp"

#include "qhypo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qhypo {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double evaluate(const Coefficient& c, double t) {
  return std::visit(
      Overloaded{
          [](const ConstantCoefficient& k) { return k.value; },
          [t](const PiecewiseConstantCoefficient& p) {
            if (p.values.empty()) return 0.0;
            const auto it = std::upper_bound(p.breaks.begin(), p.breaks.end(), t);
            const auto idx = it == p.breaks.begin() ? 0 : (it - p.breaks.begin()) - 1;
            return p.values[static_cast<std::size_t>(idx)];
          },
          [t](const SinusoidCoefficient& s) {
            return s.amplitude * std::sin(s.frequency * t + s.phase);
          },
      },
      c);
}

bool is_constant(const Coefficient& c) {
  return std::holds_alternative<ConstantCoefficient>(c);
}

ComplexMatrix TimeDependentHamiltonian::at(double t) const {
  ComplexMatrix h = constant_part;
  for (const auto& term : drive_terms) h += evaluate(term.coefficient, t) * term.op;
  return h;
}

bool TimeDependentHamiltonian::is_time_independent() const {
  return std::all_of(drive_terms.begin(), drive_terms.end(),
                     [](const DriveTerm& d) { return is_constant(d.coefficient); });
}

ComplexMatrix TimeDependentHamiltonian::static_matrix() const {
  if (!is_time_independent())
    throw ValidationError("Hamiltonian has time-dependent drive terms");
  return at(0.0);
}

Hypothesis build_two_level(const TwoLevelParams& p) {
  if (!(p.kappa >= 0.0)) throw ValidationError("build_two_level: kappa must be >= 0");
  ComplexMatrix h(2, 2);
  h << 0.0, 0.5 * p.rabi,
       0.5 * p.rabi, p.detuning;
  ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
  lower(0, 1) = std::sqrt(p.kappa);

  Hypothesis hyp;
  hyp.label = "two_level(rabi=" + std::to_string(p.rabi) + ", detuning=" +
              std::to_string(p.detuning) + ", kappa=" + std::to_string(p.kappa) + ")";
  hyp.hamiltonian.constant_part = h;
  hyp.channels.push_back({lower});
  return hyp;
}

ComplexVector ground_state() {
  ComplexVector v(2);
  v << 1.0, 0.0;
  return v;
}

ComplexVector excited_state() {
  ComplexVector v(2);
  v << 0.0, 1.0;
  return v;
}

HypothesisPair two_level_pair(const TwoLevelParams& p0, const TwoLevelParams& p1) {
  return {build_two_level(p0), build_two_level(p1), ground_state()};
}

void validate_hypothesis(const Hypothesis& hyp, Eigen::Index dim) {
  const std::string who = "hypothesis '" + hyp.label + "'";
  const auto& h = hyp.hamiltonian;
  if (h.constant_part.rows() != dim || h.constant_part.cols() != dim)
    throw ValidationError(who + ": dimension mismatch in Hamiltonian (expected " +
                          std::to_string(dim) + ")");
  if (!all_finite(h.constant_part)) throw ValidationError(who + ": non-finite Hamiltonian");
  if (!is_hermitian(h.constant_part, kHermitianTol))
    throw ValidationError(who + ": non-Hermitian Hamiltonian");
  for (const auto& term : h.drive_terms) {
    if (term.op.rows() != dim || term.op.cols() != dim)
      throw ValidationError(who + ": dimension mismatch in drive term");
    if (!all_finite(term.op)) throw ValidationError(who + ": non-finite drive term");
    if (!is_hermitian(term.op, kHermitianTol))
      throw ValidationError(who + ": non-Hermitian drive term");
    if (const auto* pw = std::get_if<PiecewiseConstantCoefficient>(&term.coefficient)) {
      if (pw->breaks.size() != pw->values.size() ||
          !std::is_sorted(pw->breaks.begin(), pw->breaks.end()))
        throw ValidationError(who + ": malformed piecewise-constant coefficient");
    }
  }
  for (const auto& ch : hyp.channels) {
    if (ch.op.rows() != dim || ch.op.cols() != dim)
      throw ValidationError(who + ": dimension mismatch in channel operator");
    if (!all_finite(ch.op)) throw ValidationError(who + ": non-finite channel operator");
  }
}

HypothesisPair validate_pair(const HypothesisPair& pair) {
  const Eigen::Index dim = pair.initial_state.size();
  if (dim < 1) throw ValidationError("dimension mismatch: empty initial state");
  validate_hypothesis(pair.hyp0, dim);
  validate_hypothesis(pair.hyp1, dim);
  if (!all_finite(pair.initial_state)) throw ValidationError("initial state is non-finite");
  const double norm = pair.initial_state.norm();
  if (std::abs(norm - 1.0) > kNormTol)
    throw ValidationError("initial state is unnormalized (norm " + std::to_string(norm) + ")");

  HypothesisPair out = pair;
  const std::size_t n = std::max(out.hyp0.channels.size(), out.hyp1.channels.size());
  const ComplexMatrix zero = ComplexMatrix::Zero(dim, dim);
  out.hyp0.channels.resize(n, LindbladChannel{zero});
  out.hyp1.channels.resize(n, LindbladChannel{zero});
  return out;
}

void validate_density_matrix(const ComplexMatrix& rho, double tol, const char* who) {
  const std::string w(who);
  if (rho.rows() != rho.cols() || rho.rows() == 0)
    throw ValidationError(w + ": density matrix must be square and non-empty");
  if (!all_finite(rho)) throw ValidationError(w + ": density matrix has non-finite entries");
  if (!is_hermitian(rho, tol)) throw ValidationError(w + ": density matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > tol)
    throw ValidationError(w + ": density matrix trace is not 1");
  const auto eig = eig_hermitian(rho, tol);
  if (eig.values(0) < -tol)
    throw ValidationError(w + ": density matrix is not positive semidefinite");
}

}  // namespace qhypo
