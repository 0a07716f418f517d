#include "qhypo/scenario.hpp"

#include "qhypo/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace qhypo {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError("scenario: " + where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing key '") + key + "'");
  return obj.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj.at(key), where + "." + key) : fallback;
}

Complex complex_value(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected a complex number [re, im]");
  return {number(j[0], where), number(j[1], where)};
}

ComplexMatrix matrix_value(const json& j, Eigen::Index dim, const std::string& where) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(dim))
    fail(where, "dimension mismatch: expected " + std::to_string(dim) + " rows");
  ComplexMatrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(dim))
      fail(where, "dimension mismatch in row " + std::to_string(r));
    for (Eigen::Index c = 0; c < dim; ++c)
      m(r, c) = complex_value(row[static_cast<std::size_t>(c)], where);
  }
  return m;
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, where));
  return out;
}

Coefficient coefficient_value(const json& j, const std::string& where) {
  const std::string type = require(j, "type", where).get<std::string>();
  if (type == "constant") return ConstantCoefficient{number_or(j, "value", 1.0, where)};
  if (type == "piecewise")
    return PiecewiseConstantCoefficient{number_list(require(j, "breaks", where), where + ".breaks"),
                                        number_list(require(j, "values", where), where + ".values")};
  if (type == "sinusoid")
    return SinusoidCoefficient{number_or(j, "amplitude", 1.0, where),
                               number_or(j, "frequency", 0.0, where),
                               number_or(j, "phase", 0.0, where)};
  fail(where, "unknown coefficient type '" + type + "'");
}

TwoLevelParams two_level_params(const json& j, const std::string& where) {
  return {number_or(j, "rabi", 0.0, where), number_or(j, "detuning", 0.0, where),
          number_or(j, "kappa", 1.0, where)};
}

LindbladChannel channel_value(const json& j, Eigen::Index dim, const std::string& where) {
  if (j.contains("preset")) {
    const std::string preset = j.at("preset").get<std::string>();
    if (preset != "decay") fail(where, "unknown channel preset '" + preset + "'");
    if (dim != 2) fail(where, "decay preset requires dimension 2");
    const double kappa = number_or(j, "kappa", 1.0, where);
    if (!(kappa >= 0.0)) fail(where, "kappa must be >= 0");
    ComplexMatrix c = ComplexMatrix::Zero(2, 2);
    c(0, 1) = std::sqrt(kappa);
    return {c};
  }
  return {matrix_value(require(j, "matrix", where), dim, where + ".matrix")};
}

Hypothesis hypothesis_value(const json& j, Eigen::Index dim, const std::string& where) {
  Hypothesis hyp;
  hyp.label = j.contains("label") ? j.at("label").get<std::string>() : where;
  const json& h = require(j, "hamiltonian", where);
  const std::string hw = where + ".hamiltonian";

  if (h.contains("preset")) {
    const std::string preset = h.at("preset").get<std::string>();
    if (preset != "two_level") fail(hw, "unknown Hamiltonian preset '" + preset + "'");
    if (dim != 2) fail(hw, "two_level preset requires dimension 2");
    Hypothesis built = build_two_level(two_level_params(h, hw));
    hyp.hamiltonian = built.hamiltonian;
    if (!j.contains("channels")) hyp.channels = built.channels;
  } else {
    hyp.hamiltonian.constant_part = matrix_value(require(h, "matrix", hw), dim, hw + ".matrix");
  }
  if (h.contains("drive_terms")) {
    std::size_t k = 0;
    for (const auto& term : h.at("drive_terms")) {
      const std::string tw = hw + ".drive_terms[" + std::to_string(k++) + "]";
      hyp.hamiltonian.drive_terms.push_back(
          {coefficient_value(require(term, "coefficient", tw), tw + ".coefficient"),
           matrix_value(require(term, "matrix", tw), dim, tw + ".matrix")});
    }
  }
  if (j.contains("channels")) {
    const json& chans = j.at("channels");
    if (!chans.is_array()) fail(where, "channels must be a list");
    std::size_t k = 0;
    for (const auto& c : chans)
      hyp.channels.push_back(channel_value(c, dim, where + ".channels[" + std::to_string(k++) + "]"));
  }
  return hyp;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario: malformed JSON: ") + e.what());
  }

  try {
    const json& dim_j = require(doc, "dimension", "root");
    if (!dim_j.is_number_integer() || dim_j.get<long>() < 1) fail("dimension", "expected a positive integer");
    const auto dim = static_cast<Eigen::Index>(dim_j.get<long>());

    const json& init = require(doc, "initial_state", "root");
    const std::string type = require(init, "type", "initial_state").get<std::string>();
    if (type != "pure")
      fail("initial_state", "type '" + type + "' is not supported; only pure states define a minimal error");
    const json& v = require(init, "vector", "initial_state");
    if (!v.is_array() || v.size() != static_cast<std::size_t>(dim))
      fail("initial_state.vector", "dimension mismatch");
    ComplexVector psi(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      psi(i) = complex_value(v[static_cast<std::size_t>(i)], "initial_state.vector");

    const json& hyps = require(doc, "hypotheses", "root");
    if (!hyps.is_array() || hyps.size() != 2) fail("hypotheses", "exactly two hypotheses are required");

    Scenario s;
    s.pair = validate_pair({hypothesis_value(hyps[0], dim, "hypotheses[0]"),
                            hypothesis_value(hyps[1], dim, "hypotheses[1]"), psi});
    if (doc.contains("time")) {
      const json& t = doc.at("time");
      TimeSpec ts;
      ts.t_max = number(require(t, "t_max", "time"), "time.t_max");
      const json& steps = require(t, "steps", "time");
      if (!steps.is_number_integer()) fail("time.steps", "expected an integer");
      ts.steps = steps.get<int>();
      s.time = ts;
    }
    return s;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace qhypo
