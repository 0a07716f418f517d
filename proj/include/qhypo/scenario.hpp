#pragma once

// JSON scenario files. Complex numbers are [re, im] arrays; matrices are
// row-major nested lists of them.
//
// {
//   "dimension": 2,
//   "initial_state": {"type": "pure", "vector": [[1, 0], [0, 0]]},
//   "hypotheses": [
//     {"label": "dark",
//      "hamiltonian": {"preset": "two_level", "rabi": 0, "detuning": 0, "kappa": 1}},
//     {"label": "driven",
//      "hamiltonian": {"matrix": [[[0, 0], [2, 0]], [[2, 0], [0, 0]]],
//                      "drive_terms": [{"coefficient": {"type": "sinusoid", "amplitude": 1,
//                                                       "frequency": 2, "phase": 0},
//                                       "matrix": ...}]},
//      "channels": [{"preset": "decay", "kappa": 1}, {"matrix": ...}]}
//   ],
//   "time": {"t_max": 5, "steps": 500}
// }
//
// A two_level Hamiltonian preset without a "channels" key also brings its own
// decay channel sqrt(kappa)|g><e|; an explicit "channels" list replaces it.
// Coefficient types: constant {value}, piecewise {breaks, values},
// sinusoid {amplitude, frequency, phase}.

#include "qhypo/model.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace qhypo {

struct TimeSpec {
  double t_max = 0.0;
  int steps = 0;
};

struct Scenario {
  HypothesisPair pair;
  std::optional<TimeSpec> time;
};

// Throws ValidationError on schema or invariant violations.
Scenario parse_scenario(const std::string& json_text);

// Throws IoError if the file cannot be read.
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace qhypo
