#pragma once

// Command implementations behind the qhypo executable. Each table builder is
// usable on its own; run_cli adds argument parsing, file output and the exit
// code contract:
//   0 success, 1 I/O failure, 2 invalid input, 3 numerical failure.

#include "qhypo/csv.hpp"
#include "qhypo/scenario.hpp"
#include "qhypo/trajectories.hpp"

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace qhypo::cli {

enum ExitCode : int { kOk = 0, kIoFailure = 1, kInvalidInput = 2, kNumericalFailure = 3 };

// Fixed grids of the reproduce command.
inline constexpr double kFig2TMax = 5.0;
inline constexpr int kFig2Steps = 500;
inline constexpr double kFig2Rabi = 4.0;
inline constexpr double kFig3OmegaMax = 1.5;
inline constexpr int kFig3Points = 150;
inline const std::vector<double> kFig3Detunings{0.5, 1.0, 1.5, 2.0, 2.5};

// t, re_overlap, im_overlap, pe_min
CsvTable discriminate_table(const Scenario& scenario, double t_max, int steps);

// t, pe_min, pe_counting, pe_counting_atom, pe_helstrom
CsvTable fig2_table();

// Omega_i = i * 1.5 / 150, i = 1..150.
std::vector<double> fig3_omega_grid();

struct Fig3Tables {
  std::vector<double> detunings;
  std::vector<CsvTable> scans;  // omega, rate
  CsvTable summary;             // delta, argmax_omega, max_rate
};
Fig3Tables fig3_tables(const std::vector<double>& detunings);

// t, re_mean, im_mean, std_err, re_exact, im_exact
CsvTable trajectories_table(const Scenario& scenario, double t_max, int steps,
                            const EnsembleConfig& cfg);

struct FisherOptions {
  std::string family;  // two_level_rabi | two_level_detuning | gaussian
  double theta = 0.0;
  double t = 1.0;
  double h = 1e-3;
  double kappa = 1.0;     // two-level families
  double rabi = 1.0;      // fixed drive for two_level_detuning
  double detuning = 0.0;  // fixed detuning for two_level_rabi
  double k = 1.0;         // gaussian probe strength
};
// theta, t, fisher, crb, h, richardson_error
CsvTable fisher_table(const FisherOptions& opts);

// re_lambda, im_lambda
CsvTable spectrum_table(const Scenario& scenario);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qhypo::cli
