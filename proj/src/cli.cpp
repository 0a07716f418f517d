#include "qhypo/cli.hpp"

#include "qhypo/bounds.hpp"
#include "qhypo/errors.hpp"
#include "qhypo/estimation.hpp"
#include "qhypo/spectral.hpp"
#include "qhypo/twosided.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <optional>
#include <sstream>

namespace qhypo::cli {

namespace {

struct Grid {
  double t_max;
  int steps;
};

Grid resolve_grid(const Scenario& s, std::optional<double> t_max, std::optional<int> steps,
                  Grid fallback) {
  Grid g = s.time ? Grid{s.time->t_max, s.time->steps} : fallback;
  if (t_max) g.t_max = *t_max;
  if (steps) g.steps = *steps;
  if (!(g.t_max > 0.0)) throw ValidationError("t_max must be > 0");
  if (g.steps < 1) throw ValidationError("steps must be >= 1");
  return g;
}

std::string delta_tag(double delta) {
  std::ostringstream os;
  os << delta;
  return os.str();
}

}  // namespace

CsvTable discriminate_table(const Scenario& scenario, double t_max, int steps) {
  const auto grid = uniform_grid(t_max, steps);
  const OverlapCurve curve = solve_two_sided(scenario.pair, grid);
  CsvTable table({"t", "re_overlap", "im_overlap", "pe_min"});
  for (std::size_t i = 0; i < grid.size(); ++i)
    table.add_row({curve.times[i], curve.overlaps[i].real(), curve.overlaps[i].imag(),
                   curve.pe_min[i]});
  return table;
}

CsvTable fig2_table() {
  const auto grid = uniform_grid(kFig2TMax, kFig2Steps);
  const Fig2Bundle b = fig2_bundle(0.0, kFig2Rabi, 1.0, grid);
  CsvTable table({"t", "pe_min", "pe_counting", "pe_counting_atom", "pe_helstrom"});
  for (std::size_t i = 0; i < grid.size(); ++i)
    table.add_row({b.times[i], b.pe_min[i], b.pe_counting[i], b.pe_counting_atom[i],
                   b.pe_helstrom[i]});
  return table;
}

std::vector<double> fig3_omega_grid() {
  std::vector<double> omegas(kFig3Points);
  for (int i = 1; i <= kFig3Points; ++i)
    omegas[static_cast<std::size_t>(i - 1)] = kFig3OmegaMax * i / kFig3Points;
  return omegas;
}

Fig3Tables fig3_tables(const std::vector<double>& detunings) {
  const auto omegas = fig3_omega_grid();
  Fig3Tables out{detunings, {}, CsvTable({"delta", "argmax_omega", "max_rate"})};
  for (double delta : detunings) {
    const RateScan scan = scan_rate_over_rabi(delta, omegas);
    CsvTable t({"omega", "rate"});
    for (std::size_t i = 0; i < scan.omegas.size(); ++i) t.add_row({scan.omegas[i], scan.rates[i]});
    out.scans.push_back(std::move(t));
    out.summary.add_row({delta, scan.argmax_omega, scan.max_rate});
  }
  return out;
}

CsvTable trajectories_table(const Scenario& scenario, double t_max, int steps,
                            const EnsembleConfig& cfg) {
  const auto grid = uniform_grid(t_max, steps);
  const AugmentedModel model = build_augmented(scenario.pair);
  const EnsembleEstimate est = run_ensemble(model, grid, cfg);
  const OverlapCurve exact = solve_two_sided(scenario.pair, grid);
  CsvTable table({"t", "re_mean", "im_mean", "std_err", "re_exact", "im_exact"});
  for (std::size_t i = 0; i < grid.size(); ++i)
    table.add_row({grid[i], est.mean_overlap[i].real(), est.mean_overlap[i].imag(), est.std_err[i],
                   exact.overlaps[i].real(), exact.overlaps[i].imag()});
  return table;
}

CsvTable fisher_table(const FisherOptions& opts) {
  if (!(opts.h > 0.0)) throw ValidationError("fisher: h must be > 0");
  if (!(opts.t >= 0.0)) throw ValidationError("fisher: t must be >= 0");
  FisherResult r;
  if (opts.family == "two_level_rabi" || opts.family == "two_level_detuning") {
    if (!(opts.kappa >= 0.0)) throw ValidationError("fisher: kappa must be >= 0");
    ParametrizedScenario scn;
    scn.initial_state = ground_state();
    scn.t = opts.t;
    if (opts.family == "two_level_rabi") {
      scn.builder = [opts](double theta) {
        return build_two_level({theta, opts.detuning, opts.kappa});
      };
    } else {
      scn.builder = [opts](double theta) {
        return build_two_level({opts.rabi, theta, opts.kappa});
      };
    }
    r = fisher_information(scn, opts.theta, opts.h);
  } else if (opts.family == "gaussian") {
    if (!(opts.k >= 0.0)) throw ValidationError("fisher: k must be >= 0");
    const GaussianScenario base{0.0, 0.0, opts.k, opts.t};
    r = fisher_information(make_gaussian_overlap_function(base), opts.theta, opts.t, opts.h);
  } else {
    throw ValidationError("fisher: unknown family '" + opts.family + "'");
  }
  CsvTable table({"theta", "t", "fisher", "crb", "h", "richardson_error"});
  table.add_row({r.theta, r.t, r.fisher, r.crb, r.step_h, r.richardson_error_estimate});
  return table;
}

CsvTable spectrum_table(const Scenario& scenario) {
  auto eigenvalues = convergence_rate(scenario.pair).eigenvalues;
  std::sort(eigenvalues.begin(), eigenvalues.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() < b.imag();
  });
  CsvTable table({"re_lambda", "im_lambda"});
  for (const Complex& lam : eigenvalues) table.add_row({lam.real(), lam.imag()});
  return table;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrimination limits for hypotheses about open quantum systems.\n"
               "Units: hbar = 1, rates and times in units of the decay rate kappa.\n"
               "Exit codes: 0 ok, 1 I/O, 2 invalid input, 3 numerical failure.\n"
               "QHYPO_THREADS caps internal parallelism.",
               "qhypo"};
  app.require_subcommand(1);

  std::string scenario_path, out_path;
  std::optional<double> t_max;
  std::optional<int> steps;

  auto* disc = app.add_subcommand("discriminate",
                                  "Overlap and minimal error curve for a scenario.\n"
                                  "CSV columns: t, re_overlap, im_overlap, pe_min");
  disc->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  disc->add_option("--t-max", t_max, "Final time (overrides the scenario's time.t_max)");
  disc->add_option("--steps", steps, "Number of grid intervals (grid has steps + 1 points)");
  disc->add_option("--out", out_path, "Output CSV")->required();

  std::string target;
  std::optional<double> only_delta;
  auto* repro = app.add_subcommand(
      "reproduce",
      "Regenerate figure data.\n"
      "fig2: fig2.csv, columns t, pe_min, pe_counting, pe_counting_atom, pe_helstrom;\n"
      "      rabi 0 vs 4, kappa 1, t in [0, 5] with 500 intervals.\n"
      "fig3: fig3_delta_<d>.csv (omega, rate) for d in {0.5, 1, 1.5, 2, 2.5} and\n"
      "      fig3_summary.csv (delta, argmax_omega, max_rate); omega_i = 0.01 i, i = 1..150.");
  repro->add_option("target", target, "fig2 or fig3")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3"}));
  repro->add_option("--out", out_path, "Output directory")->required();
  repro->add_option("--delta", only_delta, "fig3: scan a single detuning");

  std::size_t n_traj = 1000;
  std::uint64_t seed = 0;
  double dt = 1e-3;
  auto* traj = app.add_subcommand("trajectories",
                                  "Quantum-jump ensemble estimate of the overlap next to the exact one.\n"
                                  "CSV columns: t, re_mean, im_mean, std_err, re_exact, im_exact");
  traj->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  traj->add_option("--n", n_traj, "Number of trajectories")->capture_default_str();
  traj->add_option("--seed", seed, "Random seed")->capture_default_str();
  traj->add_option("--dt", dt, "Jump step size")->capture_default_str();
  traj->add_option("--t-max", t_max, "Final time (default: scenario, else 5)");
  traj->add_option("--steps", steps, "Grid intervals (default: scenario, else 10)");
  traj->add_option("--out", out_path, "Output CSV")->required();

  FisherOptions fopts;
  auto* fisher = app.add_subcommand("fisher",
                                    "Fisher information and Cramer-Rao bound.\n"
                                    "CSV columns: theta, t, fisher, crb, h, richardson_error");
  // --h is the finite-difference step, so help is --help only here
  fisher->set_help_flag("--help", "Print this help message and exit");
  fisher->add_option("--family", fopts.family, "two_level_rabi | two_level_detuning | gaussian")
      ->required();
  fisher->add_option("--theta", fopts.theta, "Parameter value")->required();
  fisher->add_option("--t,--t-max", fopts.t, "Probe time")->capture_default_str();
  fisher->add_option("--h", fopts.h, "Finite-difference step")->capture_default_str();
  fisher->add_option("--kappa", fopts.kappa, "Decay rate (two-level families)")->capture_default_str();
  fisher->add_option("--rabi", fopts.rabi, "Drive for two_level_detuning")->capture_default_str();
  fisher->add_option("--detuning", fopts.detuning, "Detuning for two_level_rabi")->capture_default_str();
  fisher->add_option("--k", fopts.k, "Probe strength (gaussian)")->capture_default_str();
  fisher->add_option("--out", out_path, "Output CSV")->required();

  auto* spec = app.add_subcommand("spectrum",
                                  "Eigenvalues of the vectorized two-sided generator.\n"
                                  "CSV columns: re_lambda, im_lambda");
  spec->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  spec->add_option("--out", out_path, "Output CSV")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "qhypo: " << e.what() << "\n";
    return kInvalidInput;
  }

  try {
    if (disc->parsed()) {
      const Scenario s = load_scenario(scenario_path);
      const Grid g = resolve_grid(s, t_max, steps, {5.0, 500});
      discriminate_table(s, g.t_max, g.steps).write(out_path);
    } else if (repro->parsed()) {
      std::error_code ec;
      std::filesystem::create_directories(out_path, ec);
      if (ec) throw IoError("cannot create output directory '" + out_path + "'");
      const std::filesystem::path dir(out_path);
      if (target == "fig2") {
        fig2_table().write(dir / "fig2.csv");
      } else {
        const auto detunings = only_delta ? std::vector<double>{*only_delta} : kFig3Detunings;
        const Fig3Tables t = fig3_tables(detunings);
        for (std::size_t i = 0; i < t.detunings.size(); ++i)
          t.scans[i].write(dir / ("fig3_delta_" + delta_tag(t.detunings[i]) + ".csv"));
        t.summary.write(dir / "fig3_summary.csv");
      }
    } else if (traj->parsed()) {
      const Scenario s = load_scenario(scenario_path);
      const Grid g = resolve_grid(s, t_max, steps, {5.0, 10});
      trajectories_table(s, g.t_max, g.steps, {n_traj, seed, dt}).write(out_path);
    } else if (fisher->parsed()) {
      fisher_table(fopts).write(out_path);
    } else if (spec->parsed()) {
      spectrum_table(load_scenario(scenario_path)).write(out_path);
    }
  } catch (const IoError& e) {
    err << "qhypo: " << e.what() << "\n";
    return kIoFailure;
  } catch (const ValidationError& e) {
    err << "qhypo: invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const NumericalError& e) {
    err << "qhypo: numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kOk;
}

}  // namespace qhypo::cli
