#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "qrand/cli.hpp"

namespace {

void add_common(CLI::App* sub, qrand::cli::CommonOptions& opts, bool with_ensemble = true) {
  sub->add_option("--basis", opts.basis,
                  "measurement basis: z, x, computational, or file:PATH");
  sub->add_option("--restarts", opts.restarts, "optimizer restarts (0 = per-search default)");
  if (with_ensemble)
    sub->add_option("--ensemble-size", opts.ensemble_size,
                    "decomposition size for the convex-roof search (0 = rank^2)");
  sub->add_option("--tol", opts.tol, "optimizer convergence tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--seed", opts.seed, "seed for every randomized choice");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randomness measures of projective measurements on quantum states"};
  app.require_subcommand(1);

  qrand::cli::CommonOptions measures_opts;
  std::string measures_state;
  bool measures_discord = false;
  CLI::App* measures = app.add_subcommand(
      "measures", "classical and quantum randomness of a measurement on a state");
  measures->add_option("state", measures_state, "state file (density or pure JSON)")->required();
  add_common(measures, measures_opts);
  measures->add_flag("--discord", measures_discord,
                     "also compute the discord of the post-measurement state");
  measures->add_flag("--json", measures_opts.json, "machine-readable output");

  qrand::cli::CommonOptions sweep_opts;
  double sweep_start = 0.0;
  double sweep_stop = 1.0;
  int sweep_steps = 21;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "CSV of both measures along rho(v) = v|+><+| + (1-v) I/2");
  sweep->add_option("--start", sweep_start, "first v value");
  sweep->add_option("--stop", sweep_stop, "last v value");
  sweep->add_option("--steps", sweep_steps, "number of grid points");
  add_common(sweep, sweep_opts);

  qrand::cli::CommonOptions bb84_opts;
  CLI::App* bb84 = app.add_subcommand(
      "bb84", "worked key-locking example on the four conjugate-basis states");
  add_common(bb84, bb84_opts, /*with_ensemble=*/false);
  bb84->add_flag("--json", bb84_opts.json, "machine-readable output");

  qrand::cli::CommonOptions locking_opts;
  std::string locking_scenario;
  CLI::App* locking = app.add_subcommand(
      "locking", "key sizes before/after measurement for an encoding scenario");
  locking
      ->add_option("scenario", locking_scenario,
                   "scenario file (probs/carriers JSON) or the preset name bb84")
      ->required();
  add_common(locking, locking_opts, /*with_ensemble=*/false);
  locking->add_flag("--json", locking_opts.json, "machine-readable output");

  qrand::cli::CommonOptions verify_opts;
  std::optional<std::string> verify_state;
  std::optional<int> verify_random;
  CLI::App* verify = app.add_subcommand(
      "verify-gap", "check r_classical - r_quantum against the discord of the measured purification");
  CLI::Option* verify_state_opt =
      verify->add_option("state", verify_state, "state file (density or pure JSON)");
  verify->add_option("--random", verify_random, "number of seeded random qubit instances")
      ->excludes(verify_state_opt);
  add_common(verify, verify_opts);
  verify->add_flag("--json", verify_opts.json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qrand::cli::kExitBadInput;
  }

  try {
    if (measures->parsed())
      return qrand::cli::cmd_measures(measures_state, measures_opts, measures_discord, std::cout);
    if (sweep->parsed())
      return qrand::cli::cmd_sweep(sweep_start, sweep_stop, sweep_steps, sweep_opts, std::cout);
    if (bb84->parsed()) return qrand::cli::cmd_bb84(bb84_opts, std::cout);
    if (locking->parsed())
      return qrand::cli::cmd_locking(locking_scenario, locking_opts, std::cout);
    if (verify->parsed())
      return qrand::cli::cmd_verify_gap(verify_state, verify_random, verify_opts, std::cout);
  } catch (const qrand::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qrand::cli::kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qrand::cli::kExitBadInput;
  }
  return qrand::cli::kExitBadInput;
}
