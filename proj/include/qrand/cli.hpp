#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qrand/discord.hpp"
#include "qrand/io.hpp"
#include "qrand/locking.hpp"
#include "qrand/randomness.hpp"
#include "qrand/state.hpp"

// Command implementations behind the qrand binary. Each command writes to a
// caller-supplied stream and returns a process exit code:
//
//   0  success
//   1  a checked expectation missed its tolerance (bb84, verify-gap)
//   2  invalid input (file, flag value, malformed state)
//   3  results printed but an optimizer failed to converge
//
// Machine output is stable: tables and CSV use fixed 6-decimal formatting,
// --json emits shortest-round-trip doubles with sorted keys, so a fixed seed
// reproduces output byte for byte.

namespace qrand::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitNoConvergence = 3;

/// Largest accepted |(r_classical - r_quantum) - discord| before verify-gap
/// and the bb84 checks fail.
inline constexpr double kGapTolerance = 2e-3;

struct CommonOptions {
  std::string basis;      // z | x | computational | file:PATH; empty = command default
  int restarts = 0;       // 0 = per-search default (32; 64 for the discord search)
  int ensemble_size = 0;  // 0 = rank^2
  double tol = 1e-7;
  std::uint64_t seed = 0;
  bool json = false;
};

inline OptimizerConfig randomness_config(const CommonOptions& o) {
  OptimizerConfig cfg;
  if (o.restarts > 0) cfg.restarts = o.restarts;
  cfg.ensemble_size = o.ensemble_size;
  cfg.tol = o.tol;
  cfg.seed = o.seed;
  return cfg;
}

inline OptimizerConfig discord_config(const CommonOptions& o) {
  OptimizerConfig cfg = discord_defaults();
  if (o.restarts > 0) cfg.restarts = o.restarts;
  cfg.tol = o.tol;
  cfg.seed = o.seed;
  return cfg;
}

/// "z" and "computational" both name the computational basis in any
/// dimension; "x" is the qubit conjugate basis; "file:PATH" loads one.
inline Basis resolve_basis(const std::string& spec, Eigen::Index dim,
                           const Tolerances& tol = default_tolerances()) {
  if (spec.empty() || spec == "z" || spec == "computational") return Basis::computational(dim);
  if (spec == "x") {
    if (dim != 2) throw DimMismatch("basis \"x\" is defined for qubits only");
    return Basis::pauli_x();
  }
  if (spec.rfind("file:", 0) == 0) {
    Basis basis = io::load_basis(spec.substr(5), tol);
    if (basis.dim() != dim)
      throw DimMismatch("basis file has dimension " + std::to_string(basis.dim()) +
                        " but the state has dimension " + std::to_string(dim));
    return basis;
  }
  throw OutOfRange("unknown basis \"" + spec + "\" (want z, x, computational, or file:PATH)");
}

namespace detail {

inline std::string fixed6(double x) {
  if (std::abs(x) < 5e-7) x = 0.0;  // avoid "-0.000000"
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << x;
  return os.str();
}

inline std::string brief(double x) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(1) << x;
  return os.str();
}

inline const char* method_name(Method m) {
  switch (m) {
    case Method::closed_form: return "closed form";
    case Method::convex_roof_optimizer: return "convex-roof search";
    case Method::qubit_oracle: return "qubit oracle";
  }
  return "unknown";
}

inline io::json info_to_json(const OptimizerInfo& info) {
  return io::json{{"restarts", info.restarts_used},
                  {"iterations", info.best_iterations},
                  {"converged", info.converged}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// measures
// ---------------------------------------------------------------------------

inline int cmd_measures(const std::string& state_path, const CommonOptions& opts, bool with_discord,
                        std::ostream& out) {
  const DensityMatrix rho = io::load_state(state_path);
  const Basis basis = resolve_basis(opts.basis, rho.dim());
  const double total = shannon(measurement_distribution(rho, basis));

  RandomnessResult classical;
  RandomnessResult quantum;
  std::optional<GapReport> gap_report;
  if (with_discord) {
    gap_report = verify_gap(rho, basis, randomness_config(opts), discord_config(opts));
    classical = gap_report->classical;
    quantum = gap_report->quantum;
  } else {
    classical = r_classical(rho, basis, randomness_config(opts));
    quantum = r_quantum(rho, basis);
  }
  const double gap = classical.value - quantum.value;
  const bool converged =
      classical.info.converged && (!gap_report || gap_report->discord.info.converged);

  if (opts.json) {
    io::json j{{"dim", rho.dim()},
               {"total_entropy", total},
               {"r_classical", classical.value},
               {"r_quantum", quantum.value},
               {"gap", gap},
               {"method", detail::method_name(classical.method)},
               {"optimizer", detail::info_to_json(classical.info)},
               {"converged", converged}};
    if (gap_report) {
      j["discord"] = gap_report->discord.value;
      j["gap_residual"] = gap_report->residual;
      j["discord_optimizer"] = detail::info_to_json(gap_report->discord.info);
    }
    out << j.dump() << '\n';
  } else {
    out << "total entropy        = " << detail::fixed6(total) << '\n';
    out << "quantum randomness   = " << detail::fixed6(quantum.value) << '\n';
    out << "classical randomness = " << detail::fixed6(classical.value) << "   ("
        << detail::method_name(classical.method) << ")" << '\n';
    out << "gap                  = " << detail::fixed6(gap) << '\n';
    if (gap_report) {
      out << "discord              = " << detail::fixed6(gap_report->discord.value) << '\n';
      out << "gap residual         = " << detail::brief(gap_report->residual) << '\n';
    }
    if (!converged) out << "warning: optimizer did not converge" << '\n';
  }
  return converged ? kExitOk : kExitNoConvergence;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepRow {
  double v = 0.0;
  double r_c_closed = 0.0;
  double r_c_numeric = 0.0;
  double r_q = 0.0;
  double gap = 0.0;
  bool converged = true;
};

/// One row per grid point for the family rho(v) = v|+><+| + (1-v) I/2,
/// measured in the chosen qubit basis: the closed-form convex roof, its
/// numerically optimized value, and the relative-entropy measure.
inline std::vector<SweepRow> sweep_rows(double start, double stop, int steps,
                                        const CommonOptions& opts) {
  if (!(start >= 0.0) || !(stop <= 1.0) || !(start <= stop))
    throw OutOfRange("sweep range must satisfy 0 <= start <= stop <= 1");
  if (steps < 2) throw OutOfRange("sweep needs at least 2 steps");

  const Basis basis = resolve_basis(opts.basis, 2);
  const OptimizerConfig cfg = randomness_config(opts);
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    SweepRow row;
    row.v = start + (stop - start) * k / (steps - 1);
    const DensityMatrix rho = bloch_to_state({row.v, 0.0, 0.0});
    row.r_c_closed = r_classical_qubit(rho, basis);
    const RandomnessResult numeric = r_classical(rho, basis, cfg);
    row.r_c_numeric = numeric.value;
    row.r_q = r_quantum(rho, basis).value;
    row.gap = row.r_c_numeric - row.r_q;
    row.converged = numeric.info.converged;
    rows.push_back(row);
  }
  return rows;
}

inline int cmd_sweep(double start, double stop, int steps, const CommonOptions& opts,
                     std::ostream& out) {
  const std::vector<SweepRow> rows = sweep_rows(start, stop, steps, opts);
  out << "v,r_c_closed,r_c_numeric,r_q,gap" << '\n';
  bool converged = true;
  for (const SweepRow& row : rows) {
    out << detail::fixed6(row.v) << ',' << detail::fixed6(row.r_c_closed) << ','
        << detail::fixed6(row.r_c_numeric) << ',' << detail::fixed6(row.r_q) << ','
        << detail::fixed6(row.gap) << '\n';
    converged = converged && row.converged;
  }
  return converged ? kExitOk : kExitNoConvergence;
}

// ---------------------------------------------------------------------------
// bb84
// ---------------------------------------------------------------------------

struct Expectation {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;

  bool pass() const { return std::abs(value - expected) <= tolerance; }
};

inline int cmd_bb84(const CommonOptions& opts, std::ostream& out) {
  const LockingReport report =
      locking_report(bb84_scenario(), randomness_config(opts), discord_config(opts));

  const std::vector<Expectation> checks{
      {"key after measurement", report.key_after_measurement, 1.0, 1e-9},
      {"key before measurement", report.key_before_measurement, 1.5, 1e-3},
      {"locking advantage", report.locking_advantage, 0.5, kGapTolerance},
      {"gap residual", report.gap_residual, 0.0, kGapTolerance},
  };
  bool all_pass = true;
  for (const Expectation& c : checks) all_pass = all_pass && c.pass();

  if (opts.json) {
    io::json jchecks = io::json::array();
    for (const Expectation& c : checks)
      jchecks.push_back({{"name", c.name},
                         {"value", c.value},
                         {"expected", c.expected},
                         {"tolerance", c.tolerance},
                         {"pass", c.pass()}});
    io::json j{{"message_entropy", report.message_entropy},
               {"key_before_measurement", report.key_before_measurement},
               {"key_after_measurement", report.key_after_measurement},
               {"locking_advantage", report.locking_advantage},
               {"accessible_with_purification", report.accessible_with_purification},
               {"gap_residual", report.gap_residual},
               {"checks", std::move(jchecks)},
               {"pass", all_pass}};
    out << j.dump() << '\n';
  } else {
    out << "bb84 locking example" << '\n';
    out << "  message entropy              = " << detail::fixed6(report.message_entropy) << '\n';
    for (const Expectation& c : checks) {
      std::ostringstream name;
      name << std::left << std::setw(29) << c.name;
      out << "  " << name.str() << "= " << detail::fixed6(c.value) << "   expected "
          << detail::fixed6(c.expected) << " +- " << detail::brief(c.tolerance) << "  "
          << (c.pass() ? "ok" : "FAIL") << '\n';
    }
    out << "  accessible with purification = "
        << detail::fixed6(report.accessible_with_purification) << '\n';
    out << (all_pass ? "all checks passed" : "some checks FAILED") << '\n';
  }
  return all_pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// locking
// ---------------------------------------------------------------------------

inline int cmd_locking(const std::string& scenario_spec, const CommonOptions& opts,
                       std::ostream& out) {
  const EncodingScenario scenario =
      scenario_spec == "bb84" ? bb84_scenario() : io::load_scenario(scenario_spec);
  const LockingReport report =
      locking_report(scenario, randomness_config(opts), discord_config(opts));
  const bool converged = report.randomness_info.converged && report.discord_info.converged;
  const bool residual_ok = report.gap_residual <= kGapTolerance;

  if (opts.json) {
    io::json j{{"message_entropy", report.message_entropy},
               {"key_before_measurement", report.key_before_measurement},
               {"key_after_measurement", report.key_after_measurement},
               {"locking_advantage", report.locking_advantage},
               {"accessible_with_purification", report.accessible_with_purification},
               {"gap_residual", report.gap_residual},
               {"optimizer", detail::info_to_json(report.randomness_info)},
               {"discord_optimizer", detail::info_to_json(report.discord_info)}};
    out << j.dump() << '\n';
  } else {
    out << "locking report" << '\n';
    out << "  message entropy              = " << detail::fixed6(report.message_entropy) << '\n';
    out << "  key before measurement       = " << detail::fixed6(report.key_before_measurement)
        << '\n';
    out << "  key after measurement        = " << detail::fixed6(report.key_after_measurement)
        << '\n';
    out << "  locking advantage            = " << detail::fixed6(report.locking_advantage) << '\n';
    out << "  accessible with purification = "
        << detail::fixed6(report.accessible_with_purification) << '\n';
    out << "  gap residual                 = " << detail::brief(report.gap_residual)
        << (residual_ok ? "" : "  FAIL") << '\n';
    if (!converged) out << "warning: optimizer did not converge" << '\n';
  }
  if (!residual_ok) return kExitCheckFailed;
  return converged ? kExitOk : kExitNoConvergence;
}

// ---------------------------------------------------------------------------
// verify-gap
// ---------------------------------------------------------------------------

struct GapRow {
  double r_classical = 0.0;
  double r_quantum = 0.0;
  double discord = 0.0;
  double residual = 0.0;
  bool converged = true;
};

inline GapRow to_row(const GapReport& report) {
  GapRow row;
  row.r_classical = report.classical.value;
  row.r_quantum = report.quantum.value;
  row.discord = report.discord.value;
  row.residual = report.residual;
  row.converged = report.classical.info.converged && report.discord.info.converged;
  return row;
}

/// Seeded random instances: one draw stream produces, per state, a Bloch
/// vector uniform in the unit ball and (unless a fixed basis is forced) a
/// Haar-random measurement basis, so a fixed seed fixes the whole table.
inline std::vector<GapRow> verify_gap_random(int count, const CommonOptions& opts) {
  if (count < 1) throw OutOfRange("need at least one random state");
  const bool fixed_basis = !opts.basis.empty() && opts.basis != "random";
  Rng rng(opts.seed);
  std::vector<GapRow> rows;
  rows.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const DensityMatrix rho = bloch_to_state(random_bloch_in_ball(rng));
    const Basis basis = fixed_basis ? resolve_basis(opts.basis, 2) : random_basis(rng, 2);
    rows.push_back(to_row(verify_gap(rho, basis, randomness_config(opts), discord_config(opts))));
  }
  return rows;
}

inline int report_gap_rows(const std::vector<GapRow>& rows, const CommonOptions& opts,
                           std::ostream& out) {
  double max_residual = 0.0;
  bool converged = true;
  for (const GapRow& row : rows) {
    max_residual = std::max(max_residual, row.residual);
    converged = converged && row.converged;
  }
  const bool pass = max_residual <= kGapTolerance;

  if (opts.json) {
    io::json jrows = io::json::array();
    for (const GapRow& row : rows)
      jrows.push_back({{"r_classical", row.r_classical},
                       {"r_quantum", row.r_quantum},
                       {"discord", row.discord},
                       {"residual", row.residual},
                       {"converged", row.converged}});
    io::json j{{"states", std::move(jrows)},
               {"max_residual", max_residual},
               {"tolerance", kGapTolerance},
               {"pass", pass}};
    out << j.dump() << '\n';
  } else {
    for (std::size_t i = 0; i < rows.size(); ++i)
      out << "state " << std::setw(3) << i << ":  r_c = " << detail::fixed6(rows[i].r_classical)
          << "   r_q = " << detail::fixed6(rows[i].r_quantum)
          << "   discord = " << detail::fixed6(rows[i].discord)
          << "   residual = " << detail::brief(rows[i].residual) << '\n';
    out << "max residual = " << detail::brief(max_residual) << " (tolerance "
        << detail::brief(kGapTolerance) << "): " << (pass ? "ok" : "FAIL") << '\n';
  }
  if (!pass) return kExitCheckFailed;
  return converged ? kExitOk : kExitNoConvergence;
}

inline int cmd_verify_gap(const std::optional<std::string>& state_path, std::optional<int> random_count,
                          const CommonOptions& opts, std::ostream& out) {
  std::vector<GapRow> rows;
  if (state_path && !random_count) {
    const DensityMatrix rho = io::load_state(*state_path);
    const Basis basis = resolve_basis(opts.basis, rho.dim());
    rows.push_back(to_row(verify_gap(rho, basis, randomness_config(opts), discord_config(opts))));
  } else if (random_count && !state_path) {
    rows = verify_gap_random(*random_count, opts);
  } else {
    throw OutOfRange("give exactly one of a state file or --random N");
  }
  return report_gap_rows(rows, opts, out);
}

}  // namespace qrand::cli
