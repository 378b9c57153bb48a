#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "qrand/qrand.hpp"

using namespace qrand;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(QRAND_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) result.output.append(buf, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

struct TempFile {
  std::filesystem::path path;

  explicit TempFile(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {}
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("missing and malformed inputs exit with code 2") {
  REQUIRE(run_cli("measures /nonexistent/state.json").exit_code == 2);
  REQUIRE(run_cli("measures").exit_code == 2);
  REQUIRE(run_cli("").exit_code == 2);
  REQUIRE(run_cli("--no-such-flag").exit_code == 2);
  REQUIRE(run_cli("sweep --steps 1").exit_code == 2);
  REQUIRE(run_cli("sweep --start 0.8 --stop 0.2").exit_code == 2);
  REQUIRE(run_cli("sweep --stop 1.5").exit_code == 2);
  REQUIRE(run_cli("verify-gap").exit_code == 2);

  const TempFile state("qrand_cli_state.json");
  io::save_json(io::to_json(bloch_to_state({0.5, 0.0, 0.0})), state.path.string());
  REQUIRE(run_cli("measures " + state.path.string() + " --basis nonsense").exit_code == 2);
  REQUIRE(run_cli("measures " + state.path.string() + " --basis file:/nonexistent").exit_code == 2);
}

TEST_CASE("help exits cleanly") {
  REQUIRE(run_cli("--help").exit_code == 0);
  REQUIRE(run_cli("measures --help").exit_code == 0);
}

TEST_CASE("measures reports both quantities for a state file") {
  const TempFile state("qrand_cli_measures.json");
  io::save_json(io::to_json(bloch_to_state({0.5, 0.0, 0.0})), state.path.string());

  const CliResult text = run_cli("measures " + state.path.string());
  REQUIRE(text.exit_code == 0);
  REQUIRE_THAT(text.output, ContainsSubstring("classical randomness = 0.354579"));
  REQUIRE_THAT(text.output, ContainsSubstring("quantum randomness   = 0.188722"));

  const CliResult json = run_cli("measures " + state.path.string() + " --json");
  REQUIRE(json.exit_code == 0);
  const io::json j = io::json::parse(json.output);
  REQUIRE_THAT(j["r_classical"].get<double>(), WithinAbs(0.35457890266527003, 1e-5));
  REQUIRE_THAT(j["r_quantum"].get<double>(), WithinAbs(0.18872187554086717, 1e-9));
  REQUIRE_THAT(j["total_entropy"].get<double>(), WithinAbs(1.0, 1e-9));
  REQUIRE(j["converged"].get<bool>());
}

TEST_CASE("measures accepts pure-state files and basis selection") {
  const TempFile state("qrand_cli_pure.json");
  Vector plus(2);
  plus << 0.7071067811865476, 0.7071067811865476;
  io::save_json(io::to_json(PureState(plus)), state.path.string());

  const CliResult z = run_cli("measures " + state.path.string() + " --json");
  REQUIRE_THAT(io::json::parse(z.output)["r_classical"].get<double>(), WithinAbs(1.0, 1e-9));

  const CliResult x = run_cli("measures " + state.path.string() + " --basis x --json");
  REQUIRE_THAT(io::json::parse(x.output)["r_classical"].get<double>(), WithinAbs(0.0, 1e-9));

  const TempFile basis_file("qrand_cli_basis.json");
  io::save_json(io::to_json(Basis::pauli_x()), basis_file.path.string());
  const CliResult from_file =
      run_cli("measures " + state.path.string() + " --basis file:" + basis_file.path.string() + " --json");
  REQUIRE_THAT(io::json::parse(from_file.output)["r_classical"].get<double>(), WithinAbs(0.0, 1e-9));
}

TEST_CASE("measures --discord appends the gap identity quantities") {
  const TempFile state("qrand_cli_discord.json");
  io::save_json(io::to_json(bloch_to_state({0.3, -0.2, 0.4})), state.path.string());

  const CliResult result = run_cli("measures " + state.path.string() + " --discord --json");
  REQUIRE(result.exit_code == 0);
  const io::json j = io::json::parse(result.output);
  REQUIRE_THAT(j["discord"].get<double>(), WithinAbs(0.11029782939428986, 1e-4));
  REQUIRE(j["gap_residual"].get<double>() <= 2e-3);
}

TEST_CASE("sweep emits the pinned CSV header and exact endpoints") {
  const CliResult result = run_cli("sweep --steps 5");
  REQUIRE(result.exit_code == 0);

  std::istringstream lines(result.output);
  std::string line;
  std::getline(lines, line);
  REQUIRE(line == "v,r_c_closed,r_c_numeric,r_q,gap");

  std::getline(lines, line);
  REQUIRE(line == "0.000000,0.000000,0.000000,0.000000,0.000000");

  int rows = 1;
  std::string last = line;
  while (std::getline(lines, line))
    if (!line.empty()) {
      last = line;
      ++rows;
    }
  REQUIRE(rows == 5);
  // v = 1: both measures reach a full bit
  REQUIRE(last == "1.000000,1.000000,1.000000,1.000000,0.000000");
}

TEST_CASE("bb84 reports its expected values and exits zero") {
  const CliResult text = run_cli("bb84");
  REQUIRE(text.exit_code == 0);
  REQUIRE_THAT(text.output, ContainsSubstring("all checks passed"));

  const CliResult json = run_cli("bb84 --json");
  REQUIRE(json.exit_code == 0);
  const io::json j = io::json::parse(json.output);
  REQUIRE(j["pass"].get<bool>());
  REQUIRE_THAT(j["key_before_measurement"].get<double>(), WithinAbs(1.5, 1e-3));
  REQUIRE_THAT(j["key_after_measurement"].get<double>(), WithinAbs(1.0, 1e-9));
  REQUIRE_THAT(j["locking_advantage"].get<double>(), WithinAbs(0.5, 2e-3));
}

TEST_CASE("locking accepts the bb84 preset name and scenario files") {
  const CliResult preset = run_cli("locking bb84 --json");
  REQUIRE(preset.exit_code == 0);
  const io::json pj = io::json::parse(preset.output);
  REQUIRE_THAT(pj["key_before_measurement"].get<double>(), WithinAbs(1.5, 1e-3));
  REQUIRE_THAT(pj["key_after_measurement"].get<double>(), WithinAbs(1.0, 1e-9));

  const TempFile scenario("qrand_cli_scenario.json");
  EncodingScenario two = make_scenario(
      ProbDist{{0.5, 0.5}},
      {PureState::basis_state(2, 0), PureState((Vector(2) << 1.0, 1.0).finished() / std::sqrt(2.0))});
  io::save_json(io::to_json(two), scenario.path.string());

  const CliResult file = run_cli("locking " + scenario.path.string() + " --json --seed 2");
  REQUIRE(file.exit_code == 0);
  const io::json fj = io::json::parse(file.output);
  REQUIRE_THAT(fj["message_entropy"].get<double>(), WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(fj["key_before_measurement"].get<double>(), WithinAbs(0.6008760366928562, 1e-4));
  REQUIRE_THAT(fj["key_after_measurement"].get<double>(), WithinAbs(0.39912396330714384, 1e-9));
  REQUIRE_THAT(fj["locking_advantage"].get<double>(), WithinAbs(0.20175207338571233, 2e-3));
  REQUIRE(fj["gap_residual"].get<double>() <= 2e-3);

  const CliResult text = run_cli("locking " + scenario.path.string());
  REQUIRE(text.exit_code == 0);
  REQUIRE_THAT(text.output, ContainsSubstring("key before measurement"));

  REQUIRE(run_cli("locking").exit_code == 2);
  REQUIRE(run_cli("locking /nonexistent/scenario.json").exit_code == 2);
}

TEST_CASE("verify-gap runs on files and on seeded random instances") {
  const TempFile state("qrand_cli_gap.json");
  io::save_json(io::to_json(bloch_to_state({0.3, -0.2, 0.4})), state.path.string());

  const CliResult file = run_cli("verify-gap " + state.path.string() + " --json");
  REQUIRE(file.exit_code == 0);
  REQUIRE(io::json::parse(file.output)["pass"].get<bool>());

  const CliResult random = run_cli("verify-gap --random 3 --json --seed 7");
  REQUIRE(random.exit_code == 0);
  const io::json j = io::json::parse(random.output);
  REQUIRE(j["states"].size() == 3);
  REQUIRE(j["max_residual"].get<double>() <= 2e-3);

  REQUIRE(run_cli("verify-gap " + state.path.string() + " --random 2").exit_code == 2);
}

TEST_CASE("fixed seeds reproduce output byte for byte") {
  const CliResult a = run_cli("verify-gap --random 2 --json --seed 3");
  const CliResult b = run_cli("verify-gap --random 2 --json --seed 3");
  REQUIRE(a.exit_code == 0);
  REQUIRE(a.output == b.output);

  const CliResult s1 = run_cli("sweep --steps 5 --seed 1");
  const CliResult s2 = run_cli("sweep --steps 5 --seed 1");
  REQUIRE(s1.output == s2.output);
}
