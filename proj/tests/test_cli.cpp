// End-to-end checks of the command-line front-end: artifact emission,
// determinism under --seed, frozen reference values, and exit codes.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(AVWC_CLI_PATH) + " " + args + " 2>&1";
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe))
    res.output.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string data_path(const std::string& name) {
  return std::string(AVWC_DATA_DIR) + "/" + name;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: capacity on the degraded sample matches the closed form") {
  const auto json_path = temp_path("avwc_cli_cap.json");
  RunResult res = run_cli("capacity " + data_path("avwc_degraded.json") +
                          " --k 1 --restarts 12 --seed 3 --json " +
                          json_path.string());
  INFO(res.output);
  REQUIRE(res.exit_code == 0);
  CHECK(res.output.find("value:") != std::string::npos);

  std::ifstream in(json_path);
  REQUIRE(in.good());
  nlohmann::json doc = nlohmann::json::parse(in);
  const double h = [](double p) {
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
  }(0.2) - [](double p) {
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
  }(0.1);
  CHECK(std::abs(doc["value_bits_per_letter"].get<double>() - h) <= 2e-3);
  CHECK(doc["k"] == 1);
  std::filesystem::remove(json_path);
}

TEST_CASE("cli: hausdorff distance of a spec to itself is zero") {
  const std::string spec = data_path("avwc_two_state.json");
  RunResult res = run_cli("hausdorff " + spec + " " + spec);
  INFO(res.output);
  REQUIRE(res.exit_code == 0);
  CHECK(res.output.find("hausdorff distance: 0\n") != std::string::npos);
}

TEST_CASE("cli: simulate is byte-deterministic under a fixed seed") {
  const auto csv_a = temp_path("avwc_cli_sim_a.csv");
  const auto csv_b = temp_path("avwc_cli_sim_b.csv");
  const std::string args = "simulate " + data_path("cavwc_compound.json") +
                           " --n 6 --J 2 --L 4 --delta 0.3 --seed 7 --csv ";
  RunResult a = run_cli(args + csv_a.string());
  RunResult b = run_cli(args + csv_b.string());
  INFO(a.output);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(a.output == b.output);
  const std::string ta = slurp(csv_a), tb = slurp(csv_b);
  CHECK(ta == tb);
  CHECK(ta.rfind("n,tau,delta,alpha,J,L,seed,mode,message_error,pair_error,"
                 "worst_r\n", 0) == 0);
  CHECK(ta.find("\n6,") != std::string::npos);
  std::filesystem::remove(csv_a);
  std::filesystem::remove(csv_b);
}

TEST_CASE("cli: simulate derives code sizes when J and L are omitted") {
  RunResult res = run_cli("simulate " + data_path("avwc_two_state.json") +
                          " --n 4 --delta 0.3 --seed 2");
  INFO(res.output);
  REQUIRE(res.exit_code == 0);
  CHECK(res.output.find("derived sizes: J=1 L=1") != std::string::npos);
  CHECK(res.output.find("message error") != std::string::npos);
}

TEST_CASE("cli: audit emits one CSV row per sampled state word") {
  const auto csv = temp_path("avwc_cli_audit.csv");
  RunResult res = run_cli("audit " + data_path("cavwc_compound.json") +
                          " --n 4 --J 2 --L 2 --delta 0.3 --seed 5 --states 4 "
                          "--csv " + csv.string());
  INFO(res.output);
  REQUIRE(res.exit_code == 0);
  CHECK(res.output.find("max leakage:") != std::string::npos);
  std::istringstream lines(slurp(csv));
  std::string line;
  int rows = 0;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "s_n,leakage_bits,tv_audit,error");
  while (std::getline(lines, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 4);
  std::filesystem::remove(csv);
}

TEST_CASE("cli: robustify writes a manifest over the full symmetric group") {
  const auto manifest = temp_path("avwc_cli_manifest.json");
  const auto codebook = temp_path("avwc_cli_code.csv");
  RunResult res = run_cli("robustify " + data_path("avwc_two_state.json") +
                          " --n 3 --J 2 --L 2 --delta 0.5 --seed 9 --full "
                          "--eval --manifest " + manifest.string() +
                          " --code " + codebook.string());
  INFO(res.output);
  REQUIRE(res.exit_code == 0);
  CHECK(res.output.find("6 permutations") != std::string::npos);
  CHECK(res.output.find("worst-state message error:") != std::string::npos);

  std::ifstream in(manifest);
  REQUIRE(in.good());
  nlohmann::json doc = nlohmann::json::parse(in);
  CHECK(doc["n"] == 3);
  CHECK(doc["permutations"].size() == 6);
  CHECK(doc["base_code"] == codebook.string());
  CHECK(slurp(codebook).rfind("j,l,word\n", 0) == 0);
  std::filesystem::remove(manifest);
  std::filesystem::remove(codebook);
}

TEST_CASE("cli: structural checks print their verdicts") {
  RunResult deg = run_cli("degraded " + data_path("avwc_degraded.json"));
  INFO(deg.output);
  REQUIRE(deg.exit_code == 0);
  CHECK(deg.output.find("state 0: degraded") != std::string::npos);

  RunResult be = run_cli("best-eaves " + data_path("avwc_two_state.json"));
  INFO(be.output);
  REQUIRE(be.exit_code == 0);
  CHECK(be.output.find("best eavesdropper state: 0") != std::string::npos);
}

TEST_CASE("cli: rt-check derives the smallest workable epsilon") {
  RunResult res = run_cli("rt-check " + data_path("avwc_two_state.json") +
                          " --n 3 --J 2 --L 2 --delta 0.5 --seed 5");
  INFO(res.output);
  REQUIRE(res.exit_code == 0);
  CHECK(res.output.find("hypothesis: holds") != std::string::npos);
  CHECK(res.output.find("conclusion bound:") != std::string::npos);
}

TEST_CASE("cli: continuity writes per-trial rows") {
  const auto csv = temp_path("avwc_cli_cont.csv");
  RunResult res = run_cli("continuity " + data_path("avwc_degraded.json") +
                          " --radii 0.05 --trials 1 --restarts 4 --seed 2 "
                          "--csv " + csv.string());
  INFO(res.output);
  REQUIRE(res.exit_code == 0);
  const std::string text = slurp(csv);
  CHECK(text.rfind("radius,achieved_distance,delta_bits\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);  // header + one row
  std::filesystem::remove(csv);
}

TEST_CASE("cli: exit codes distinguish usage, parse, and budget failures") {
  SECTION("malformed spec files exit 2") {
    const auto bad = temp_path("avwc_cli_bad.json");
    std::ofstream(bad) << "{ not json";
    RunResult res = run_cli("capacity " + bad.string());
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("parse error:") != std::string::npos);
    std::filesystem::remove(bad);
  }

  SECTION("tiny budgets exit 3") {
    RunResult res = run_cli("capacity " + data_path("avwc_degraded.json") +
                            " --k 1 --budget 2");
    CHECK(res.exit_code == 3);
    CHECK(res.output.find("resource error:") != std::string::npos);
  }

  SECTION("a missing subcommand is a usage error") {
    RunResult res = run_cli("");
    CHECK(res.exit_code != 0);
    CHECK(res.output.find("subcommand") != std::string::npos);
  }

  SECTION("semantic spec errors also exit 2") {
    const auto bad = temp_path("avwc_cli_noB.json");
    std::ofstream(bad) << R"({"A": 2, "C": 2, "states": []})";
    RunResult res = run_cli("best-eaves " + bad.string());
    CHECK(res.exit_code == 2);
    std::filesystem::remove(bad);
  }
}
