#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

// Drives the installed binary through a shell; PULSELOOP_CLI_PATH is injected
// by the build.

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  std::filesystem::create_directories("cli_out");
  const std::string out = "cli_out/stdout_" + std::to_string(counter) + ".txt";
  const std::string err = "cli_out/stderr_" + std::to_string(counter) + ".txt";
  ++counter;

  std::string cmd;
  if (!env_prefix.empty()) cmd += env_prefix + " ";
  cmd += std::string(PULSELOOP_CLI_PATH) + " " + args + " >" + out + " 2>" + err;

  RunResult r;
  const int rc = std::system(cmd.c_str());
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> cells_of(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  return cells;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

constexpr const char* kReflectProfile =
    R"({"kind": "piecewise_sine", "f0": 0.1, "g0": 0.1, "xi": 5, "eta": 5})";
constexpr const char* kShiftProfile =
    R"({"kind": "global_sine", "f0": 0.1, "g0": 0.1, "xi": 5, "eta": 5})";

}  // namespace

TEST_CASE("simulate writes the trajectory CSV schema", "[cli]") {
  const RunResult r = run_cli("simulate --steps 512");
  REQUIRE(r.exit_code == 0);
  const std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines[0] == "t,nx,ny,nz,re_c0,im_c0,re_c1,im_c1");
  REQUIRE(lines.size() == 1 + 513);

  const std::vector<std::string> first = cells_of(lines[1]);
  REQUIRE(std::stod(first[0]) == 0.0);
  REQUIRE(std::abs(std::stod(first[2]) - 1.0) < 1e-12);  // default basis +y
  const std::vector<std::string> last = cells_of(lines.back());
  REQUIRE(std::stod(last[0]) == 1.0);
  REQUIRE(std::abs(std::stod(last[2]) - 1.0) < 1e-6);  // cyclic composite
}

TEST_CASE("simulate honors --out, --every and a fluctuation profile", "[cli]") {
  write_file("cli_out/reflect.json", kReflectProfile);
  const RunResult r = run_cli(
      "simulate --steps 1024 --every 64 --profile cli_out/reflect.json --out cli_out/traj.csv");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.empty());
  const std::vector<std::string> lines = lines_of(slurp("cli_out/traj.csv"));
  REQUIRE(lines[0] == "t,nx,ny,nz,re_c0,im_c0,re_c1,im_c1");
  // 1025 nodes, every 64th; the final node 1024 falls on the stride
  REQUIRE(lines.size() == 1 + 17);
  const std::vector<std::string> last = cells_of(lines.back());
  REQUIRE(std::stod(last[0]) == 1.0);
  REQUIRE(std::abs(std::stod(last[2]) - 1.0) < 1e-6);
}

TEST_CASE("simulate rejects bad configuration with exit 2", "[cli]") {
  REQUIRE(run_cli("simulate --seq 90q").exit_code == 2);
  REQUIRE(run_cli("simulate --steps 100").exit_code == 2);
  REQUIRE(run_cli("simulate --every 0 --steps 512").exit_code == 2);
  REQUIRE(run_cli("simulate --f0 0.5 --steps 512").exit_code == 2);
  REQUIRE(run_cli("simulate --no-such-flag").exit_code == 2);
  const RunResult r = run_cli("simulate --seq 90q");
  REQUIRE(r.err.find("token 1") != std::string::npos);
}

TEST_CASE("simulate rejects an inadmissible profile with exit 2", "[cli]") {
  write_file("cli_out/bad_profile.json",
             R"({"kind": "tabulated", "samples": [[0,0,0],[0.5,0.1,0],[1,0.2,0]]})");
  const RunResult r = run_cli("simulate --steps 512 --profile cli_out/bad_profile.json");
  REQUIRE(r.exit_code == 2);
  REQUIRE(r.err.find("profile rejected") != std::string::npos);
}

TEST_CASE("PULSELOOP_STEPS is honored and the flag wins", "[cli]") {
  const RunResult env_only = run_cli("simulate", "PULSELOOP_STEPS=1024");
  REQUIRE(env_only.exit_code == 0);
  REQUIRE(lines_of(env_only.out).size() == 1 + 1025);

  const RunResult flag_wins = run_cli("simulate --steps 512", "PULSELOOP_STEPS=1024");
  REQUIRE(flag_wins.exit_code == 0);
  REQUIRE(lines_of(flag_wins.out).size() == 1 + 513);

  const RunResult bad_env = run_cli("simulate", "PULSELOOP_STEPS=abc");
  REQUIRE(bad_env.exit_code == 2);
  REQUIRE(bad_env.err.find("PULSELOOP_STEPS") != std::string::npos);
}

TEST_CASE("phases prints a readable decomposition", "[cli]") {
  const RunResult r = run_cli("phases --steps 2048");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("n+: total") != std::string::npos);
  REQUIRE(r.out.find("n-: total") != std::string::npos);
  REQUIRE(r.out.find("geometric") != std::string::npos);
  REQUIRE(r.out.find("gate reconstruction error") != std::string::npos);
}

TEST_CASE("phases --json reports the gate and the grid", "[cli]") {
  write_file("cli_out/shift.json", kShiftProfile);
  const RunResult r = run_cli("phases --json --steps 4096 --profile cli_out/shift.json");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j.at("sequence") == "90x 180y 90x");
  REQUIRE(j.at("steps") == 4096);
  REQUIRE(j.at("profile").at("kind") == "global_sine");
  const double gg = j.at("gate").at("plus").at("gamma_geometric").get<double>();
  REQUIRE(std::abs(gg + std::acos(-1.0) / 2.0) < 1e-5);
  REQUIRE(j.at("gate").at("unitary").size() == 2);
}

TEST_CASE("phases refuses a basis the drive tilts into", "[cli]") {
  const RunResult r = run_cli("phases --seq 360x --basis 1,0,0 --steps 512");
  REQUIRE(r.exit_code == 1);
  REQUIRE(r.err.find("m(t) . n(t) = 0") != std::string::npos);

  // same drive with the orthogonal basis is fine
  const RunResult ok = run_cli("phases --seq 360x --basis 0,1,0 --steps 2048");
  REQUIRE(ok.exit_code == 0);
}

TEST_CASE("phases maps config errors to exit 2", "[cli]") {
  REQUIRE(run_cli("phases --profile cli_out/definitely_missing.json").exit_code == 2);
  REQUIRE(run_cli("phases --basis 1,0").exit_code == 2);
  REQUIRE(run_cli("phases --f0 0.3").exit_code == 2);
}

TEST_CASE("papercheck verdicts are consistent with its exit code", "[cli]") {
  const RunResult r = run_cli("papercheck --json");
  const nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j.at("steps") == 16384);
  REQUIRE(j.at("criteria").size() == 10);

  bool all_blocking_pass = true;
  for (const auto& c : j.at("criteria")) {
    if (c.at("blocking").get<bool>() && !c.at("passed").get<bool>()) all_blocking_pass = false;
    // every blocking criterion except the reference-endpoint row must pass
    if (c.at("index").get<int>() != 6) REQUIRE(c.at("passed").get<bool>());
  }
  REQUIRE(j.at("all_blocking_pass").get<bool>() == all_blocking_pass);
  REQUIRE(r.exit_code == (all_blocking_pass ? 0 : 1));
}

TEST_CASE("papercheck table mode prints one row per criterion", "[cli]") {
  const RunResult r = run_cli("papercheck --steps 2048");
  REQUIRE((r.exit_code == 0 || r.exit_code == 1));
  const std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 11);
  REQUIRE(lines.back().rfind("overall:", 0) == 0);
  REQUIRE(lines.back().find("2048 steps") != std::string::npos);
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    const bool verdict = lines[i].find("PASS") != std::string::npos ||
                         lines[i].find("FAIL") != std::string::npos ||
                         lines[i].find("REPORT") != std::string::npos;
    REQUIRE(verdict);
  }
  REQUIRE(run_cli("papercheck --steps 16").exit_code == 2);
}

TEST_CASE("sweep writes one CSV row per grid point", "[cli]") {
  const RunResult r = run_cli(
      "sweep --family global_sine --f0 0,0.1 --g0 0.1 --xi 5 --eta 5 --steps 2048 "
      "--out cli_out/sweep.csv");
  REQUIRE(r.exit_code == 0);
  const std::vector<std::string> lines = lines_of(slurp("cli_out/sweep.csv"));
  REQUIRE(lines.size() == 3);
  REQUIRE(lines[0].rfind("family,f0,g0,xi,eta,status,symmetry,", 0) == 0);
  REQUIRE(cells_of(lines[1])[0] == "global_sine");
  REQUIRE(cells_of(lines[1])[5] == "ok");
  REQUIRE(cells_of(lines[2])[1] == "0.1");
}

TEST_CASE("sweep validates family and grid lists", "[cli]") {
  REQUIRE(run_cli("sweep --family mystery --f0 0.1 --g0 0.1 --xi 5 --eta 5").exit_code == 2);
  REQUIRE(run_cli("sweep --family global_sine --g0 0.1 --xi 5 --eta 5").exit_code == 2);
  REQUIRE(run_cli("sweep --family global_sine --f0 0.1 --g0 0.1 --xi 5.5 --eta 5").exit_code ==
          2);
}

TEST_CASE("sweep agrees with phases on a shared point", "[cli]") {
  write_file("cli_out/shift_point.json", kShiftProfile);
  const RunResult ph =
      run_cli("phases --json --steps 4096 --profile cli_out/shift_point.json");
  REQUIRE(ph.exit_code == 0);
  const double from_phases = nlohmann::json::parse(ph.out)
                                 .at("gate")
                                 .at("plus")
                                 .at("gamma_geometric")
                                 .get<double>();

  const RunResult sw = run_cli(
      "sweep --family global_sine --f0 0.1 --g0 0.1 --xi 5 --eta 5 --steps 4096 "
      "--out cli_out/sweep_point.csv");
  REQUIRE(sw.exit_code == 0);
  const std::vector<std::string> lines = lines_of(slurp("cli_out/sweep_point.csv"));
  REQUIRE(lines.size() == 2);
  const std::vector<std::string> header = cells_of(lines[0]);
  const std::vector<std::string> row = cells_of(lines[1]);
  double from_sweep = 0.0;
  bool found = false;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == "gamma_geometric_plus") {
      from_sweep = std::stod(row[i]);
      found = true;
    }
  REQUIRE(found);
  REQUIRE(std::abs(from_sweep - from_phases) < 1e-11);
}

TEST_CASE("help exits cleanly", "[cli]") {
  REQUIRE(run_cli("--help").exit_code == 0);
  REQUIRE(run_cli("simulate --help").exit_code == 0);
  REQUIRE(run_cli("").exit_code == 2);
}
