#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct Run {
  int status = -1;
  std::string out;  // stdout and stderr together
};

std::string env_or(const char* name, const char* fallback) {
  const char* v = std::getenv(name);
  return v ? v : fallback;
}

Run mplab(const std::string& args) {
  const std::string cmd = env_or("MPLAB_CLI", "build/mplab") + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) r.out += buf.data();
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string data(const char* name) { return env_or("MPLAB_DATA", "tests/data") + "/" + name; }

// Drops the resolved `out` line, the one place two runs with different --out differ.
std::string without_out(const std::string& s) {
  const auto at = s.find("# out=");
  if (at == std::string::npos) return s;
  return s.substr(0, at) + s.substr(s.find('\n', at) + 1);
}

bool has(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("verify-info passes on the corpus and the protocol suite") {
  const auto r = mplab("verify-info --tables 60");
  CHECK(r.status == 0);
  CHECK(has(r.out, "# resolved config"));
  CHECK_FALSE(has(r.out, "VIOLATION"));
}

TEST_CASE("verify-info Monte Carlo embedding mode") {
  const auto r = mplab("verify-info --tables 5 --mode mc --samples 200000");
  CHECK(r.status == 0);
  CHECK(has(r.out, "fields_outside_4se=0"));
  CHECK(mplab("verify-info --mode sampled").status == 2);
}

TEST_CASE("verify-info names every violated identity of a corrupted table") {
  const auto r = mplab("verify-info --table " + data("corrupted_table.txt"));
  CHECK(r.status == 1);
  CHECK(has(r.out, "chain-rule"));
  CHECK(has(r.out, "kl-mi-identity"));
}

TEST_CASE("translate-circuit") {
  const auto ok = mplab("translate-circuit --circuit " + data("depth2.circuit") + " --r 8");
  CHECK(ok.status == 0);
  CHECK(has(ok.out, "status\tok"));

  const auto bad = mplab("translate-circuit --circuit " + data("corrupted.circuit"));
  CHECK(bad.status == 2);
  CHECK(has(bad.out, "line 10"));

  CHECK(mplab("translate-circuit --circuit /nonexistent/file.circuit").status == 2);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(mplab("").status == 2);
  CHECK(mplab("bench-multiphase --bogus").status == 2);
  CHECK(mplab("bench-multiphase --n 0").status == 2);
  CHECK(mplab("cutpaste --gamma 0.5 --restarts 1").status == 2);
}

TEST_CASE("bench-multiphase is deterministic and writes its files") {
  const auto dir = std::filesystem::temp_directory_path() / "mplab_cli_test";
  std::filesystem::remove_all(dir);
  const std::string args = "--seed 4 bench-multiphase --n 256 --k 16 --instances 3 --queries 12";
  const auto a = mplab(args + " --out " + dir.string());
  const auto b = mplab(args);
  CHECK(a.status == 0);
  CHECK(without_out(a.out) == without_out(b.out));
  CHECK(has(a.out, "sqrt_scheme"));
  CHECK(std::filesystem::exists(dir / "bench.csv"));
  std::ifstream csv(dir / "bench.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(has(header, "p99_tq"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("cutpaste small run") {
  const auto r = mplab("cutpaste --gamma 1e-3 --restarts 2 --iterations 300 --z 4 --resolution 100");
  CHECK(r.status == 0);
  CHECK(has(r.out, "answer_channel_floor"));
  CHECK(has(r.out, "violations\t0"));
}

TEST_CASE("cutpaste with loose slack finds feasible kernels") {
  const auto r = mplab("cutpaste --gamma 1e-2 --eps 10 --restarts 4 --z 2 --resolution 100");
  CHECK(r.status == 0);
  CHECK(has(r.out, "search\t|Z|=2\tfeasible"));
}
