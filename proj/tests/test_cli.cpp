#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "pfc3d/io.hpp"
#include "support.hpp"

using pfc3d::cli::cli_main;
namespace ec = pfc3d::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "pfc3d");
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

const char* kSmall = R"({
  "m": 8, "L": 3.2, "epsilon": 0.025, "tau": 0.001, "n_steps": 3,
  "init": "random", "seed": 1, "nu1": 2, "nu2": 2, "tol": 1e-8
})";

}  // namespace

TEST_CASE("verify reports counts and succeeds") {
  const Result r = invoke({"verify", "--suite", "energy", "--instances", "2"});
  CHECK(r.code == ec::kOk);
  CHECK(contains(r.out, "verify: "));
  CHECK(contains(r.out, "0 failures -> PASS"));
  CHECK(contains(r.out, "energy_even"));
}

TEST_CASE("usage errors exit with code 2") {
  const Result none = invoke({});
  CHECK(none.code == ec::kConfigError);
  CHECK(none.err.rfind("pfc3d: error: ", 0) == 0);

  const Result bad = invoke({"frobnicate"});
  CHECK(bad.code == ec::kConfigError);
  CHECK(contains(bad.err, "pfc3d: error: "));
  CHECK(contains(bad.err, "run"));
  CHECK(contains(bad.err, "verify"));

  CHECK(invoke({"run"}).code == ec::kConfigError);
  CHECK(invoke({"--threads", "0", "verify"}).code == ec::kConfigError);
  CHECK(invoke({"verify", "--suite", "nonsense"}).code == ec::kConfigError);
}

TEST_CASE("help exits cleanly") {
  const Result r = invoke({"--help"});
  CHECK(r.code == ec::kOk);
  CHECK(contains(r.out, "converge"));
}

TEST_CASE("missing or invalid config files exit with code 2") {
  const Result r = invoke({"run", "--config", "/nonexistent/cfg.json"});
  CHECK(r.code == ec::kConfigError);
  CHECK(contains(r.err, "pfc3d: error: "));
  CHECK(contains(r.err, "cfg.json"));

  const auto dir = testing::temp_dir("cli_bad");
  std::ofstream(dir / "bad.json") << R"({"m": 8})";
  const Result b = invoke({"run", "--config", (dir / "bad.json").string()});
  CHECK(b.code == ec::kConfigError);
  CHECK(contains(b.err, "'L'"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("run writes outputs and honours the seed override") {
  const auto dir = testing::temp_dir("cli_run");
  std::ofstream(dir / "small.json") << kSmall;
  const Result r = invoke({"--seed", "77", "run", "--config", (dir / "small.json").string(), "--output",
                           (dir / "out").string()});
  CHECK(r.code == ec::kOk);
  CHECK(contains(r.out, "stability violations = 0"));
  CHECK(std::filesystem::exists(dir / "out" / "energy.csv"));
  std::ifstream rj(dir / "out" / "report.json");
  const auto j = nlohmann::json::parse(rj);
  CHECK(j["config"]["seed"] == 77);

  // A second run into the same directory while locked fails as a solver-side error.
  {
    const pfc3d::DirectoryLock lock(dir / "out");
    const Result locked = invoke({"run", "--config", (dir / "small.json").string(), "--output", (dir / "out").string()});
    CHECK(locked.code == ec::kSolverFailure);
    CHECK(contains(locked.err, "locked"));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("non-convergence exits with code 1") {
  const auto dir = testing::temp_dir("cli_nc");
  std::ofstream(dir / "nc.json") << R"({
    "m": 8, "L": 3.2, "epsilon": 0.025, "tau": 0.001, "n_steps": 3,
    "init": "smooth", "nu1": 1, "nu2": 0, "tol": 1e-15, "max_cycles": 1
  })";
  const Result r = invoke({"run", "--config", (dir / "nc.json").string()});
  CHECK(r.code == ec::kSolverFailure);
  CHECK(contains(r.err, "pfc3d: error: "));
  std::filesystem::remove_all(dir);
}

TEST_CASE("complexity subcommand prints a table") {
  const auto dir = testing::temp_dir("cli_cx");
  std::ofstream(dir / "cx.json") << R"({
    "grids": [4, 8], "L": 3.2, "epsilon": 0.025, "tau": 0.001, "n_steps": 2,
    "init": "smooth", "smoothing": [[2, 2]], "tol": 1e-8, "coarsest_m": 2
  })";
  const Result r = invoke({"complexity", "--config", (dir / "cx.json").string(), "--output", (dir / "o").string()});
  CHECK(r.code == ec::kOk);
  CHECK(contains(r.out, "nu1,nu2,m4,m8"));
  CHECK(std::filesystem::exists(dir / "o" / "complexity.csv"));
  CHECK(std::filesystem::exists(dir / "o" / "residuals.csv"));
  std::filesystem::remove_all(dir);
}
