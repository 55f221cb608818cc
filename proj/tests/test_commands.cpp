#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hslab/commands.hpp"
#include "hslab/config.hpp"

using namespace hslab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hslab_test_" + name);
  fs::remove_all(p);
  return p;
}

RunConfig small(const std::string& family, const fs::path& out) {
  RunConfig c;
  c.weight.family = family;
  c.n = 65;
  c.samples = 2000;
  c.out = out.string();
  return c;
}

}  // namespace

TEST_CASE("command names") {
  const auto& names = command_names();
  for (const char* n : {"kernels", "flow", "expmap", "geodesic", "korenblum", "example7", "verify"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  std::ostringstream log;
  CHECK_THROWS(run_command("nope", RunConfig{}, log));
}

TEST_CASE("kernels writes its report") {
  const fs::path out = scratch("kernels");
  std::ostringstream log;
  const CommandResult r = run_command("kernels", small("flat", out), log);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out / "kernels.json"));
  const nlohmann::json j = nlohmann::json::parse(slurp(out / "kernels.json"));
  CHECK(j["command"] == "kernels");
  CHECK_FALSE(log.str().empty());
}

TEST_CASE("checks filter rows") {
  const fs::path out = scratch("filter");
  RunConfig c = small("flat", out);
  c.checks = {"positivity"};
  std::ostringstream log;
  const CommandResult r = run_command("kernels", c, log);
  REQUIRE_FALSE(r.report.rows.empty());
  for (const auto& row : r.report.rows) CHECK(row.check.rfind("positivity", 0) == 0);
  c.checks = {"no_such_check"};
  CHECK_THROWS_AS(run_command("kernels", c, log), Error);
}

TEST_CASE("flow snapshots and exit code") {
  const fs::path out = scratch("flow");
  RunConfig c = small("flat", out);
  c.t = {0.1, 0.3};
  std::ostringstream log;
  const CommandResult r = run_command("flow", c, log);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out / "snapshot_00.json"));
  CHECK(fs::exists(out / "snapshot_01.json"));
  CHECK(fs::exists(out / "report.json"));
}

TEST_CASE("artifacts do not depend on the output directory") {
  for (const char* cmd : {"kernels", "example7", "geodesic"}) {
    const fs::path a = scratch(std::string("det_a_") + cmd), b = scratch(std::string("det_b_") + cmd);
    RunConfig c = small(std::string(cmd) == "example7" ? "example7" : "poincare", a);
    std::ostringstream log;
    const CommandResult ra = run_command(cmd, c, log);
    c.out = b.string();
    const CommandResult rb = run_command(cmd, c, log);
    REQUIRE(ra.artifacts.size() == rb.artifacts.size());
    for (const std::string& path : ra.artifacts) {
      const fs::path name = fs::path(path).filename();
      INFO(cmd << " " << name.string());
      CHECK(slurp(a / name) == slurp(b / name));
    }
  }
}
