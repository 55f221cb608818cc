#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hslab/config.hpp"

using namespace hslab;

TEST_CASE("a minimal document takes the defaults") {
  const RunConfig c = parse_config("weight = flat\n");
  CHECK(c.n == 513);
  CHECK(c.alpha == 0.5);
  CHECK(c.weight.family == "flat");
  CHECK(c.checks == std::vector<std::string>{"all"});
  CHECK(c.seed == 7);
  CHECK(c.tol("hausdorff_factor") > 0.0);
  CHECK_THROWS(c.tol("no_such_tolerance"));
}

TEST_CASE("sections and lists") {
  const RunConfig c = parse_config(
      "weight = example7\n"
      "c = 0.01\n"
      "alpha = 1\n"
      "n = 257\n"
      "t = [0.1, 0.2, 0.4]\n"
      "checks = [mean_value, area]\n"
      "\n"
      "[expmap]\n"
      "z0 = [0.3, -0.1]\n"
      "n_theta = 12\n"
      "[tolerances]\n"
      "termination_abs = 0.02\n");
  CHECK(c.n == 257);
  CHECK(c.t == std::vector<double>{0.1, 0.2, 0.4});
  CHECK(c.checks.size() == 2);
  CHECK(c.z0 == Complex(0.3, -0.1));
  CHECK(c.n_theta == 12);
  CHECK(c.tol("termination_abs") == 0.02);
  CHECK(c.weight.make().id() == WeightSpec::example7(0.01, 1).id());
}

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

TEST_CASE("errors carry line numbers") {
  CHECK(error_line("weight = flat\nt = [0.3, 0.1]\n") == 2);
  CHECK(error_line("weight = flat\n\nbogus = 1\n") == 3);
  CHECK(error_line("weight = flat\n[flow]\ntermination = maybe\n") == 3);
  CHECK(error_line("weight = flat\n[tolerances]\nnope = 1\n") == 3);
  CHECK(error_line("n = 64\n") == 1);
  CHECK(error_line("weight = wobbly\n") == 1);
  CHECK_THROWS_AS(load_config("/nonexistent/run.ini"), ParseError);
}

TEST_CASE("validation") {
  RunConfig c;
  CHECK_NOTHROW(validate(c));
  c.t = {0.2, 0.2};
  CHECK_THROWS_AS(validate(c), ParseError);
  c.t = {};
  c.z0 = 1.0;
  CHECK_THROWS_AS(validate(c), ParseError);
  c.z0 = 0.0;
  c.p = 1.0;
  CHECK_THROWS_AS(validate(c), ParseError);
}

TEST_CASE("real lists") {
  CHECK(parse_real_list("0.1,0.2") == std::vector<double>{0.1, 0.2});
  CHECK(parse_real_list("[1, 2.5]") == std::vector<double>{1, 2.5});
  CHECK_THROWS(parse_real_list("1,x"));
}

TEST_CASE("json form omits the output directory") {
  RunConfig c;
  c.out = "somewhere";
  const nlohmann::json j = c.to_json();
  CHECK_FALSE(j.contains("out"));
  CHECK(j.contains("weight"));
}
