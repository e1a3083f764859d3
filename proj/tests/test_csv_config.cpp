#include <doctest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fracepi/config.hpp"
#include "fracepi/csv.hpp"
#include "fracepi/errors.hpp"

using namespace fracepi;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 10000; ++k) {
    const double v = u(rng) * std::pow(10.0, (k % 41) - 20);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.10000000000000001");
  const double tiny = std::numeric_limits<double>::denorm_min();
  const std::string text = format_double(tiny);
  double back = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), back);
  CHECK(back == tiny);
}

TEST_CASE("trajectory CSV round-trip is bit-exact") {
  Trajectory t;
  t.alpha = 0.9;
  t.step = 0.1;
  t.times = Eigen::VectorXd::LinSpaced(50, 0.0, 4.9);
  t.states = Eigen::MatrixXd::Random(50, 3).cwiseAbs() * 37.0;
  std::ostringstream os;
  write_trajectory_csv(os, t);
  const std::string text = os.str();
  CHECK(text.rfind("t,S,I,P\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);

  std::istringstream is(text);
  const Trajectory back = read_trajectory_csv(is);
  CHECK(back.times == t.times);
  CHECK(back.states == t.states);
  CHECK(back.step == doctest::Approx(0.1));

  std::ostringstream again;
  write_trajectory_csv(again, back);
  CHECK(again.str() == text);
}

TEST_CASE("malformed CSV input") {
  auto read = [](const std::string& s) {
    std::istringstream is(s);
    return read_trajectory_csv(is);
  };
  CHECK_THROWS_AS(read(""), ValidationError);
  CHECK_THROWS_AS(read("x,S,I,P\n0,1,2,3\n"), ValidationError);
  CHECK_THROWS_WITH_AS(read("t,S,I,P\n0,1,2,3\n0.1,1,2\n"), doctest::Contains("line 3"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(read("t,S,I,P\n0,1,abc,3\n"), doctest::Contains("line 2"),
                       ValidationError);
}

TEST_CASE("config: preset plus overrides") {
  const RunConfig c = parse(R"(# scenario
model.preset = example2
model.d = 0.1          # override
solver.alpha = [0.85, 0.95]
solver.step = 0.02
solver.t_end = 100
solver.memory_truncation = none
run.initial_states = [[30, 5, 10], [1.5, 2, 0]]
output.dir = "runs/a b"
)");
  CHECK(c.preset == "example2");
  CHECK(c.params.theta == 0.08);
  CHECK(c.params.d == 0.1);
  CHECK(c.alphas == std::vector<double>{0.85, 0.95});
  CHECK(c.step == 0.02);
  CHECK(c.t_end == 100.0);
  CHECK_FALSE(c.memory_truncation.has_value());
  REQUIRE(c.initial_states.size() == 2);
  CHECK(c.initial_states[1] == State(1.5, 2, 0));
  CHECK(c.out_dir == "runs/a b");
}

TEST_CASE("config: defaults and scalars") {
  const RunConfig c = parse("solver.alpha = 0.7\nsolver.memory_truncation = 500\n");
  CHECK(c.alphas == std::vector<double>{0.7});
  CHECK(c.memory_truncation == std::size_t{500});
  CHECK(c.params.theta == ModelParams{}.theta);
  // preset line may come after other keys
  CHECK(parse("model.d = 0.2\nmodel.preset = example3\n").params.d == 0.2);
}

TEST_CASE("config errors carry file and line") {
  CHECK(parse_error("solver.step = 0.1\nmodel.q = 1\n") ==
        "test.cfg:2: unknown key 'model.q'");
  CHECK(parse_error("foo.bar = 1\n").find("test.cfg:1: unknown key") == 0);
  CHECK(parse_error("\n\nsolver.step 0.1\n").find("test.cfg:3:") == 0);
  CHECK(parse_error("solver.step = 1\nsolver.step = 2\n").find("test.cfg:2: duplicate") == 0);
  CHECK(parse_error("solver.alpha = [0.5, \n").find("test.cfg:1:") == 0);
  CHECK(parse_error("run.initial_states = [[1, 2]]\n").find("test.cfg:1:") == 0);
  CHECK(parse_error("model.preset = nope\n").find("test.cfg:1:") == 0);
  CHECK(parse_error("solver.corrector_iterations = 1.5\n").find("test.cfg:1:") == 0);
  CHECK(parse_error("output.dir = \"open\n").find("test.cfg:1:") == 0);
  CHECK(parse_error("solver.alpha = 1.2\n").find("order must lie in (0,1]") !=
        std::string::npos);
  CHECK(parse_error("output.format = json\n").find("unsupported output format") !=
        std::string::npos);
  CHECK(parse_error("model.r = -1\n") != "");
  CHECK_THROWS_AS(load_config("/nonexistent/x.cfg"), ValidationError);
}

TEST_CASE("config from preset") {
  const RunConfig c = config_from_preset("example1-unstable");
  CHECK(c.preset == "example1-unstable");
  CHECK(c.t_end == find_preset("example1-unstable").t_end);
  CHECK(c.initial_states.size() == 3);
  CHECK_THROWS_AS(config_from_preset("nope"), ValidationError);
}
