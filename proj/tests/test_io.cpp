#include "mcid/io.hpp"
#include "reference.hpp"

#include <doctest.h>

#include <sstream>

using namespace mcid;
using namespace mcid::io;

TEST_CASE("matrix text round trip") {
  const auto p = ref::chain5();
  std::stringstream s;
  write_matrix(s, p.matrix());
  CHECK(parse_matrix(s) == p.matrix());

  std::istringstream commented("# header\n2\n0.5 0.5  # row 0\n\n0.5 0.5\n");
  CHECK(parse_matrix(commented) == Eigen::MatrixXd::Constant(2, 2, 0.5));
}

TEST_CASE("matrix parse errors") {
  for (const char* text : {"", "2\n0.5 0.5\n0.5\n", "2\n0.5 0.5\n0.5 0.5 0.1\n", "x\n", "0\n", "1\nabc\n", "1\n1.0x\n"}) {
    CAPTURE(text);
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_matrix(in), ParseError);
  }
  // Parsing does not validate stochasticity; that is the caller's job.
  std::istringstream bad_sum("2\n0.5 0.6\n0.5 0.5\n");
  CHECK_NOTHROW(parse_matrix(bad_sum));
  CHECK_THROWS_AS(read_matrix_file("/nonexistent/matrix.txt"), ParseError);
}

TEST_CASE("trajectory text round trip") {
  const Trajectory w{{0, 2, 1, 2}, 0, 3};
  std::stringstream s;
  write_trajectory(s, w);
  CHECK(s.str() == "#n=3\n0\n2\n1\n2\n");
  const auto back = parse_trajectory(s);
  CHECK(back.n == 3);
  CHECK(back.states == w.states);

  std::istringstream header_only("#n=4\n");
  const auto empty = parse_trajectory(header_only);
  CHECK(empty.n == 4);
  CHECK(empty.states.empty());
}

TEST_CASE("trajectory parse errors") {
  for (const char* text : {"", "0\n1\n", "#n=2\n2\n", "#n=2\n-1\n", "#n=0\n", "#n=2\n0.5\n"}) {
    CAPTURE(text);
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_trajectory(in), ParseError);
  }
}

TEST_CASE("config parsing is strict") {
  const auto c = parse_config(nlohmann::json::parse(R"({"master_seed": 7, "eps": 0.4, "trials": 3,
      "constants": {"c_samp": 2.5}})"));
  CHECK(c.master_seed == 7);
  CHECK(c.master_seed_given);
  CHECK(c.eps == 0.4);
  CHECK(c.trials == 3);
  CHECK(c.constants.c_samp == 2.5);
  CHECK(c.constants.c_len == Constants{}.c_len);
  CHECK(c.beta() == doctest::Approx(0.4 / 16.0));
  CHECK_NOTHROW(c.validate());

  const auto d = parse_config(nlohmann::json::object());
  CHECK_FALSE(d.master_seed_given);
  CHECK(d.master_seed == kDefaultSeed);
  CHECK(parse_config(nlohmann::json::parse(R"({"beta": 0.01})")).beta() == 0.01);

  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"seed": 1})")), ParseError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"constants": {"c_foo": 1}})")), ParseError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"eps": "big"})")), ParseError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse("[1]")), ParseError);

  CHECK_THROWS(parse_config(nlohmann::json::parse(R"({"trials": 0})")).validate());
  CHECK_THROWS(parse_config(nlohmann::json::parse(R"({"eps": 1.0})")).validate());
  CHECK_THROWS(parse_config(nlohmann::json::parse(R"({"beta": 0})")).validate());
  CHECK_THROWS(parse_config(nlohmann::json::parse(R"({"constants": {"C_fc": -1}})")).validate());
}

TEST_CASE("structured output") {
  Partition part;
  part.beta = 0.05;
  part.high_info = {StateSubset({0, 1}, 4), StateSubset({3}, 4)};
  part.low_info = StateSubset({2}, 4);
  CHECK(to_json(part).dump() == R"({"beta":0.05,"high_info":[[0,1],[3]],"low_info":[2]})");

  part.high_info = {StateSubset::full(2)};
  part.low_info = StateSubset::empty(2);
  CHECK(to_json(part).dump() == R"({"beta":0.05,"high_info":[[0,1]],"low_info":[]})");

  CHECK(to_json(Verdict{Decision::Same, StateSubset({1, 2}, 3), "ok"}).dump() ==
        R"({"verdict":"same","component":[1,2],"reason":"ok"})");
  CHECK(to_json(Verdict{Decision::Different, std::nullopt, "AllGenerationFailed"}).dump() ==
        R"({"verdict":"different","component":null,"reason":"AllGenerationFailed"})");

  const auto j = to_json(ExperimentConfig{});
  CHECK(j["master_seed"] == kDefaultSeed);
  CHECK(j["constants"]["C_fc"] == Constants{}.C_fc);
  CHECK(parse_config(nlohmann::json::parse(j.dump())).eps == ExperimentConfig{}.eps);
}
