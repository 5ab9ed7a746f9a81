#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cppc/cli.hpp"
#include "cppc/io.hpp"

using namespace cppc;

namespace {

const std::string kFixtures = CPPC_FIXTURES_DIR;

std::string example(const std::string& name) { return kFixtures + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("cppc_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cmd(const std::string& cmd, const std::string& input) {
  RunConfig cfg;
  cfg.command = cmd;
  cfg.input = input;
  std::ostringstream out, err;
  const int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("parse errors report the position") {
  try {
    parse_json("{\n  \"a\": [1, 2,\n}");
    FAIL("expected an error");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("column") != std::string::npos);
  }
}

TEST_CASE("schema checks") {
  CHECK_THROWS_AS(qp_from_json(parse_json(R"({"A": [[1]], "a": [0], "F": [[1]], "d": [1], "bogus": 1})")), InputError);
  CHECK_THROWS_AS(qp_from_json(parse_json(R"({"A": [[1, 2], [0, 1]], "a": [0, 0], "F": [[1, 1]], "d": [1]})")),
                  InputError);
  CHECK_THROWS_AS(cone_from_json(parse_json(R"({"orthant": 1, "free": 1})")), InputError);
  CHECK_THROWS_AS(completion_problem_from_json(parse_json(
                      R"({"n1": 2, "n2": 1, "S": 1, "X": [[1, 0], [0, 1]], "Z": [[[0, 0]]], "Y": [[[1]]], "f": [[1]]})")),
                  InputError);
  const auto k = cone_from_json(parse_json(R"({"product": [{"orthant": 1}, {"free": 2}, {"zero": 1}]})"));
  CHECK(k.dim() == 4);
  CHECK(cone_from_json(cone_to_json(k)) == k);
}

TEST_CASE("round trips") {
  const QPInstance qp = qp_from_json(read_json_file(example("ex64.json")));
  CHECK(qp.n() == 2);
  CHECK(qp.K == GroundCone::orthant(2));
  const QPInstance back = qp_from_json(qp_to_json(qp));
  CHECK((back.F - qp.F).norm() == 0.0);
  CHECK((back.A.dense() - qp.A.dense()).norm() == 0.0);

  const auto p = completion_problem_from_json(read_json_file(example("ex58.json")));
  CHECK(p.arms() == 2);
  REQUIRE(p.data().has_value());
  CHECK(p.data()->g[1](0) == 2.0);
  const auto pm = partial_matrix_from_json(partial_matrix_to_json(p.original()));
  CHECK(pm.pattern() == p.original().pattern());
  CHECK(*pm.entry(1, 3) == 0.025);
}

TEST_CASE("deterministic rendering") {
  const Json j = parse_json(R"({"b": 0.1, "a": [1, 2.5], "c": {"z": null, "y": true}})");
  const std::string s = dump_json(j);
  CHECK(s.find("\"a\"") < s.find("\"b\""));
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(dump_json(parse_json(s)) == s);
  Json nan = Json::array({std::nan("")});
  CHECK(dump_json(nan).find("null") != std::string::npos);
}

TEST_CASE("command exit codes") {
  const auto missing = run_cmd("check", example("does_not_exist.json"));
  CHECK(missing.code == kExitInput);
  CHECK(missing.err.find("input error") != std::string::npos);

  const auto bad = run_cmd("solve-qp", temp_file("bad.json", "{ \"A\": [[1]], "));
  CHECK(bad.code == kExitInput);

  const auto qp = run_cmd("solve-qp", example("ex64.json"));
  CHECK(qp.code == kExitOk);
  CHECK(qp.out.find("\"overall\": \"ProvenExact\"") != std::string::npos);

  const auto chk = run_cmd("check", example("ex21.json"));
  CHECK(chk.code == kExitOk);
  CHECK(chk.out.find("NoCertificate") != std::string::npos);

  const auto comp = run_cmd("complete", example("ex58.json"));
  CHECK(comp.code == kExitOk);
  CHECK(comp.out.find("\"completed\": true") != std::string::npos);

  const auto orc = run_cmd("oracle", example("ex64.json"));
  CHECK(orc.code == kExitOk);
  CHECK(orc.out.find("\"kind\": \"qp\"") != std::string::npos);

  // Starved solver: a numerical failure, not an input error.
  RunConfig cfg;
  cfg.command = "solve-qp";
  cfg.input = example("ex64.json");
  cfg.max_iters = 5;
  std::ostringstream out, err;
  CHECK(run(cfg, out, err) == kExitNumerical);
}

TEST_CASE("repeated runs are byte-identical") {
  for (const char* cmd : {"solve-qp", "complete", "check", "oracle"}) {
    const std::string in = std::string(cmd) == "solve-qp" ? example("ex64.json") : example("ex58.json");
    const auto a = run_cmd(cmd, in);
    const auto b = run_cmd(cmd, in);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("argv front end") {
  const std::string out = (std::filesystem::temp_directory_path() / "cppc_test_out.json").string();
  std::string a0 = "cppc", a1 = "solve-qp", a2 = example("ex64.json"), a3 = "--out", a4 = out, a5 = "--quiet";
  char* argv[] = {a0.data(), a1.data(), a2.data(), a3.data(), a4.data(), a5.data()};
  CHECK(cli_main(6, argv) == kExitOk);
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str().find("ProvenExact") != std::string::npos);
  std::remove(out.c_str());

  std::string b1 = "no-such-command";
  char* argv2[] = {a0.data(), b1.data()};
  CHECK(cli_main(2, argv2) == kExitInput);
}
