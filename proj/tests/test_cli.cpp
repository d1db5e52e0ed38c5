#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "doctest.h"
#include "grid.hpp"
#include "table.hpp"

using namespace selfnorm::cli;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "selfnorm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.status = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("grid parsing") {
  CHECK(parse_grid("1,2.5,-3", "--x") == std::vector<double>{1.0, 2.5, -3.0});
  CHECK(parse_grid("0.5", "--x") == std::vector<double>{0.5});
  const auto r = parse_grid("0.1:1.0:10", "--x");
  REQUIRE(r.size() == 10);
  CHECK(r.front() == 0.1);
  CHECK(r[2] == 0.3);
  CHECK(r.back() == 1.0);
  CHECK(parse_grid("2:2:1", "--x") == std::vector<double>{2.0});
  for (const char* bad : {"", "1,,2", "a", "1:2", "1:2:0", "1:2:2.5", "1:2:3:4", "1:2:1", "inf"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_grid(bad, "--x"), std::invalid_argument);
  }
  try {
    parse_grid("1:2", "--a-grid");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).rfind("--a-grid:", 0) == 0);
  }
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 2.5e17, -7.0, 0.30000000000000004}) {
    const auto text = format_number(v);
    CHECK(std::stod(text) == v);
  }
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(format_number(1.0) == "1");
}

TEST_CASE("CSV and NDJSON writers") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");

  Table t({"x", "note", "flag", "count", "maybe"});
  t.add_row({0.5, "a,\"b\"", true, std::uint64_t{3}, std::optional<double>{}});
  t.add_row({INFINITY, "", false, std::uint64_t{0}, std::optional<double>{2.0}});
  CHECK_THROWS_AS(t.add_row({1.0}), std::logic_error);

  std::ostringstream csv;
  write_csv(t, csv);
  CHECK(csv.str() == "x,note,flag,count,maybe\n0.5,\"a,\"\"b\"\"\",true,3,\ninf,,false,0,2\n");

  std::ostringstream json;
  write_ndjson(t, json);
  CHECK(json.str() ==
        "{\"x\":0.5,\"note\":\"a,\\\"b\\\"\",\"flag\":true,\"count\":3,\"maybe\":null}\n"
        "{\"x\":null,\"note\":\"\",\"flag\":false,\"count\":0,\"maybe\":2}\n");
}

TEST_CASE("heaviness command classifies the fair coin as symmetric") {
  auto r = invoke({"heaviness", "--dist", "bernoulli", "--p", "0.5", "--a-grid", "0.01:5:200"});
  CHECK(r.status == kExitOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 201);
  CHECK(rows[0] == "a,H,T_a_mean");
  CHECK(r.err.find("classification: symmetric") != std::string::npos);

  auto exp = invoke({"heaviness", "--dist", "exponential:lambda=1"});
  CHECK(exp.err.find("classification: heavy-left") != std::string::npos);
  CHECK(invoke({"heaviness", "--dist", "bernoulli", "--p", "0.5", "--a-grid", "2,1"}).status ==
        kExitInvalid);
}

TEST_CASE("transform command") {
  auto r = invoke({"transform", "--solve-yx", "--x", "0.5"});
  CHECK(r.status == kExitOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "input,value,arg,residual,boundary_flag");
  const auto f = fields(rows[1]);
  const double y = std::stod(f[1]);
  CHECK(std::abs((1.0 + y) * std::log1p(y) - y - 0.25) <= 1e-12);
  CHECK(std::stod(f[3]) <= 1e-12);

  CHECK(invoke({"transform", "--x", "0.5"}).status == kExitInvalid);
  CHECK(invoke({"transform", "--solve-yx", "--cramer-h", "--x", "0.5"}).status == kExitInvalid);
  auto inf = invoke({"transform", "--ldp-yw", "--theta", "0.5", "--x", "1.5", "--format", "json"});
  CHECK(inf.out.find("\"value\":null") != std::string::npos);
}

TEST_CASE("verify command: example run, exit codes and determinism") {
  const std::vector<std::string> args{"verify", "--model", "ar1", "--theta", "0.5", "--n", "100",
                                      "--x", "0.1:1.0:10", "--trials", "100000", "--seed", "42"};
  auto a = invoke(args);
  CHECK(a.status == kExitOk);
  const auto rows = lines(a.out);
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == "x,n,trials,hits,empirical,ci_halfwidth,bound_raw,bound_clamped,verdict,seed");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    REQUIRE(f.size() == 10);
    CHECK((f[8] == "pass" || f[8] == "vacuous"));
    CHECK(f[9] == "42");
  }
  auto b = invoke(args);
  CHECK(a.out == b.out);

  // a supermartingale mean check that cannot hold: exit status 2
  auto fail = invoke({"verify", "--model", "branching", "--offspring", "geometric:p=0.4", "--check",
                      "identity", "--t", "0.1", "--n", "8", "--trials", "100000"});
  CHECK(fail.status == kExitFailVerdict);

  CHECK(invoke({"verify", "--model", "ar1", "--x", "0.1", "--trials", "10"}).status == kExitInvalid);
  CHECK(invoke({"verify", "--model", "nope"}).status == kExitInvalid);
  CHECK(invoke({"verify", "--model", "ar1", "--event", "harris", "--x", "1", "--trials", "1000"})
            .status == kExitInvalid);
  CHECK(invoke({"verify", "--model", "ar1", "--check", "mean-v", "--trials", "1000"}).status ==
        kExitInvalid);
}

TEST_CASE("config file with flag overrides") {
  const std::string path = "test_cli_config.toml";
  {
    std::ofstream f(path);
    f << "[bound]\nkind = \"ar1-ls\"\nx = \"0.1,0.2\"\nn = 10\n";
  }
  auto base = invoke({"--config", path, "bound"});
  CHECK(base.status == kExitOk);
  CHECK(lines(base.out).size() == 3);
  auto over = invoke({"--config", path, "bound", "--n", "1000", "--x", "0.1"});
  const auto rows = lines(over.out);
  REQUIRE(rows.size() == 2);
  const auto direct = invoke({"bound", "--kind", "ar1-ls", "--x", "0.1", "--n", "1000"});
  CHECK(over.out == direct.out);
  CHECK(invoke({"--config", "does-not-exist.toml", "bound"}).status == kExitInvalid);
}

TEST_CASE("output file") {
  const std::string path = "test_cli_out.csv";
  auto r = invoke({"bound", "--kind", "geometric-branching", "--x", "1", "--n", "10", "--p", "0.5",
                   "--out", path});
  CHECK(r.status == kExitOk);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::stringstream text;
  text << f.rdbuf();
  CHECK(lines(text.str()).size() == 2);
  CHECK(invoke({"bound", "--kind", "ar1-ls", "--x", "0.1", "--out", "/nonexistent/dir/out.csv"})
            .status == kExitInvalid);
}

TEST_CASE("simulate command") {
  auto r = invoke({"simulate", "--model", "branching", "--n", "5", "--paths", "4", "--seed", "3"});
  CHECK(r.status == kExitOk);
  CHECK(lines(r.out).size() == 5);
  auto s = invoke({"simulate", "--model", "ar1", "--n", "6", "--series"});
  CHECK(lines(s.out).size() == 8);
  CHECK(invoke({"simulate", "--model", "ar1", "--n", "6", "--tau2", "0.5"}).status == kExitInvalid);
}

TEST_CASE("bound command kinds") {
  for (const char* kind :
       {"azuma", "freedman", "delapena", "joint-variation", "lower-variation", "variation-ratio",
        "heavy-left-joint", "heavy-left", "heavy-left-floor", "heavy-left-ratio", "subgaussian",
        "regression", "regression-bernoulli", "ar1-ls", "ar1-simple", "ar1-yw", "ar1-mgf",
        "lotka-nagaev", "harris", "geometric-branching"}) {
    CAPTURE(kind);
    auto r = invoke({"bound", "--kind", kind, "--x", "0.2,0.4", "--n", "10", "--y", "2"});
    CHECK(r.status == kExitOk);
    CHECK(lines(r.out).size() == 3);
  }
  CHECK(invoke({"bound", "--kind", "ar1-simple", "--x", "0.7"}).status == kExitInvalid);
}
