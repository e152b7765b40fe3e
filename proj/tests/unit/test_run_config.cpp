#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "pfk/run_config.hpp"

using namespace pfk;

namespace {

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "pfk_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs the CLI with stdout to `out` and stderr to `err`; returns the exit status.
int cli(const std::string& args, const std::filesystem::path& out, const std::filesystem::path& err) {
  const std::string cmd = std::string(PFK_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig solve_config() {
  RunConfig c;
  c.subcommand = Subcommand::Solve;
  c.potential = "cos:1,1";
  c.points = {{0.0}, {0.25}};
  c.samples = 5000;
  c.seed = 12;
  return c;
}

}  // namespace

TEST_CASE("enum names round trip") {
  for (Subcommand s : {Subcommand::Solve, Subcommand::Moment, Subcommand::Oracle, Subcommand::Admissibility,
                       Subcommand::Validate})
    CHECK(parse_subcommand(to_string(s)) == s);
  for (OracleMethod m : {OracleMethod::Picard, OracleMethod::FiniteDifference, OracleMethod::Volterra,
                         OracleMethod::ClassicalFk, OracleMethod::SecondMoment})
    CHECK(parse_oracle_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_output_format("xml"), ConfigError);
}

TEST_CASE("result files carry a config that parses back to the same run") {
  RunConfig c = solve_config();
  c.kernel = {Equation::DampedWave, 1, 0.75};
  c.lambda = 1.5;
  c.workers = 3;
  c.output = "somewhere.json";
  c.criteria = {};
  const RunOutcome out = run(c);
  CHECK(out.exit_code == 0);
  CHECK(config_from_result_json(out.document) == c);
  // Odd doubles survive the trip exactly.
  c.t = 0.1 + 0.2;
  c.points = {{1.0 / 3.0}};
  CHECK(config_from_result_json(run(c).document) == c);
}

TEST_CASE("worker count does not change the result file outside the runtime section") {
  RunConfig a = solve_config();
  a.workers = 1;
  RunConfig b = a;
  b.workers = 5;
  const std::string da = run(a).document, db = run(b).document;
  CHECK(da != db);  // the runtime sections differ
  CHECK(strip_runtime(da) == strip_runtime(db));
}

TEST_CASE("validation of configurations") {
  RunConfig c = solve_config();
  CHECK_NOTHROW(validate_config(c));

  RunConfig bad = c;
  bad.points = {{0.0, 1.0}};
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad = c;
  bad.t = -1.0;
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad = c;
  bad.potential = "cos:1,q";
  try {
    validate_config(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find('^') != std::string::npos);
  }
  bad = c;
  bad.kernel = {Equation::Wave, 5};
  CHECK_THROWS_AS(validate_config(bad), ConfigError);

  RunConfig m;
  m.subcommand = Subcommand::Moment;
  m.points = {{0.0}};
  m.order = 7;
  CHECK_THROWS_AS(validate_config(m), ConfigError);
  m.allow_high_order = true;
  CHECK_NOTHROW(validate_config(m));
  m.points = {{0.0}, {1.0}};
  CHECK_THROWS_AS(validate_config(m), ConfigError);
  m.order = 2;
  m.kernel.equation = Equation::Beam;
  CHECK_THROWS_AS(validate_config(m), ConfigError);

  RunConfig o;
  o.subcommand = Subcommand::Oracle;
  o.points = {{0.0}};
  o.method = OracleMethod::Picard;
  o.kernel = {Equation::Heat, 2};
  o.points = {{0.0, 0.0}};
  CHECK_THROWS_AS(validate_config(o), ConfigError);
  o.method = OracleMethod::ClassicalFk;
  o.time_steps = 5;
  CHECK_THROWS_AS(validate_config(o), ConfigError);

  RunConfig v;
  v.subcommand = Subcommand::Validate;
  v.criteria = {11};
  CHECK_THROWS_AS(validate_config(v), ConfigError);
}

TEST_CASE("csv output has one header and one row per result") {
  RunConfig c = solve_config();
  c.format = OutputFormat::Csv;
  const std::string doc = run(c).document;
  std::istringstream in(doc);
  std::string header, r1, r2, r3;
  std::getline(in, header);
  std::getline(in, r1);
  std::getline(in, r2);
  CHECK(header.rfind("point,mean,std_error,n_samples", 0) == 0);
  CHECK(r1.rfind("0,", 0) == 0);
  CHECK(r2.rfind("0.25,", 0) == 0);
  CHECK_FALSE(std::getline(in, r3));
}

TEST_CASE("subcommands produce their result fields") {
  RunConfig a;
  a.subcommand = Subcommand::Admissibility;
  a.kernel = {Equation::Wave, 3};
  auto doc = nlohmann::json::parse(run(a).document);
  CHECK(doc["results"][0]["value"].get<double>() == doctest::Approx(1.0 / 3.0));
  CHECK(doc["results"][0]["divergent"] == false);

  RunConfig o;
  o.subcommand = Subcommand::Oracle;
  o.method = OracleMethod::Volterra;
  o.potential = "const:1";
  o.kernel = {Equation::Beam, 1};
  o.points = {{0.0}};
  o.t = 0.5;
  doc = nlohmann::json::parse(run(o).document);
  CHECK(doc["results"][0]["value"].get<double>() == doctest::Approx(std::exp(0.5)).epsilon(1e-8));

  RunConfig m;
  m.subcommand = Subcommand::Moment;
  m.order = 3;
  m.points = {{0.0}};
  m.samples = 100;
  doc = nlohmann::json::parse(run(m).document);
  CHECK(doc["results"][0]["points"].size() == 3);
  CHECK(doc["results"][0]["mean"].get<double>() == doctest::Approx(std::exp(3.0)));
}

TEST_CASE("command line: exit codes, files and rerun") {
  const auto dir = scratch_dir();
  const auto out = dir / "out.txt", err = dir / "err.txt", result = dir / "r.json";

  CHECK(cli("solve --potential cos:1,1 --x 0 --samples 2e4 --workers 2 --out " + result.string(), out, err) == 0);
  const std::string first = slurp(result);
  auto doc = nlohmann::json::parse(first);
  CHECK(doc["config"]["samples"] == 20000);
  CHECK(doc["runtime"]["workers"] == 2);

  // Rerunning the stored configuration reproduces the result file.
  const auto again = dir / "again.json";
  CHECK(cli("rerun " + result.string() + " --workers 1 --out " + again.string(), out, err) == 0);
  CHECK(strip_runtime(slurp(again)) == strip_runtime(first));

  CHECK(cli("solve --potential cos:1,zz --x 0", out, err) == 2);
  CHECK(slurp(err).find('^') != std::string::npos);
  CHECK(cli("solve --x 0,1", out, err) == 2);
  CHECK(cli("solve --x 0 --samples 1.5", out, err) == 2);
  CHECK(cli("solve --no-such-flag", out, err) == 2);
  CHECK(cli("moment --order 8 --x 0", out, err) == 2);
  CHECK(cli("oracle --method picard --potential const:3 --x 0 --m-max 2", out, err) != 0);

  CHECK(cli("admissibility --equation wave --dim 3 --T 1 --format csv", out, err) == 0);
  CHECK(slurp(out).rfind("value,divergent", 0) == 0);

  CHECK(cli("oracle --method second-moment --cov exp:1 --t 0.5 --x 0 --y 0.2 --m-max 6 --terms-csv " +
                (dir / "terms.csv").string(),
            out, err) == 0);
  CHECK(slurp(dir / "terms.csv").rfind("order,term,partial_sum", 0) == 0);

  CHECK(cli("validate --criteria 8 --samples 1000", out, err) == 0);
  doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["results"][0]["passed"] == true);

  std::filesystem::remove_all(dir);
}

TEST_CASE("documented command-line examples") {
  const auto dir = scratch_dir();
  const auto out = dir / "ex.json", err = dir / "ex.err";

  CHECK(cli("solve --equation wave --dim 3 --potential const:1 --w const:1 --t 1 --x 0,0,0 --samples 1e6 --seed 42",
            out, err) == 0);
  auto r = nlohmann::json::parse(slurp(out))["results"][0];
  CHECK(std::abs(r["mean"].get<double>() - std::cosh(1.0)) <= 3.0 * r["std_error"].get<double>());

  CHECK(cli("moment --order 2 --equation heat --dim 1 --cov const:1 --w const:1 --t 1 --x 0 --y 0", out, err) == 0);
  r = nlohmann::json::parse(slurp(out))["results"][0];
  CHECK(std::abs(r["mean"].get<double>() - std::exp(1.0)) <= 3.0 * r["std_error"].get<double>() + 1e-12);

  CHECK(cli("admissibility --equation wave --dim 3 --cov const:1 --T 1", out, err) == 0);
  r = nlohmann::json::parse(slurp(out))["results"][0];
  CHECK(std::abs(r["value"].get<double>() - 1.0 / 3.0) <= 1e-6);

  std::filesystem::remove_all(dir);
}

TEST_CASE("result files are identical for 1, 2 and 8 workers apart from the runtime section") {
  const auto dir = scratch_dir();
  const auto err = dir / "w.err";
  std::string reference;
  for (int workers : {1, 2, 8}) {
    const auto out = dir / ("w" + std::to_string(workers) + ".json");
    CHECK(cli("moment --order 3 --equation wave --dim 2 --cov exp:1 --t 0.5 --x 0,0 --samples 30000 --workers " +
                  std::to_string(workers),
              out, err) == 0);
    const std::string stripped = strip_runtime(slurp(out));
    if (reference.empty()) reference = stripped;
    CHECK(stripped == reference);
  }
  std::filesystem::remove_all(dir);
}
