// Command-line front end: pfk <solve|moment|oracle|admissibility|validate|rerun> [options]
#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "pfk/errors.hpp"
#include "pfk/fields.hpp"
#include "pfk/run_config.hpp"

namespace {

constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;

std::uint64_t parse_count(const std::string& text) {
  // Accepts plain integers and forms like 1e6.
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !(value >= 0.0) || value > 1e18 ||
      value != std::floor(value)) {
    throw pfk::ConfigError("expected a non-negative integer count, got '" + text + "'");
  }
  return static_cast<std::uint64_t>(value);
}

struct RawOptions {
  std::string equation = "heat";
  std::vector<std::string> points;
  std::string y;
  std::string samples = "100000";
  std::string method = "picard";
  std::string format = "json";
  std::string criteria;
};

void add_kernel_options(CLI::App* app, pfk::RunConfig& c, RawOptions& raw) {
  app->add_option("--equation", raw.equation, "heat | wave | damped-wave | beam")->capture_default_str();
  app->add_option("--dim", c.kernel.dimension, "spatial dimension")->capture_default_str();
  app->add_option("--damping", c.kernel.damping, "damping a (damped-wave)")->capture_default_str();
  app->add_option("--beam-resolution", c.kernel.beam_table_resolution, "beam table points")->capture_default_str();
  app->add_option("--beam-halfwidth", c.kernel.beam_table_halfwidth, "beam table half-width")->capture_default_str();
}

void add_output_options(CLI::App* app, pfk::RunConfig& c, RawOptions& raw) {
  app->add_option("--out", c.output, "result file (default: standard output)");
  app->add_option("--format", raw.format, "json | csv")->capture_default_str();
  app->add_option("--workers", c.workers, "worker threads (default: PFK_WORKERS or all cores)");
}

void add_sampling_options(CLI::App* app, pfk::RunConfig& c, RawOptions& raw) {
  app->add_option("--samples", raw.samples, "Monte Carlo samples (1e6 style accepted)")->capture_default_str();
  app->add_option("--seed", c.seed, "random seed")->capture_default_str();
}

void add_point_options(CLI::App* app, RawOptions& raw) {
  app->add_option("--x", raw.points, "evaluation point, comma separated (repeatable)");
}

void finish_config(pfk::RunConfig& c, const RawOptions& raw) {
  try {
    c.kernel.equation = pfk::parse_equation(raw.equation);
  } catch (const std::exception& e) {
    throw pfk::ConfigError(e.what());
  }
  c.samples = parse_count(raw.samples);
  c.format = pfk::parse_output_format(raw.format);
  c.method = pfk::parse_oracle_method(raw.method);
  try {
    for (const std::string& p : raw.points) c.points.push_back(pfk::parse_number_list(p));
    if (!raw.y.empty()) c.points.push_back(pfk::parse_number_list(raw.y));
    if (!raw.criteria.empty())
      for (double id : pfk::parse_number_list(raw.criteria)) c.criteria.push_back(static_cast<int>(id));
  } catch (const pfk::ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw pfk::ConfigError(std::string("bad number list: ") + e.what());
  }
}

int emit(const pfk::RunConfig& config, const pfk::RunOutcome& outcome) {
  if (config.output.empty()) {
    std::cout << outcome.document;
  } else {
    std::ofstream out(config.output, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << config.output << "\n";
      return kExitConfigError;
    }
    out << outcome.document;
  }
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson-renewal Monte Carlo for linear PDEs with a potential, SPDE moments, and reference oracles"};
  app.require_subcommand(1);

  pfk::RunConfig config;
  RawOptions raw;
  std::string rerun_path;

  auto* solve = app.add_subcommand("solve", "estimate u(t, x)");
  add_kernel_options(solve, config, raw);
  solve->add_option("--potential", config.potential, "potential V (field mini-language)")->capture_default_str();
  solve->add_option("--w", config.w, "homogeneous solution w")->capture_default_str();
  solve->add_option("--t", config.t, "time")->capture_default_str();
  add_point_options(solve, raw);
  solve->add_option("--lambda", config.lambda, "Poisson clock rate")->capture_default_str();
  add_sampling_options(solve, config, raw);
  add_output_options(solve, config, raw);

  auto* moment = app.add_subcommand("moment", "estimate E[u(t,x_1) ... u(t,x_n)] for the noise-driven equation");
  add_kernel_options(moment, config, raw);
  moment->add_option("--cov", config.covariance, "covariance: const:c | exp:l | gauss:l")->capture_default_str();
  moment->add_option("--w", config.w, "homogeneous solution w")->capture_default_str();
  moment->add_option("--t", config.t, "time")->capture_default_str();
  moment->add_option("--order", config.order, "moment order n")->capture_default_str();
  moment->add_flag("--allow-high-order", config.allow_high_order, "permit n > 6");
  add_point_options(moment, raw);
  moment->add_option("--y", raw.y, "second point for order 2");
  add_sampling_options(moment, config, raw);
  add_output_options(moment, config, raw);

  auto* oracle = app.add_subcommand("oracle", "deterministic or classical reference values");
  add_kernel_options(oracle, config, raw);
  oracle->add_option("--method", raw.method, "picard | fd | volterra | classical | second-moment")
      ->capture_default_str();
  oracle->add_option("--potential", config.potential, "potential V")->capture_default_str();
  oracle->add_option("--w", config.w, "w (picard, volterra, second-moment) or initial data f0 (fd, classical)")
      ->capture_default_str();
  oracle->add_option("--f1", config.f1, "initial velocity for the wave fd oracle")->capture_default_str();
  oracle->add_option("--cov", config.covariance, "covariance (second-moment)")->capture_default_str();
  oracle->add_option("--t", config.t, "time")->capture_default_str();
  add_point_options(oracle, raw);
  oracle->add_option("--y", raw.y, "second point (second-moment)");
  oracle->add_option("--m-max", config.m_max, "series order")->capture_default_str();
  oracle->add_option("--time-steps", config.time_steps, "classical time steps")->capture_default_str();
  oracle->add_option("--terms-csv", config.terms_csv, "write per-order series terms here");
  add_sampling_options(oracle, config, raw);
  add_output_options(oracle, config, raw);

  auto* admissibility = app.add_subcommand("admissibility", "int_0^T ds int mu(dxi) |F S(s)(xi)|^2");
  add_kernel_options(admissibility, config, raw);
  admissibility->add_option("--cov", config.covariance, "covariance")->capture_default_str();
  admissibility->add_option("--T,--t", config.t, "horizon")->capture_default_str();
  add_output_options(admissibility, config, raw);

  auto* validate = app.add_subcommand("validate", "run the oracle-agreement suite");
  validate->add_option("--criteria", raw.criteria, "comma separated criterion ids (default: all)");
  add_sampling_options(validate, config, raw);
  add_output_options(validate, config, raw);

  auto* rerun = app.add_subcommand("rerun", "re-execute the configuration stored in a JSON result file");
  rerun->add_option("file", rerun_path, "result file")->required();
  rerun->add_option("--out", config.output, "result file (default: standard output)");
  rerun->add_option("--workers", config.workers, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (rerun->parsed()) {
      std::ifstream in(rerun_path, std::ios::binary);
      if (!in) throw pfk::ConfigError("cannot read " + rerun_path);
      std::stringstream text;
      text << in.rdbuf();
      pfk::RunConfig stored = pfk::config_from_result_json(text.str());
      stored.output = config.output;
      if (config.workers != 0) stored.workers = config.workers;
      return emit(stored, pfk::run(stored));
    }
    if (solve->parsed()) config.subcommand = pfk::Subcommand::Solve;
    if (moment->parsed()) config.subcommand = pfk::Subcommand::Moment;
    if (oracle->parsed()) config.subcommand = pfk::Subcommand::Oracle;
    if (admissibility->parsed()) config.subcommand = pfk::Subcommand::Admissibility;
    if (validate->parsed()) config.subcommand = pfk::Subcommand::Validate;
    finish_config(config, raw);
    const pfk::RunOutcome outcome = pfk::run(config);
    const int code = emit(config, outcome);
    if (code == kExitValidationFailure) std::cerr << "validation failed\n";
    return code;
  } catch (const pfk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const pfk::Unsupported& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidationFailure;
  }
}
