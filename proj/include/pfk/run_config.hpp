#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pfk/kernels.hpp"

namespace pfk {

enum class Subcommand { Solve, Moment, Oracle, Admissibility, Validate };
enum class OutputFormat { Json, Csv };
enum class OracleMethod { Picard, FiniteDifference, Volterra, ClassicalFk, SecondMoment };

std::string_view to_string(Subcommand s);
std::string_view to_string(OutputFormat f);
std::string_view to_string(OracleMethod m);
Subcommand parse_subcommand(std::string_view text);
OutputFormat parse_output_format(std::string_view text);
OracleMethod parse_oracle_method(std::string_view text);

/// Everything needed to reproduce a run. Field texts use the mini-language of
/// parse_field / parse_covariance and are validated by `validate_config`.
struct RunConfig {
  Subcommand subcommand = Subcommand::Solve;
  KernelSpec kernel;
  std::string potential = "zero";
  std::string w = "const:1";
  std::string f1 = "zero";         // wave initial velocity (oracle fd only)
  std::string covariance = "const:1";
  double t = 1.0;                  // also the admissibility horizon T
  std::vector<std::vector<double>> points;
  int order = 2;
  bool allow_high_order = false;
  double lambda = 1.0;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 0;            // runtime only: never affects results
  OracleMethod method = OracleMethod::Picard;
  int m_max = 8;
  int time_steps = 128;            // classical Feynman-Kac
  std::vector<int> criteria;       // validate: empty means all
  std::string output;              // empty: standard output
  OutputFormat format = OutputFormat::Json;
  std::string terms_csv;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Config errors (exit status 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Checks field syntax, dimensions and estimator/kernel pairing.
void validate_config(const RunConfig& config);

/// JSON object for the "config" section (fixed key order, no runtime data).
std::string config_to_json(const RunConfig& config);

/// Rebuilds a RunConfig from a complete result file (JSON), including the
/// runtime worker count when present.
RunConfig config_from_result_json(std::string_view text);

struct RunOutcome {
  int exit_code = 0;
  std::string document;  // result file contents
};

/// Executes the configuration and renders the result document in the
/// requested format. Throws ConfigError for invalid configurations.
RunOutcome run(const RunConfig& config);

/// Removes the "runtime" section of a JSON result document so that two runs
/// can be compared byte for byte.
std::string strip_runtime(std::string_view json_document);

}  // namespace pfk
