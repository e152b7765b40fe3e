#include "pfk/run_config.hpp"

#include <json.hpp>

#include <cmath>
#include <string>

#include "pfk/fields.hpp"
#include "pfk/moments.hpp"
#include "pfk/validation.hpp"

namespace pfk {

using ordered_json = nlohmann::ordered_json;

namespace {

template <class Enum, std::size_t N>
Enum parse_enum(std::string_view text, const std::pair<std::string_view, Enum> (&table)[N], const char* what) {
  for (const auto& [name, value] : table)
    if (name == text) return value;
  std::string options;
  for (const auto& [name, value] : table) options += (options.empty() ? "" : ", ") + std::string(name);
  throw ConfigError("unknown " + std::string(what) + " '" + std::string(text) + "' (expected one of " + options + ")");
}

template <class Enum, std::size_t N>
std::string_view enum_name(Enum value, const std::pair<std::string_view, Enum> (&table)[N]) {
  for (const auto& [name, v] : table)
    if (v == value) return name;
  return "?";
}

constexpr std::pair<std::string_view, Subcommand> kSubcommands[] = {
    {"solve", Subcommand::Solve},
    {"moment", Subcommand::Moment},
    {"oracle", Subcommand::Oracle},
    {"admissibility", Subcommand::Admissibility},
    {"validate", Subcommand::Validate},
};
constexpr std::pair<std::string_view, OutputFormat> kFormats[] = {
    {"json", OutputFormat::Json},
    {"csv", OutputFormat::Csv},
};
constexpr std::pair<std::string_view, OracleMethod> kMethods[] = {
    {"picard", OracleMethod::Picard},
    {"fd", OracleMethod::FiniteDifference},
    {"volterra", OracleMethod::Volterra},
    {"classical", OracleMethod::ClassicalFk},
    {"second-moment", OracleMethod::SecondMoment},
};

ScalarField checked_field(const std::string& text, int dimension, const char* flag) {
  try {
    return parse_field(text, dimension);
  } catch (const FieldParseError& e) {
    throw ConfigError(std::string(flag) + ": " + e.what() + "\n" + format_parse_error(text, e));
  }
}

}  // namespace

std::string_view to_string(Subcommand s) { return enum_name(s, kSubcommands); }
std::string_view to_string(OutputFormat f) { return enum_name(f, kFormats); }
std::string_view to_string(OracleMethod m) { return enum_name(m, kMethods); }
Subcommand parse_subcommand(std::string_view text) { return parse_enum(text, kSubcommands, "subcommand"); }
OutputFormat parse_output_format(std::string_view text) { return parse_enum(text, kFormats, "format"); }
OracleMethod parse_oracle_method(std::string_view text) { return parse_enum(text, kMethods, "oracle method"); }

void validate_config(const RunConfig& c) {
  if (c.subcommand == Subcommand::Validate) {
    for (int id : c.criteria)
      if (id < 1 || id > kCriterionCount) throw ConfigError("criterion ids run from 1 to " + std::to_string(kCriterionCount));
    if (c.samples < 2) throw ConfigError("--samples must be at least 2");
    return;
  }

  const int d = c.kernel.dimension;
  try {
    const Kernel probe(c.kernel);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("kernel: ") + e.what());
  }
  if (!std::isfinite(c.t) || c.t < 0.0) throw ConfigError("--t must be non-negative and finite");
  for (const auto& p : c.points) {
    if (static_cast<int>(p.size()) != d) {
      throw ConfigError("point has " + std::to_string(p.size()) + " coordinates but --dim is " + std::to_string(d));
    }
    for (double v : p)
      if (!std::isfinite(v)) throw ConfigError("point coordinates must be finite");
  }
  if (!(c.lambda > 0.0) || !std::isfinite(c.lambda)) throw ConfigError("--lambda must be positive");
  const bool sampling = c.subcommand == Subcommand::Solve || c.subcommand == Subcommand::Moment ||
                        (c.subcommand == Subcommand::Oracle && c.method == OracleMethod::ClassicalFk);
  if (sampling && c.samples < 2) throw ConfigError("--samples must be at least 2");

  checked_field(c.potential, d, "--potential");
  checked_field(c.w, d, "--w");
  checked_field(c.f1, d, "--f1");
  try {
    parse_covariance(c.covariance);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--cov: ") + e.what());
  }

  switch (c.subcommand) {
    case Subcommand::Solve:
      if (c.points.empty()) throw ConfigError("solve needs at least one --x point");
      break;
    case Subcommand::Moment: {
      if (c.kernel.equation == Equation::Beam) throw ConfigError("moments need a non-negative kernel; beam is signed");
      if (c.order < 2) throw ConfigError("--order must be at least 2");
      if (c.order > kMaxMomentOrder && !c.allow_high_order) {
        throw ConfigError("--order above " + std::to_string(kMaxMomentOrder) + " needs --allow-high-order");
      }
      const auto n = static_cast<int>(c.points.size());
      if (n != 1 && n != c.order) throw ConfigError("moment needs one point or exactly --order points");
      break;
    }
    case Subcommand::Oracle: {
      const bool one_d = d == 1 && (c.kernel.equation == Equation::Heat || c.kernel.equation == Equation::Wave);
      if (c.points.empty()) throw ConfigError("oracle needs at least one --x point");
      if (c.t <= 0.0) throw ConfigError("oracle needs --t > 0");
      if (c.m_max < 0) throw ConfigError("--m-max must be >= 0");
      switch (c.method) {
        case OracleMethod::Picard:
        case OracleMethod::FiniteDifference:
          if (!one_d) throw ConfigError("this oracle supports heat and wave in d = 1");
          break;
        case OracleMethod::SecondMoment:
          if (!one_d) throw ConfigError("this oracle supports heat and wave in d = 1");
          if (!checked_field(c.w, d, "--w").is_constant()) throw ConfigError("second-moment oracle needs a constant --w");
          if (c.points.size() > 2) throw ConfigError("second-moment oracle takes at most two points");
          break;
        case OracleMethod::Volterra:
          if (!checked_field(c.potential, d, "--potential").is_constant() || !checked_field(c.w, d, "--w").is_constant()) {
            throw ConfigError("volterra oracle needs constant --potential and --w");
          }
          break;
        case OracleMethod::ClassicalFk:
          if (c.kernel.equation != Equation::Heat || d > 3) throw ConfigError("classical oracle supports heat, d <= 3");
          if (c.time_steps < 2 || c.time_steps % 2 != 0) throw ConfigError("--time-steps must be even and >= 2");
          break;
      }
      break;
    }
    case Subcommand::Admissibility:
      if (c.kernel.equation == Equation::DampedWave) throw ConfigError("admissibility needs a Fourier transform");
      if (c.t <= 0.0) throw ConfigError("admissibility needs --T > 0");
      break;
    case Subcommand::Validate: break;
  }
}

namespace {

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["subcommand"] = to_string(c.subcommand);
  j["equation"] = to_string(c.kernel.equation);
  j["dimension"] = c.kernel.dimension;
  j["damping"] = c.kernel.damping;
  j["beam_table_resolution"] = c.kernel.beam_table_resolution;
  j["beam_table_halfwidth"] = c.kernel.beam_table_halfwidth;
  j["potential"] = c.potential;
  j["w"] = c.w;
  j["f1"] = c.f1;
  j["covariance"] = c.covariance;
  j["t"] = c.t;
  j["points"] = c.points;
  j["order"] = c.order;
  j["allow_high_order"] = c.allow_high_order;
  j["lambda"] = c.lambda;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["method"] = to_string(c.method);
  j["m_max"] = c.m_max;
  j["time_steps"] = c.time_steps;
  j["criteria"] = c.criteria;
  j["format"] = to_string(c.format);
  return j;
}

}  // namespace

std::string config_to_json(const RunConfig& config) { return config_json(config).dump(2); }

RunConfig config_from_result_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("result file is not valid JSON: ") + e.what());
  }
  if (!doc.contains("config")) throw ConfigError("result file has no config section");
  const ordered_json& j = doc["config"];
  RunConfig c;
  try {
    c.subcommand = parse_subcommand(j.at("subcommand").get<std::string>());
    c.kernel.equation = parse_equation(j.at("equation").get<std::string>());
    c.kernel.dimension = j.at("dimension").get<int>();
    c.kernel.damping = j.at("damping").get<double>();
    c.kernel.beam_table_resolution = j.at("beam_table_resolution").get<int>();
    c.kernel.beam_table_halfwidth = j.at("beam_table_halfwidth").get<double>();
    c.potential = j.at("potential").get<std::string>();
    c.w = j.at("w").get<std::string>();
    c.f1 = j.at("f1").get<std::string>();
    c.covariance = j.at("covariance").get<std::string>();
    c.t = j.at("t").get<double>();
    c.points = j.at("points").get<std::vector<std::vector<double>>>();
    c.order = j.at("order").get<int>();
    c.allow_high_order = j.at("allow_high_order").get<bool>();
    c.lambda = j.at("lambda").get<double>();
    c.samples = j.at("samples").get<std::uint64_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.method = parse_oracle_method(j.at("method").get<std::string>());
    c.m_max = j.at("m_max").get<int>();
    c.time_steps = j.at("time_steps").get<int>();
    c.criteria = j.at("criteria").get<std::vector<int>>();
    c.format = parse_output_format(j.at("format").get<std::string>());
    if (doc.contains("runtime")) {
      const ordered_json& r = doc["runtime"];
      c.workers = r.value("workers", 0u);
      c.output = r.value("output", std::string());
      c.terms_csv = r.value("terms_csv", std::string());
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("malformed config section: ") + e.what());
  }
  return c;
}

std::string strip_runtime(std::string_view json_document) {
  ordered_json doc = ordered_json::parse(json_document);
  doc.erase("runtime");
  return doc.dump(2);
}

}  // namespace pfk
