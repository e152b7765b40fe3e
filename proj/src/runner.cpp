#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "pfk/estimator.hpp"
#include "pfk/format.hpp"
#include "pfk/moments.hpp"
#include "pfk/oracles.hpp"
#include "pfk/run_config.hpp"
#include "pfk/validation.hpp"

namespace pfk {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kFormatVersion = 1;

Point to_point(const std::vector<double>& v) {
  Point p(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) p[static_cast<int>(i)] = v[i];
  return p;
}

ordered_json estimate_json(const EstimatorResult& r) {
  ordered_json j;
  j["mean"] = r.mean;
  j["std_error"] = r.std_error;
  j["n_samples"] = r.n_samples;
  j["seed"] = r.seed;
  j["max_jumps"] = r.max_jumps;
  j["warnings"] = r.warnings;
  return j;
}

MonteCarloOptions mc_options(const RunConfig& c) { return {c.samples, c.seed, c.workers}; }

ordered_json run_solve(const RunConfig& c) {
  const Kernel kernel(c.kernel);
  const ScalarField v = parse_field(c.potential, c.kernel.dimension);
  const ScalarField w = parse_field(c.w, c.kernel.dimension);
  SolutionOptions options;
  options.lambda = c.lambda;
  ordered_json results = ordered_json::array();
  for (const auto& x : c.points) {
    const EstimatorResult r = estimate_solution(kernel, v, w, c.t, to_point(x), options, mc_options(c));
    ordered_json j;
    j["point"] = x;
    j.update(estimate_json(r));
    results.push_back(std::move(j));
  }
  return results;
}

ordered_json run_moment(const RunConfig& c) {
  const Kernel kernel(c.kernel);
  const ScalarField w = parse_field(c.w, c.kernel.dimension);
  const CovarianceSpec cov = parse_covariance(c.covariance);
  std::vector<Point> points;
  for (int l = 0; l < c.order; ++l) points.push_back(to_point(c.points.size() == 1 ? c.points[0] : c.points[l]));
  MomentOptions options;
  options.allow_high_order = c.allow_high_order;
  const EstimatorResult r = c.order == 2
                                ? estimate_second_moment(kernel, cov, w, c.t, points[0], points[1], mc_options(c))
                                : estimate_nth_moment(kernel, cov, w, c.t, points, mc_options(c), options);
  ordered_json j;
  j["points"] = c.points.size() == 1 ? std::vector<std::vector<double>>(c.order, c.points[0]) : c.points;
  j.update(estimate_json(r));
  return ordered_json::array({j});
}

ordered_json series_json(const SeriesResult& s) {
  ordered_json j;
  j["value"] = s.value;
  j["quadrature_error"] = s.quadrature_error;
  j["tail_bound"] = s.tail_bound;
  j["terms"] = s.terms;
  return j;
}

ordered_json run_oracle(const RunConfig& c) {
  const Kernel kernel(c.kernel);
  const int d = c.kernel.dimension;
  const ScalarField v = parse_field(c.potential, d);
  const ScalarField w = parse_field(c.w, d);
  ordered_json results = ordered_json::array();
  std::vector<double> last_terms;

  switch (c.method) {
    case OracleMethod::Picard:
      for (const auto& x : c.points) {
        const SeriesResult s = picard_series_1d(kernel, v, w, c.t, x[0], c.m_max);
        ordered_json j;
        j["point"] = x;
        j.update(series_json(s));
        results.push_back(std::move(j));
        last_terms = s.terms;
      }
      break;
    case OracleMethod::SecondMoment: {
      const auto& x = c.points[0];
      const auto& y = c.points.size() > 1 ? c.points[1] : c.points[0];
      const double w0 = w(0.0, to_point(x));
      const SeriesResult s =
          second_moment_recursion_1d(kernel, parse_covariance(c.covariance), w0, c.t, x[0], y[0], c.m_max);
      ordered_json j;
      j["points"] = {x, y};
      j.update(series_json(s));
      results.push_back(std::move(j));
      last_terms = s.terms;
      break;
    }
    case OracleMethod::FiniteDifference: {
      double lo = c.points[0][0], hi = lo;
      for (const auto& x : c.points) {
        lo = std::min(lo, x[0]);
        hi = std::max(hi, x[0]);
      }
      const Grid1D grid = default_fd_grid(c.kernel.equation, c.t, lo, hi);
      const FdSolution sol = fd_reference_1d(c.kernel.equation, v, w, parse_field(c.f1, d), grid);
      for (const auto& x : c.points) {
        ordered_json j;
        j["point"] = x;
        j["value"] = sol.value_at(c.t, x[0]);
        j["dx"] = grid.dx();
        j["dt"] = grid.dt();
        results.push_back(std::move(j));
      }
      break;
    }
    case OracleMethod::Volterra: {
      const double cval = v(0.0, to_point(c.points[0]));
      const double w0 = w(0.0, to_point(c.points[0]));
      // Signed kernels enter the scalar recursion through their signed mass;
      // s = 0 is replaced by its right limit.
      auto mass = [&](double s) {
        s = std::max(s, 1e-300);
        return kernel.is_signed() ? kernel.signed_mass(s) : kernel.total_variation_mass(s);
      };
      const double value = volterra_constant_reduction(mass, cval, w0, c.t);
      for (const auto& x : c.points) {
        ordered_json j;
        j["point"] = x;
        j["value"] = value;
        results.push_back(std::move(j));
      }
      break;
    }
    case OracleMethod::ClassicalFk:
      for (const auto& x : c.points) {
        const ClassicalFkResult r = classical_fk_heat(v, w, c.t, to_point(x), c.time_steps, mc_options(c));
        ordered_json j;
        j["point"] = x;
        j.update(estimate_json(r.estimate));
        j["bias_estimate"] = r.bias_estimate;
        j["bias_bound"] = r.bias_bound;
        results.push_back(std::move(j));
      }
      break;
  }
  if (!c.terms_csv.empty() && !last_terms.empty()) write_terms_csv(c.terms_csv, last_terms);
  return results;
}

ordered_json run_admissibility(const RunConfig& c) {
  const Kernel kernel(c.kernel);
  const AdmissibilityResult a = check_admissibility(kernel, parse_covariance(c.covariance), c.t);
  ordered_json j;
  j["value"] = a.value;
  j["divergent"] = a.divergent;
  j["radius"] = a.radius;
  j["relative_change"] = a.relative_change;
  return ordered_json::array({j});
}

ordered_json run_validate(const RunConfig& c, bool& all_passed) {
  ValidationOptions options;
  options.samples = c.samples;
  options.seed = c.seed;
  options.workers = c.workers;
  std::vector<int> ids = c.criteria;
  if (ids.empty())
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  ordered_json results = ordered_json::array();
  all_passed = true;
  for (const CriterionResult& r : run_validation(ids, options)) {
    ordered_json j;
    j["id"] = r.id;
    j["name"] = r.name;
    j["passed"] = r.passed;
    j["checks"] = r.checks;
    results.push_back(std::move(j));
    all_passed = all_passed && r.passed;
  }
  return results;
}

std::string csv_cell(const ordered_json& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return quoted + "\"";
  }
  // Arrays: elements joined with ';' (nested arrays with ' ').
  std::string out;
  for (const auto& e : v) {
    if (!out.empty()) out += ';';
    if (e.is_array()) {
      std::string inner;
      for (const auto& x : e) inner += (inner.empty() ? "" : " ") + csv_cell(x);
      out += inner;
    } else {
      out += e.is_string() ? e.get<std::string>() : csv_cell(e);
    }
  }
  return csv_cell(ordered_json(out));
}

std::string render_csv(const ordered_json& results) {
  std::ostringstream out;
  if (results.empty()) return {};
  bool first = true;
  for (const auto& [key, value] : results[0].items()) {
    out << (first ? "" : ",") << key;
    first = false;
  }
  out << '\n';
  for (const auto& row : results) {
    first = true;
    for (const auto& [key, value] : row.items()) {
      out << (first ? "" : ",") << csv_cell(value);
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

RunOutcome run(const RunConfig& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  bool passed = true;
  ordered_json results;
  switch (config.subcommand) {
    case Subcommand::Solve: results = run_solve(config); break;
    case Subcommand::Moment: results = run_moment(config); break;
    case Subcommand::Oracle: results = run_oracle(config); break;
    case Subcommand::Admissibility: results = run_admissibility(config); break;
    case Subcommand::Validate: results = run_validate(config, passed); break;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  RunOutcome outcome;
  outcome.exit_code = passed ? 0 : 1;
  if (config.format == OutputFormat::Csv) {
    outcome.document = render_csv(results);
    return outcome;
  }
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["subcommand"] = to_string(config.subcommand);
  doc["config"] = ordered_json::parse(config_to_json(config));
  doc["results"] = std::move(results);
  doc["runtime"] = {{"workers", config.workers},
                    {"output", config.output},
                    {"terms_csv", config.terms_csv},
                    {"wall_time_s", wall}};
  outcome.document = doc.dump(2) + "\n";
  return outcome;
}

}  // namespace pfk
