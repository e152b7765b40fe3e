#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "pfk/errors.hpp"
#include "pfk/kernels.hpp"
#include "pfk/quadrature.hpp"

namespace pfk {

namespace {

// exp(-xi^4) is below 1e-700 past this cutoff.
constexpr double kFrequencyCutoff = 6.5;
constexpr double kConvergenceTolerance = 1e-9;
constexpr double kUnitMassTolerance = 1e-6;
constexpr char kMagic[8] = {'P', 'F', 'K', 'B', 'E', 'A', 'M', '\0'};
constexpr std::int32_t kFormatVersion = 1;

struct FrequencyRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // includes exp(-xi^4) / pi
};

FrequencyRule make_frequency_rule(int panels) {
  const QuadratureRule base = gauss_legendre(16);
  FrequencyRule rule;
  const double width = kFrequencyCutoff / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      const double xi = mid + 0.5 * width * base.nodes[i];
      rule.nodes.push_back(xi);
      rule.weights.push_back(0.5 * width * base.weights[i] * std::exp(-std::pow(xi, 4)) / std::numbers::pi);
    }
  }
  return rule;
}

double apply_rule(const FrequencyRule& rule, double y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::cos(rule.nodes[i] * y);
  return sum;
}

int panels_for(double max_abs_y) {
  const double cycles = kFrequencyCutoff * max_abs_y / (2.0 * std::numbers::pi);
  return std::max(32, static_cast<int>(std::ceil(4.0 * cycles)) + 8);
}

// Fills every field that is a deterministic function of `values`.
void finalize_table(BeamTable& table) {
  const int n = table.resolution;
  const double h = table.spacing;
  const auto& q = table.values;

  table.signed_mass = 0.0;
  for (int k = 0; k + 1 < n; ++k) table.signed_mass += 0.5 * h * (q[k] + q[k + 1]);

  std::vector<double> cells(n - 1);
  double total = 0.0;
  for (int k = 0; k + 1 < n; ++k) {
    cells[k] = 0.5 * h * (std::abs(q[k]) + std::abs(q[k + 1]));
    total += cells[k];
  }
  table.tv_mass = total;
  table.sampler_cdf.assign(n, 0.0);
  double running = 0.0;
  for (int k = 0; k + 1 < n; ++k) {
    running += cells[k];
    table.sampler_cdf[k + 1] = running / total;
  }
  table.sampler_cdf[n - 1] = 1.0;

  table.sign_intervals.clear();
  auto push_negative = [&](double lo, double hi) {
    if (!table.sign_intervals.empty() && table.sign_intervals.back().second >= lo) {
      table.sign_intervals.back().second = hi;
    } else {
      table.sign_intervals.emplace_back(lo, hi);
    }
  };
  for (int k = 0; k + 1 < n; ++k) {
    const double a = q[k];
    const double b = q[k + 1];
    const double x0 = table.abscissa(k);
    if (a <= 0.0 && b <= 0.0 && (a < 0.0 || b < 0.0)) {
      push_negative(x0, x0 + h);
    } else if (a < 0.0 && b > 0.0) {
      push_negative(x0, x0 + h * a / (a - b));
    } else if (a > 0.0 && b < 0.0) {
      push_negative(x0 + h * a / (a - b), x0 + h);
    }
  }
}

}  // namespace

double BeamTable::density(double y) const {
  const double s = (y + halfwidth) / spacing;
  if (s < 0.0 || s > resolution - 1) return 0.0;
  auto k = static_cast<int>(s);
  if (k >= resolution - 1) return values.back();
  const double frac = s - k;
  return values[k] + frac * (values[k + 1] - values[k]);
}

int BeamTable::sign(double y) const { return density(y) < 0.0 ? -1 : 1; }

double BeamTable::sample(double u) const {
  const auto it = std::upper_bound(sampler_cdf.begin(), sampler_cdf.end(), u);
  auto k = static_cast<int>(it - sampler_cdf.begin()) - 1;
  k = std::clamp(k, 0, resolution - 2);
  const double width = sampler_cdf[k + 1] - sampler_cdf[k];
  const double frac = width > 0.0 ? (u - sampler_cdf[k]) / width : 0.5;
  return abscissa(k) + frac * spacing;
}

double BeamTable::sampler_signed_mass() const {
  double total = 0.0;
  for (int k = 0; k + 1 < resolution; ++k) {
    const double a = values[k];
    const double b = values[k + 1];
    const double cell = 0.5 * spacing * (std::abs(a) + std::abs(b));
    double positive_fraction = 1.0;
    if (a <= 0.0 && b <= 0.0 && (a < 0.0 || b < 0.0)) {
      positive_fraction = 0.0;
    } else if (a < 0.0 && b > 0.0) {
      positive_fraction = 1.0 - a / (a - b);
    } else if (a > 0.0 && b < 0.0) {
      positive_fraction = a / (a - b);
    }
    total += cell * (2.0 * positive_fraction - 1.0);
  }
  return total;
}

double beam_reference_density(double y) {
  static const FrequencyRule coarse = make_frequency_rule(64);
  if (std::abs(y) <= 16.0) return apply_rule(coarse, y);
  return apply_rule(make_frequency_rule(panels_for(std::abs(y))), y);
}

BeamTable build_beam_table(int resolution, double halfwidth) {
  if (resolution < (1 << 10)) throw std::invalid_argument("beam table resolution must be >= 1024");
  if (!(halfwidth > 0.0) || !std::isfinite(halfwidth)) {
    throw std::invalid_argument("beam table halfwidth must be positive");
  }
  BeamTable table;
  table.resolution = resolution;
  table.halfwidth = halfwidth;
  table.spacing = 2.0 * halfwidth / (resolution - 1);
  table.values.assign(resolution, 0.0);

  const int panels = panels_for(halfwidth);
  const FrequencyRule rule = make_frequency_rule(panels);
  const FrequencyRule refined = make_frequency_rule(2 * panels);
  for (double probe : {0.0, 0.5 * halfwidth, halfwidth}) {
    const double diff = std::abs(apply_rule(rule, probe) - apply_rule(refined, probe));
    if (diff > kConvergenceTolerance) {
      std::ostringstream msg;
      msg << "beam density quadrature did not converge at y=" << probe << " (change " << diff << ")";
      throw ConvergenceFailure(msg.str());
    }
  }

  // Evaluate one half and mirror so the table is exactly symmetric.
  for (int k = 0; k < (resolution + 1) / 2; ++k) {
    const int mirror = resolution - 1 - k;
    const double y = k == mirror ? 0.0 : table.abscissa(k);
    const double v = apply_rule(rule, y);
    table.values[k] = v;
    table.values[mirror] = v;
  }
  finalize_table(table);

  if (std::abs(table.signed_mass - 1.0) > kUnitMassTolerance) {
    std::ostringstream msg;
    msg << "beam table halfwidth " << halfwidth << " truncates too much mass (integral "
        << table.signed_mass << ")";
    throw std::invalid_argument(msg.str());
  }
  return table;
}

void save_beam_table(const BeamTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write beam table cache " + path.string());
  const std::int32_t resolution = table.resolution;
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&kFormatVersion), sizeof kFormatVersion);
  out.write(reinterpret_cast<const char*>(&resolution), sizeof resolution);
  out.write(reinterpret_cast<const char*>(&table.halfwidth), sizeof table.halfwidth);
  out.write(reinterpret_cast<const char*>(table.values.data()),
            static_cast<std::streamsize>(table.values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("failed writing beam table cache " + path.string());
}

BeamTable load_beam_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open beam table cache " + path.string());
  char magic[sizeof kMagic];
  std::int32_t version = 0;
  std::int32_t resolution = 0;
  double halfwidth = 0.0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&resolution), sizeof resolution);
  in.read(reinterpret_cast<char*>(&halfwidth), sizeof halfwidth);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw std::runtime_error("not a beam table cache: " + path.string());
  }
  if (version != kFormatVersion) throw std::runtime_error("unsupported beam table cache version");
  if (resolution < 2) throw std::runtime_error("corrupt beam table cache");
  BeamTable table;
  table.resolution = resolution;
  table.halfwidth = halfwidth;
  table.spacing = 2.0 * halfwidth / (resolution - 1);
  table.values.resize(resolution);
  in.read(reinterpret_cast<char*>(table.values.data()),
          static_cast<std::streamsize>(table.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated beam table cache " + path.string());
  finalize_table(table);
  return table;
}

BeamTable load_or_build_beam_table(const std::filesystem::path& cache_dir, int resolution,
                                   double halfwidth) {
  std::ostringstream name;
  name << "beam_q1_r" << resolution << "_h" << std::hex << std::bit_cast<std::uint64_t>(halfwidth)
       << ".bin";
  const auto path = cache_dir / name.str();
  if (std::filesystem::exists(path)) {
    BeamTable table = load_beam_table(path);
    if (table.resolution == resolution && table.halfwidth == halfwidth) return table;
  }
  BeamTable table = build_beam_table(resolution, halfwidth);
  std::filesystem::create_directories(cache_dir);
  save_beam_table(table, path);
  return table;
}

std::shared_ptr<const BeamTable> shared_beam_table(int resolution, double halfwidth) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const BeamTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{resolution, halfwidth}];
  if (!slot) slot = std::make_shared<const BeamTable>(build_beam_table(resolution, halfwidth));
  return slot;
}

}  // namespace pfk
