#include "qgan/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qgan {

namespace {

double lognormal_cdf(double x, double mu, double sigma) {
  if (x <= 0.0) return 0.0;
  return normal_cdf(std::log(x), mu, sigma);
}

double triangular_cdf(double x, double l, double u, double m) {
  if (x <= l) return 0.0;
  if (x >= u) return 1.0;
  if (x <= m) return (x - l) * (x - l) / ((u - l) * (m - l));
  return 1.0 - (u - x) * (u - x) / ((u - l) * (u - m));
}

double bimodal_cdf(double x, const TargetSpec& s) {
  return 0.5 * normal_cdf(x, s.mu1, s.s1) + 0.5 * normal_cdf(x, s.mu2, s.s2);
}

double draw_continuous(const TargetSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case TargetSpec::Kind::Lognormal:
      return std::exp(rng.normal(spec.mu, spec.sigma));
    case TargetSpec::Kind::Triangular: {
      // inverse CDF
      const double l = spec.lower, u = spec.upper, m = spec.mode;
      const double f = (m - l) / (u - l);
      const double p = rng.uniform();
      if (p < f) return l + std::sqrt(p * (u - l) * (m - l));
      return u - std::sqrt((1.0 - p) * (u - l) * (u - m));
    }
    case TargetSpec::Kind::Bimodal: {
      if (rng.uniform() < 0.5) return rng.normal(spec.mu1, spec.s1);
      return rng.normal(spec.mu2, spec.s2);
    }
    default:
      throw std::invalid_argument("kind has no univariate sampler");
  }
}

}  // namespace

double normal_cdf(double x, double mean, double stddev) {
  return 0.5 * std::erfc(-(x - mean) / (stddev * std::numbers::sqrt2));
}

int TargetSpec::total_qubits() const {
  int n = 0;
  for (int r : registers) n += r;
  return n;
}

std::uint64_t TargetSpec::grid_size() const { return 1ULL << total_qubits(); }

AffineMap TargetSpec::affine(int dim_index) const {
  const std::uint64_t points = 1ULL << registers.at(dim_index);
  return {(hi - lo) / static_cast<double>(points - 1), lo};
}

void TargetSpec::validate() const {
  if (!(lo < hi)) throw std::invalid_argument("truncation interval requires lo < hi");
  if (registers.empty()) throw std::invalid_argument("registers must be nonempty");
  for (int r : registers) {
    if (r < 1) throw std::invalid_argument("register qubit counts must be >= 1");
  }
  switch (kind) {
    case Kind::Lognormal:
      if (sigma <= 0.0) throw std::invalid_argument("lognormal sigma must be > 0");
      break;
    case Kind::Triangular:
      if (!(lower < upper) || mode < lower || mode > upper) {
        throw std::invalid_argument("triangular requires lower < upper and mode inside");
      }
      break;
    case Kind::Bimodal:
      if (s1 <= 0.0 || s2 <= 0.0) throw std::invalid_argument("bimodal sigmas must be > 0");
      break;
    case Kind::Gaussian2d:
      if (g2_sx <= 0.0 || g2_sy <= 0.0 || std::abs(g2_rho) >= 1.0) {
        throw std::invalid_argument("gaussian2d requires positive sigmas and |rho| < 1");
      }
      if (registers.size() != 2) {
        throw std::invalid_argument("gaussian2d requires two registers");
      }
      break;
    case Kind::File:
      if (path.empty()) throw std::invalid_argument("file kind requires a path");
      break;
  }
}

EmpiricalDistribution EmpiricalDistribution::from_samples(
    const std::vector<std::uint64_t>& samples, const std::vector<int>& registers) {
  int n = 0;
  for (int r : registers) n += r;
  EmpiricalDistribution d;
  d.registers = registers;
  d.counts.assign(1ULL << n, 0);
  for (std::uint64_t s : samples) {
    if (s >= d.counts.size()) throw std::invalid_argument("sample off the grid");
    ++d.counts[s];
  }
  d.total = samples.size();
  return d;
}

std::vector<double> EmpiricalDistribution::probabilities() const {
  std::vector<double> p(counts.size(), 0.0);
  if (total == 0) return p;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return p;
}

std::vector<std::uint64_t> split_grid_index(std::uint64_t index,
                                            const std::vector<int>& registers) {
  std::vector<std::uint64_t> parts;
  parts.reserve(registers.size());
  for (int r : registers) {
    parts.push_back(index & ((1ULL << r) - 1));
    index >>= r;
  }
  return parts;
}

std::uint64_t join_grid_index(const std::vector<std::uint64_t>& parts,
                              const std::vector<int>& registers) {
  std::uint64_t index = 0;
  int shift = 0;
  for (std::size_t d = 0; d < registers.size(); ++d) {
    index |= parts[d] << shift;
    shift += registers[d];
  }
  return index;
}

double grid_map(std::uint64_t index, const AffineMap& map) {
  if (map.slope == 0.0) throw std::invalid_argument("affine slope must be nonzero");
  return map.slope * static_cast<double>(index) + map.offset;
}

std::vector<std::uint64_t> sample_target(const TargetSpec& spec, std::size_t count, Rng& rng) {
  if (count == 0) throw std::invalid_argument("sample count must be >= 1");
  spec.validate();
  if (spec.kind == TargetSpec::Kind::File) {
    throw std::invalid_argument("file targets are ingested, not sampled");
  }

  std::vector<std::uint64_t> out;
  out.reserve(count);

  if (spec.kind == TargetSpec::Kind::Gaussian2d) {
    const AffineMap mx = spec.affine(0);
    const AffineMap my = spec.affine(1);
    const std::uint64_t px = (1ULL << spec.registers[0]) - 1;
    const std::uint64_t py = (1ULL << spec.registers[1]) - 1;
    const double c = std::sqrt(1.0 - spec.g2_rho * spec.g2_rho);
    while (out.size() < count) {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      const double x = spec.g2_mu_x + spec.g2_sx * z1;
      const double y = spec.g2_mu_y + spec.g2_sy * (spec.g2_rho * z1 + c * z2);
      const double jx = std::round((x - mx.offset) / mx.slope);
      const double jy = std::round((y - my.offset) / my.slope);
      if (jx < 0 || jx > static_cast<double>(px) || jy < 0 || jy > static_cast<double>(py)) {
        continue;
      }
      out.push_back(join_grid_index({static_cast<std::uint64_t>(jx),
                                     static_cast<std::uint64_t>(jy)},
                                    spec.registers));
    }
    return out;
  }

  const AffineMap map = spec.affine(0);
  const std::uint64_t points = (1ULL << spec.registers[0]) - 1;
  while (out.size() < count) {
    const double v = draw_continuous(spec, rng);
    const double j = std::round((v - map.offset) / map.slope);
    if (j < 0 || j > static_cast<double>(points)) continue;  // reject and redraw
    out.push_back(static_cast<std::uint64_t>(j));
  }
  return out;
}

std::vector<std::uint64_t> sample_target(const TargetSpec& spec, std::size_t count,
                                         std::uint64_t seed) {
  Rng rng(seed);
  return sample_target(spec, count, rng);
}

std::vector<double> analytic_discretized(const TargetSpec& spec) {
  spec.validate();
  if (spec.kind == TargetSpec::Kind::File || spec.kind == TargetSpec::Kind::Gaussian2d) {
    throw std::invalid_argument("no closed-form CDF for this target kind");
  }
  const AffineMap map = spec.affine(0);
  const std::uint64_t points = 1ULL << spec.registers[0];
  auto cdf = [&spec](double x) {
    switch (spec.kind) {
      case TargetSpec::Kind::Lognormal:
        return lognormal_cdf(x, spec.mu, spec.sigma);
      case TargetSpec::Kind::Triangular:
        return triangular_cdf(x, spec.lower, spec.upper, spec.mode);
      default:
        return bimodal_cdf(x, spec);
    }
  };
  std::vector<double> p(points);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < points; ++i) {
    const double v = grid_map(i, map);
    p[i] = std::max(cdf(v + map.slope / 2) - cdf(v - map.slope / 2), 0.0);
    sum += p[i];
  }
  if (sum <= 0.0) throw std::runtime_error("target law has no mass on the grid");
  for (double& x : p) x /= sum;
  return p;
}

IngestResult ingest_samples(const std::string& path, const TargetSpec& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sample file: " + path);

  const int dims = grid.dimension();
  std::vector<AffineMap> maps;
  for (int d = 0; d < dims; ++d) maps.push_back(grid.affine(d));

  IngestResult result;
  result.maps = maps;

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::uint64_t> parts(dims);
  while (std::getline(in, line)) {
    ++line_no;
    std::string row = line;
    std::replace(row.begin(), row.end(), ',', ' ');
    std::istringstream fields(row);
    if (row.find_first_not_of(" \t\r") == std::string::npos) continue;  // blank line
    for (int d = 0; d < dims; ++d) {
      double v;
      if (!(fields >> v)) {
        throw std::runtime_error("parse error at line " + std::to_string(line_no) + " of " +
                                 path);
      }
      double j = std::round((v - maps[d].offset) / maps[d].slope);
      const double top = static_cast<double>((1ULL << grid.registers[d]) - 1);
      if (j < 0.0 || j > top) {
        j = std::clamp(j, 0.0, top);
        ++result.clipped;
      }
      parts[d] = static_cast<std::uint64_t>(j);
    }
    double extra;
    if (fields >> extra) {
      throw std::runtime_error("parse error at line " + std::to_string(line_no) + " of " + path +
                               ": too many columns");
    }
    result.samples.push_back(join_grid_index(parts, grid.registers));
  }
  if (result.samples.empty()) throw std::runtime_error("sample file is empty: " + path);
  if (result.clipped > 0) {
    std::cerr << "warning: " << result.clipped << " out-of-range values clipped to the grid\n";
  }
  result.distribution = EmpiricalDistribution::from_samples(result.samples, grid.registers);
  return result;
}

}  // namespace qgan
