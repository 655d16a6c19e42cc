#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qgan/rng.hpp"

namespace qgan {

// Affine map between grid indices and real values: value = slope * j + offset.
struct AffineMap {
  double slope = 1.0;
  double offset = 0.0;
};

// Target distribution over an integer grid of 2^n points spanning [lo, hi].
// Grid index i represents the value lo + i*(hi-lo)/(2^n - 1); samples are
// rounded to the nearest grid point, draws whose rounded value would fall
// outside the grid are rejected and redrawn.
struct TargetSpec {
  enum class Kind { Lognormal, Triangular, Bimodal, Gaussian2d, File };

  Kind kind = Kind::Lognormal;

  double mu = 1.0, sigma = 1.0;                      // lognormal: ln X ~ N(mu, sigma^2)
  double lower = 0.0, upper = 7.0, mode = 2.0;       // triangular
  double mu1 = 0.5, s1 = 1.0, mu2 = 3.5, s2 = 0.5;   // bimodal, equal weights
  double g2_mu_x = 2.0, g2_mu_y = 5.0, g2_sx = 1.0,  // correlated 2-d gaussian
      g2_sy = 1.0, g2_rho = 0.6;
  std::string path;                                  // file

  double lo = 0.0, hi = 7.0;
  std::vector<int> registers{3};  // per-dimension qubit counts

  int total_qubits() const;
  std::uint64_t grid_size() const;       // points per dimension? no: full flat grid
  int dimension() const { return static_cast<int>(registers.size()); }
  AffineMap affine(int dim_index = 0) const;
  void validate() const;
};

// Counts over the flat grid; multivariate indices are composed LSB-first
// (register 0 occupies the low bits).
struct EmpiricalDistribution {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  std::vector<int> registers{3};

  static EmpiricalDistribution from_samples(const std::vector<std::uint64_t>& samples,
                                            const std::vector<int>& registers);
  std::vector<double> probabilities() const;
};

// Flat index <-> per-register tuple decomposition, LSB-first.
std::vector<std::uint64_t> split_grid_index(std::uint64_t index, const std::vector<int>& registers);
std::uint64_t join_grid_index(const std::vector<std::uint64_t>& parts,
                              const std::vector<int>& registers);

double grid_map(std::uint64_t index, const AffineMap& map);

// Draws `count` samples from the continuous law, rejecting draws that round
// off the grid, and returns rounded flat grid indices.
std::vector<std::uint64_t> sample_target(const TargetSpec& spec, std::size_t count, Rng& rng);
std::vector<std::uint64_t> sample_target(const TargetSpec& spec, std::size_t count,
                                         std::uint64_t seed);

// Exact probability vector of the rounded law: p_i proportional to
// CDF(v_i + s/2) - CDF(v_i - s/2) with s the grid spacing, renormalized.
// Only defined for kinds with a closed-form CDF.
std::vector<double> analytic_discretized(const TargetSpec& spec);

struct IngestResult {
  EmpiricalDistribution distribution;
  std::vector<std::uint64_t> samples;  // flat grid indices, file order
  std::vector<AffineMap> maps;         // per dimension
  std::size_t clipped = 0;             // out-of-range values clipped to the grid edge
};

// Reads one value per line (or d comma/whitespace-separated columns for a
// d-dimensional grid) and maps each row to the nearest grid point.
IngestResult ingest_samples(const std::string& path, const TargetSpec& grid);

double normal_cdf(double x, double mean, double stddev);

}  // namespace qgan
