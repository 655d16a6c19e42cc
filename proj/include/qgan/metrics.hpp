#pragma once

#include <cstdint>
#include <vector>

namespace qgan {

struct KsResult {
  double statistic = 0.0;
  std::size_t sample_size = 0;
  double alpha = 0.05;
  double bound = 0.0;  // sqrt(ln(2/alpha) / s)
  bool accepted = false;
};

// Two-sample Kolmogorov-Smirnov statistic over grid-value samples:
// sup_x |ECDF_P(x) - ECDF_Q(x)|. Both sample sets must have the same size s;
// the acceptance bound is sqrt(ln(2/alpha)/s).
KsResult ks_statistic(const std::vector<std::uint64_t>& p_samples,
                      const std::vector<std::uint64_t>& q_samples, double alpha = 0.05);

// Relative entropy sum_x p(x) ln(p(x)/q(x)). Terms with p(x) == 0 contribute
// nothing; if q(x) == 0 somewhere p(x) > 0, q gets additive smoothing with
// eps = 1e-8 and is renormalized.
double relative_entropy(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace qgan
