#include "qgan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qgan {

KsResult ks_statistic(const std::vector<std::uint64_t>& p_samples,
                      const std::vector<std::uint64_t>& q_samples, double alpha) {
  if (p_samples.empty() || q_samples.empty()) {
    throw std::invalid_argument("KS needs nonempty sample sets");
  }
  if (p_samples.size() != q_samples.size()) {
    throw std::invalid_argument("KS sample sets must have equal size");
  }
  if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("alpha must be in (0,1)");

  const std::uint64_t max_p = *std::max_element(p_samples.begin(), p_samples.end());
  const std::uint64_t max_q = *std::max_element(q_samples.begin(), q_samples.end());
  const std::uint64_t top = std::max(max_p, max_q);

  std::vector<double> cp(top + 1, 0.0), cq(top + 1, 0.0);
  for (std::uint64_t v : p_samples) cp[v] += 1.0;
  for (std::uint64_t v : q_samples) cq[v] += 1.0;

  const double s = static_cast<double>(p_samples.size());
  double acc_p = 0.0, acc_q = 0.0, stat = 0.0;
  for (std::uint64_t x = 0; x <= top; ++x) {
    acc_p += cp[x] / s;
    acc_q += cq[x] / s;
    stat = std::max(stat, std::abs(acc_p - acc_q));
  }

  KsResult r;
  r.statistic = stat;
  r.sample_size = p_samples.size();
  r.alpha = alpha;
  r.bound = std::sqrt(std::log(2.0 / alpha) / s);
  r.accepted = stat <= r.bound;
  return r;
}

double relative_entropy(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("length mismatch");

  bool needs_smoothing = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0 && q[i] <= 0.0) {
      needs_smoothing = true;
      break;
    }
  }
  std::vector<double> qs;
  const std::vector<double>* qq = &q;
  if (needs_smoothing) {
    constexpr double eps = 1e-8;
    qs.resize(q.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      qs[i] = q[i] + eps;
      sum += qs[i];
    }
    for (double& v : qs) v /= sum;
    qq = &qs;
  }

  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) d += p[i] * std::log(p[i] / (*qq)[i]);
  }
  return d;
}

}  // namespace qgan
