#include "qgan/discriminator.hpp"

#include <cmath>
#include <stdexcept>

namespace qgan {

namespace {

constexpr double kScoreClamp = 1e-7;

// y (rows) += A (rows x cols, row-major) * x (cols)
void matvec_add(const std::vector<double>& a, int rows, int cols, const double* x, double* y) {
  for (int r = 0; r < rows; ++r) {
    const double* row = a.data() + static_cast<std::size_t>(r) * cols;
    double acc = 0.0;
    for (int c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] += acc;
  }
}

// y (cols) += A^T * x (rows)
void matvec_t_add(const std::vector<double>& a, int rows, int cols, const double* x, double* y) {
  for (int r = 0; r < rows; ++r) {
    const double* row = a.data() + static_cast<std::size_t>(r) * cols;
    const double xv = x[r];
    for (int c = 0; c < cols; ++c) y[c] += row[c] * xv;
  }
}

// G (rows x cols) += scale * u (rows) v^T (cols)
void outer_add(double* g, int rows, int cols, double scale, const double* u, const double* v) {
  for (int r = 0; r < rows; ++r) {
    double* row = g + static_cast<std::size_t>(r) * cols;
    const double ur = scale * u[r];
    for (int c = 0; c < cols; ++c) row[c] += ur * v[c];
  }
}

struct GradViews {
  double* w1;
  double* b1;
  double* w2;
  double* b2;
  double* w3;
  double* b3;
};

GradViews views(const DiscriminatorModel& m, std::vector<double>& flat) {
  flat.assign(m.parameter_count(), 0.0);
  double* p = flat.data();
  GradViews v{};
  v.w1 = p;
  p += m.w1.size();
  v.b1 = p;
  p += m.b1.size();
  v.w2 = p;
  p += m.w2.size();
  v.b2 = p;
  p += m.b2.size();
  v.w3 = p;
  p += m.w3.size();
  v.b3 = p;
  return v;
}

}  // namespace

double clamp_score(double score) {
  if (score < kScoreClamp) return kScoreClamp;
  if (score > 1.0 - kScoreClamp) return 1.0 - kScoreClamp;
  return score;
}

DiscriminatorModel DiscriminatorModel::create(int input_dim, int hidden1, int hidden2, Rng& rng) {
  if (input_dim < 1 || hidden1 < 1 || hidden2 < 1) {
    throw std::invalid_argument("layer sizes must be positive");
  }
  DiscriminatorModel m;
  m.input_dim = input_dim;
  m.hidden1 = hidden1;
  m.hidden2 = hidden2;
  auto init = [&rng](std::vector<double>& w, std::vector<double>& b, int out, int in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    w.resize(static_cast<std::size_t>(out) * in);
    b.resize(out);
    for (double& x : w) x = rng.uniform(-bound, bound);
    for (double& x : b) x = rng.uniform(-bound, bound);
  };
  init(m.w1, m.b1, hidden1, input_dim);
  init(m.w2, m.b2, hidden2, hidden1);
  init(m.w3, m.b3, 1, hidden2);
  return m;
}

std::size_t DiscriminatorModel::parameter_count() const {
  return w1.size() + b1.size() + w2.size() + b2.size() + w3.size() + b3.size();
}

std::vector<double> DiscriminatorModel::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto* v : {&w1, &b1, &w2, &b2, &w3, &b3}) {
    flat.insert(flat.end(), v->begin(), v->end());
  }
  return flat;
}

void DiscriminatorModel::unflatten(const std::vector<double>& flat) {
  if (flat.size() != parameter_count()) throw std::invalid_argument("flat size mismatch");
  std::size_t o = 0;
  for (auto* v : {&w1, &b1, &w2, &b2, &w3, &b3}) {
    std::copy(flat.begin() + o, flat.begin() + o + v->size(), v->begin());
    o += v->size();
  }
}

ForwardCache forward_batch(const DiscriminatorModel& m, const std::vector<double>& x, int batch) {
  if (x.size() != static_cast<std::size_t>(batch) * m.input_dim) {
    throw std::invalid_argument("input batch size mismatch");
  }
  ForwardCache c;
  c.batch = batch;
  c.x = x;
  c.z1.assign(static_cast<std::size_t>(batch) * m.hidden1, 0.0);
  c.a1.resize(c.z1.size());
  c.z2.assign(static_cast<std::size_t>(batch) * m.hidden2, 0.0);
  c.a2.resize(c.z2.size());
  c.score.resize(batch);
  const double slope = m.leaky_slope;
  for (int l = 0; l < batch; ++l) {
    double* z1 = c.z1.data() + static_cast<std::size_t>(l) * m.hidden1;
    double* a1 = c.a1.data() + static_cast<std::size_t>(l) * m.hidden1;
    for (int r = 0; r < m.hidden1; ++r) z1[r] = m.b1[r];
    matvec_add(m.w1, m.hidden1, m.input_dim, x.data() + static_cast<std::size_t>(l) * m.input_dim,
               z1);
    for (int r = 0; r < m.hidden1; ++r) a1[r] = z1[r] > 0 ? z1[r] : slope * z1[r];

    double* z2 = c.z2.data() + static_cast<std::size_t>(l) * m.hidden2;
    double* a2 = c.a2.data() + static_cast<std::size_t>(l) * m.hidden2;
    for (int r = 0; r < m.hidden2; ++r) z2[r] = m.b2[r];
    matvec_add(m.w2, m.hidden2, m.hidden1, a1, z2);
    for (int r = 0; r < m.hidden2; ++r) a2[r] = z2[r] > 0 ? z2[r] : slope * z2[r];

    double z3 = m.b3[0];
    for (int r = 0; r < m.hidden2; ++r) z3 += m.w3[r] * a2[r];
    c.score[l] = 1.0 / (1.0 + std::exp(-z3));
  }
  return c;
}

double forward(const DiscriminatorModel& m, const std::vector<double>& x) {
  return forward_batch(m, x, 1).score[0];
}

std::vector<double> backward(const DiscriminatorModel& m, const ForwardCache& c,
                             const std::vector<double>& upstream) {
  if (upstream.size() != static_cast<std::size_t>(c.batch)) {
    throw std::invalid_argument("upstream size mismatch");
  }
  std::vector<double> flat;
  GradViews g = views(m, flat);
  const double slope = m.leaky_slope;
  std::vector<double> d2(m.hidden2), d1(m.hidden1);
  for (int l = 0; l < c.batch; ++l) {
    const double d = c.score[l];
    const double d3 = upstream[l] * d * (1.0 - d);
    if (d3 == 0.0) continue;
    const double* a2 = c.a2.data() + static_cast<std::size_t>(l) * m.hidden2;
    const double* a1 = c.a1.data() + static_cast<std::size_t>(l) * m.hidden1;
    const double* z2 = c.z2.data() + static_cast<std::size_t>(l) * m.hidden2;
    const double* z1 = c.z1.data() + static_cast<std::size_t>(l) * m.hidden1;
    const double* x = c.x.data() + static_cast<std::size_t>(l) * m.input_dim;

    for (int r = 0; r < m.hidden2; ++r) g.w3[r] += d3 * a2[r];
    g.b3[0] += d3;

    for (int r = 0; r < m.hidden2; ++r) {
      d2[r] = m.w3[r] * d3 * (z2[r] > 0 ? 1.0 : slope);
    }
    outer_add(g.w2, m.hidden2, m.hidden1, 1.0, d2.data(), a1);
    for (int r = 0; r < m.hidden2; ++r) g.b2[r] += d2[r];

    std::fill(d1.begin(), d1.end(), 0.0);
    matvec_t_add(m.w2, m.hidden2, m.hidden1, d2.data(), d1.data());
    for (int r = 0; r < m.hidden1; ++r) d1[r] *= (z1[r] > 0 ? 1.0 : slope);
    outer_add(g.w1, m.hidden1, m.input_dim, 1.0, d1.data(), x);
    for (int r = 0; r < m.hidden1; ++r) g.b1[r] += d1[r];
  }
  return flat;
}

std::vector<double> input_gradients(const DiscriminatorModel& m, const ForwardCache& c) {
  std::vector<double> out(static_cast<std::size_t>(c.batch) * m.input_dim, 0.0);
  const double slope = m.leaky_slope;
  std::vector<double> t2(m.hidden2), t1(m.hidden1);
  for (int l = 0; l < c.batch; ++l) {
    const double* z2 = c.z2.data() + static_cast<std::size_t>(l) * m.hidden2;
    const double* z1 = c.z1.data() + static_cast<std::size_t>(l) * m.hidden1;
    const double d = c.score[l];
    for (int r = 0; r < m.hidden2; ++r) t2[r] = m.w3[r] * (z2[r] > 0 ? 1.0 : slope);
    std::fill(t1.begin(), t1.end(), 0.0);
    matvec_t_add(m.w2, m.hidden2, m.hidden1, t2.data(), t1.data());
    for (int r = 0; r < m.hidden1; ++r) t1[r] *= (z1[r] > 0 ? 1.0 : slope);
    double* row = out.data() + static_cast<std::size_t>(l) * m.input_dim;
    matvec_t_add(m.w1, m.hidden1, m.input_dim, t1.data(), row);
    for (int i = 0; i < m.input_dim; ++i) row[i] *= d * (1.0 - d);
  }
  return out;
}

PenaltyResult gradient_penalty_at(const DiscriminatorModel& m, const std::vector<double>& x,
                                  int batch, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("penalty weight must be >= 0");
  PenaltyResult result;
  result.gradient.assign(m.parameter_count(), 0.0);
  if (lambda == 0.0 || batch == 0) return result;

  const ForwardCache c = forward_batch(m, x, batch);
  std::vector<double> flat;
  GradViews g = views(m, flat);
  const double slope = m.leaky_slope;

  std::vector<double> t2(m.hidden2), t1(m.hidden1), v(m.input_dim), w(m.hidden1),
      m2w2w(m.hidden2), d2(m.hidden2), d1(m.hidden1);
  double value = 0.0;
  for (int l = 0; l < batch; ++l) {
    const double* z2 = c.z2.data() + static_cast<std::size_t>(l) * m.hidden2;
    const double* z1 = c.z1.data() + static_cast<std::size_t>(l) * m.hidden1;
    const double* a2 = c.a2.data() + static_cast<std::size_t>(l) * m.hidden2;
    const double* a1 = c.a1.data() + static_cast<std::size_t>(l) * m.hidden1;
    const double* xl = c.x.data() + static_cast<std::size_t>(l) * m.input_dim;
    const double d = c.score[l];
    const double sp = d * (1.0 - d);  // sigma'(z3)

    // v = W1^T M1 W2^T M2 w3 so that dD/dx = sp * v
    for (int r = 0; r < m.hidden2; ++r) t2[r] = m.w3[r] * (z2[r] > 0 ? 1.0 : slope);
    std::fill(t1.begin(), t1.end(), 0.0);
    matvec_t_add(m.w2, m.hidden2, m.hidden1, t2.data(), t1.data());
    for (int r = 0; r < m.hidden1; ++r) t1[r] *= (z1[r] > 0 ? 1.0 : slope);
    std::fill(v.begin(), v.end(), 0.0);
    matvec_t_add(m.w1, m.hidden1, m.input_dim, t1.data(), v.data());

    double vn2 = 0.0;
    for (double vv : v) vn2 += vv * vv;
    value += sp * sp * vn2;

    // d(sp^2 ||v||^2)/dtheta, masks held fixed:
    //   through ||v||^2 (weights only)
    const double sp2 = sp * sp;
    outer_add(g.w1, m.hidden1, m.input_dim, 2.0 * sp2, t1.data(), v.data());
    std::fill(w.begin(), w.end(), 0.0);
    matvec_add(m.w1, m.hidden1, m.input_dim, v.data(), w.data());
    for (int r = 0; r < m.hidden1; ++r) w[r] *= (z1[r] > 0 ? 1.0 : slope);
    outer_add(g.w2, m.hidden2, m.hidden1, 2.0 * sp2, t2.data(), w.data());
    std::fill(m2w2w.begin(), m2w2w.end(), 0.0);
    matvec_add(m.w2, m.hidden2, m.hidden1, w.data(), m2w2w.data());
    for (int r = 0; r < m.hidden2; ++r) {
      g.w3[r] += 2.0 * sp2 * m2w2w[r] * (z2[r] > 0 ? 1.0 : slope);
    }

    //   through sp^2: 2 sp sp' ||v||^2 * dz3/dtheta, sp' = sp (1 - 2D)
    const double coef = 2.0 * sp * (sp * (1.0 - 2.0 * d)) * vn2;
    if (coef != 0.0) {
      for (int r = 0; r < m.hidden2; ++r) g.w3[r] += coef * a2[r];
      g.b3[0] += coef;
      for (int r = 0; r < m.hidden2; ++r) {
        d2[r] = m.w3[r] * coef * (z2[r] > 0 ? 1.0 : slope);
      }
      outer_add(g.w2, m.hidden2, m.hidden1, 1.0, d2.data(), a1);
      for (int r = 0; r < m.hidden2; ++r) g.b2[r] += d2[r];
      std::fill(d1.begin(), d1.end(), 0.0);
      matvec_t_add(m.w2, m.hidden2, m.hidden1, d2.data(), d1.data());
      for (int r = 0; r < m.hidden1; ++r) d1[r] *= (z1[r] > 0 ? 1.0 : slope);
      outer_add(g.w1, m.hidden1, m.input_dim, 1.0, d1.data(), xl);
      for (int r = 0; r < m.hidden1; ++r) g.b1[r] += d1[r];
    }
  }
  const double scale = lambda / batch;
  result.value = scale * value;
  for (double& gg : flat) gg *= scale;
  result.gradient = std::move(flat);
  return result;
}

PenaltyResult gradient_penalty(const DiscriminatorModel& m, const std::vector<double>& x,
                               int batch, double lambda, double perturb_std, Rng& rng) {
  std::vector<double> xt = x;
  for (double& v : xt) v += rng.normal(0.0, perturb_std);
  return gradient_penalty_at(m, xt, batch, lambda);
}

}  // namespace qgan
