#include "qgan/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qgan {

namespace {

void check_qubit(int qubit, int qubit_count) {
  if (qubit < 0 || qubit >= qubit_count) {
    throw std::invalid_argument("qubit index out of range: " + std::to_string(qubit));
  }
}

// 2x2 real rotation on the target-qubit amplitude pairs
void apply_pair_rotation(Statevector& state, int target, double c, double s,
                         std::uint64_t control_mask) {
  const std::uint64_t bit = 1ULL << target;
  const std::uint64_t dim = state.dim();
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((i & bit) == 0 && (i & control_mask) == control_mask) {
      const cdouble a = state.amplitudes[i];
      const cdouble b = state.amplitudes[i | bit];
      state.amplitudes[i] = c * a - s * b;
      state.amplitudes[i | bit] = s * a + c * b;
    }
  }
}

}  // namespace

Statevector::Statevector(int qubits) : qubit_count(qubits) {
  if (qubits < 1 || qubits > 30) {
    throw std::invalid_argument("qubit count must be in [1, 30]");
  }
  amplitudes.assign(1ULL << qubits, cdouble{0.0, 0.0});
  amplitudes[0] = 1.0;
}

Statevector Statevector::basis_state(int qubits, std::uint64_t index) {
  Statevector s(qubits);
  if (index >= s.dim()) {
    throw std::invalid_argument("basis index out of range");
  }
  s.amplitudes[0] = 0.0;
  s.amplitudes[index] = 1.0;
  return s;
}

double Statevector::norm_sq() const {
  double sum = 0.0;
  for (const cdouble& a : amplitudes) sum += std::norm(a);
  return sum;
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(amplitudes.size());
  for (std::size_t i = 0; i < amplitudes.size(); ++i) p[i] = std::norm(amplitudes[i]);
  return p;
}

GateOp GateOp::ry(int qubit, double angle) { return {GateKind::RY, qubit, -1, angle, 0, 0}; }
GateOp GateOp::h(int qubit) { return {GateKind::H, qubit, -1, 0.0, 0, 0}; }
GateOp GateOp::x(int qubit) { return {GateKind::X, qubit, -1, 0.0, 0, 0}; }
GateOp GateOp::cz(int a, int b) { return {GateKind::CZ, b, a, 0.0, 0, 0}; }
GateOp GateOp::cx(int control, int target) { return {GateKind::CX, target, control, 0.0, 0, 0}; }
GateOp GateOp::controlled_ry(int control, int target, double angle) {
  return {GateKind::ControlledRY, target, control, angle, 0, 0};
}
GateOp GateOp::cphase(int control, int target, double angle) {
  return {GateKind::CPhase, target, control, angle, 0, 0};
}
GateOp GateOp::phase_reflection(std::uint64_t mask, std::uint64_t value) {
  return {GateKind::PhaseReflection, -1, -1, 0.0, mask, value & mask};
}

GateOp GateOp::adjoint() const {
  GateOp g = *this;
  switch (kind) {
    case GateKind::RY:
    case GateKind::ControlledRY:
    case GateKind::CPhase:
      g.angle = -angle;
      break;
    default:
      break;  // H, X, CZ, CX, PhaseReflection are self-inverse
  }
  return g;
}

std::uint64_t GateOp::support_mask() const {
  if (kind == GateKind::PhaseReflection) return mask;
  std::uint64_t m = 0;
  if (target >= 0) m |= 1ULL << target;
  if (control >= 0) m |= 1ULL << control;
  return m;
}

HouseholderLoad HouseholderLoad::from_probabilities(const std::vector<double>& probabilities) {
  const std::size_t dim = probabilities.size();
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("probability vector length must be a power of two >= 2");
  }
  double sum = 0.0;
  for (double p : probabilities) {
    if (p < 0.0) throw std::invalid_argument("negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("probabilities must sum to 1");

  HouseholderLoad load;
  load.qubit_count = static_cast<int>(std::countr_zero(dim));
  // |u> = (|0> - |t>) / ||.||  with t_i = sqrt(p_i); then (I - 2|u><u|)|0> = |t>
  std::vector<double> u(dim);
  double nsq = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double t = std::sqrt(probabilities[i]);
    u[i] = (i == 0 ? 1.0 - t : -t);
    nsq += u[i] * u[i];
  }
  if (nsq < 1e-24) return load;  // target is |0..0>, identity
  const double inv = 1.0 / std::sqrt(nsq);
  for (double& v : u) v *= inv;
  load.u = std::move(u);
  return load;
}

void Circuit::append(const std::vector<GateOp>& gates) {
  for (const GateOp& g : gates) add(g);
}

void Circuit::append(const Circuit& other) {
  ops.insert(ops.end(), other.ops.begin(), other.ops.end());
}

Circuit Circuit::adjoint() const {
  Circuit out;
  out.ops.reserve(ops.size());
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    std::visit(
        [&out](const auto& op) {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, GateOp>) {
            out.add(op.adjoint());
          } else if constexpr (std::is_same_v<T, GridControlledRY>) {
            GridControlledRY inv = op;
            inv.inverted = !inv.inverted;
            out.add(CircuitOp{inv});
          } else {
            out.add(CircuitOp{op});  // Householder and comparator are self-inverse
          }
        },
        *it);
  }
  return out;
}

std::uint64_t Circuit::support_mask() const {
  std::uint64_t m = 0;
  for (const CircuitOp& op : ops) {
    std::visit(
        [&m](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, GateOp>) {
            m |= o.support_mask();
          } else if constexpr (std::is_same_v<T, HouseholderLoad>) {
            m |= (1ULL << o.qubit_count) - 1;
          } else if constexpr (std::is_same_v<T, IntegerComparator>) {
            m |= (1ULL << o.grid_qubits) - 1;
            m |= 1ULL << o.target_qubit;
          } else {
            m |= (1ULL << o.grid_qubits) - 1;
            m |= 1ULL << o.control_qubit;
            m |= 1ULL << o.target_qubit;
          }
        },
        op);
  }
  return m;
}

void apply_inplace(Statevector& state, const GateOp& gate, std::uint64_t control_mask) {
  const int n = state.qubit_count;
  const std::uint64_t dim = state.dim();
  switch (gate.kind) {
    case GateKind::RY: {
      check_qubit(gate.target, n);
      apply_pair_rotation(state, gate.target, std::cos(gate.angle / 2),
                          std::sin(gate.angle / 2), control_mask);
      break;
    }
    case GateKind::H: {
      check_qubit(gate.target, n);
      const std::uint64_t bit = 1ULL << gate.target;
      const double r = std::numbers::sqrt2 / 2.0;
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & bit) == 0 && (i & control_mask) == control_mask) {
          const cdouble a = state.amplitudes[i];
          const cdouble b = state.amplitudes[i | bit];
          state.amplitudes[i] = r * (a + b);
          state.amplitudes[i | bit] = r * (a - b);
        }
      }
      break;
    }
    case GateKind::X: {
      check_qubit(gate.target, n);
      const std::uint64_t bit = 1ULL << gate.target;
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & bit) == 0 && (i & control_mask) == control_mask) {
          std::swap(state.amplitudes[i], state.amplitudes[i | bit]);
        }
      }
      break;
    }
    case GateKind::CZ: {
      check_qubit(gate.target, n);
      check_qubit(gate.control, n);
      if (gate.target == gate.control) throw std::invalid_argument("CZ qubits must be distinct");
      const std::uint64_t both = (1ULL << gate.target) | (1ULL << gate.control);
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & both) == both && (i & control_mask) == control_mask) {
          state.amplitudes[i] = -state.amplitudes[i];
        }
      }
      break;
    }
    case GateKind::CX: {
      check_qubit(gate.target, n);
      check_qubit(gate.control, n);
      if (gate.target == gate.control) throw std::invalid_argument("CX qubits must be distinct");
      const std::uint64_t cbit = 1ULL << gate.control;
      const std::uint64_t tbit = 1ULL << gate.target;
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & cbit) && (i & tbit) == 0 && (i & control_mask) == control_mask) {
          std::swap(state.amplitudes[i], state.amplitudes[i | tbit]);
        }
      }
      break;
    }
    case GateKind::ControlledRY: {
      check_qubit(gate.target, n);
      check_qubit(gate.control, n);
      if (gate.target == gate.control) throw std::invalid_argument("CRY qubits must be distinct");
      apply_pair_rotation(state, gate.target, std::cos(gate.angle / 2),
                          std::sin(gate.angle / 2), control_mask | (1ULL << gate.control));
      break;
    }
    case GateKind::CPhase: {
      check_qubit(gate.target, n);
      check_qubit(gate.control, n);
      if (gate.target == gate.control) throw std::invalid_argument("CPhase qubits must be distinct");
      const std::uint64_t both = (1ULL << gate.target) | (1ULL << gate.control);
      const cdouble phase = std::polar(1.0, gate.angle);
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & both) == both && (i & control_mask) == control_mask) {
          state.amplitudes[i] *= phase;
        }
      }
      break;
    }
    case GateKind::PhaseReflection: {
      if (n < 64 && (gate.mask >> n) != 0) {
        throw std::invalid_argument("phase reflection mask out of range");
      }
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & gate.mask) == gate.value && (i & control_mask) == control_mask) {
          state.amplitudes[i] = -state.amplitudes[i];
        }
      }
      break;
    }
  }
}

void apply_inplace(Statevector& state, const CircuitOp& op, std::uint64_t control_mask) {
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        const std::uint64_t dim = state.dim();
        if constexpr (std::is_same_v<T, GateOp>) {
          apply_inplace(state, o, control_mask);
        } else if constexpr (std::is_same_v<T, HouseholderLoad>) {
          if (o.u.empty()) return;
          const std::uint64_t block = o.u.size();
          if (block > dim) throw std::invalid_argument("Householder block exceeds state");
          for (std::uint64_t base = 0; base < dim; base += block) {
            if ((base & control_mask) != control_mask) continue;
            cdouble dot{0.0, 0.0};
            for (std::uint64_t j = 0; j < block; ++j) dot += o.u[j] * state.amplitudes[base + j];
            dot *= 2.0;
            for (std::uint64_t j = 0; j < block; ++j) state.amplitudes[base + j] -= dot * o.u[j];
          }
        } else if constexpr (std::is_same_v<T, IntegerComparator>) {
          check_qubit(o.target_qubit, state.qubit_count);
          const std::uint64_t grid_mask = (1ULL << o.grid_qubits) - 1;
          const std::uint64_t tbit = 1ULL << o.target_qubit;
          if (tbit & grid_mask) throw std::invalid_argument("comparator target inside grid");
          for (std::uint64_t i = 0; i < dim; ++i) {
            if ((i & tbit) == 0 && (i & grid_mask) > o.threshold &&
                (i & control_mask) == control_mask) {
              std::swap(state.amplitudes[i], state.amplitudes[i | tbit]);
            }
          }
        } else {  // GridControlledRY
          check_qubit(o.target_qubit, state.qubit_count);
          check_qubit(o.control_qubit, state.qubit_count);
          const std::uint64_t grid_mask = (1ULL << o.grid_qubits) - 1;
          const std::uint64_t tbit = 1ULL << o.target_qubit;
          const std::uint64_t cbit = 1ULL << o.control_qubit;
          if ((tbit | cbit) & grid_mask || tbit == cbit) {
            throw std::invalid_argument("grid rotation qubits overlap");
          }
          const double sign = o.inverted ? -1.0 : 1.0;
          for (std::uint64_t i = 0; i < dim; ++i) {
            if ((i & tbit) == 0 && (i & cbit) && (i & control_mask) == control_mask) {
              const double angle = sign * o.angles[i & grid_mask];
              const double c = std::cos(angle / 2), s = std::sin(angle / 2);
              const cdouble a = state.amplitudes[i];
              const cdouble b = state.amplitudes[i | tbit];
              state.amplitudes[i] = c * a - s * b;
              state.amplitudes[i | tbit] = s * a + c * b;
            }
          }
        }
      },
      op);
}

void apply_inplace(Statevector& state, const Circuit& circuit, std::uint64_t control_mask) {
  for (const CircuitOp& op : circuit.ops) apply_inplace(state, op, control_mask);
}

Statevector apply_gate(Statevector state, const GateOp& gate) {
  apply_inplace(state, gate);
  return state;
}

Statevector apply_circuit(Statevector state, const Circuit& circuit) {
  apply_inplace(state, circuit);
  return state;
}

Statevector apply_operator_power_controlled(Statevector state, const Circuit& op,
                                            std::uint64_t power, int control_qubit) {
  check_qubit(control_qubit, state.qubit_count);
  const std::uint64_t cbit = 1ULL << control_qubit;
  if (op.support_mask() & cbit) {
    throw std::invalid_argument("control qubit overlaps operator support");
  }
  for (std::uint64_t p = 0; p < power; ++p) apply_inplace(state, op, cbit);
  return state;
}

std::vector<std::uint64_t> sample(const Statevector& state, std::uint64_t shots, Rng& rng) {
  if (shots == 0) throw std::invalid_argument("shots must be >= 1");
  const std::vector<double> probs = state.probabilities();
  std::vector<double> cumulative(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cumulative[i] = acc;
  }
  std::vector<std::uint64_t> counts(probs.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
    if (idx >= counts.size()) idx = counts.size() - 1;
    ++counts[idx];
  }
  return counts;
}

std::vector<std::uint64_t> sample(const Statevector& state, std::uint64_t shots,
                                  std::uint64_t seed) {
  Rng rng(seed);
  return sample(state, shots, rng);
}

std::vector<double> marginal_probabilities(const Statevector& state, int first_qubit,
                                           int qubit_count) {
  check_qubit(first_qubit, state.qubit_count);
  check_qubit(first_qubit + qubit_count - 1, state.qubit_count);
  const std::uint64_t reg_mask = (1ULL << qubit_count) - 1;
  std::vector<double> out(1ULL << qubit_count, 0.0);
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    out[(i >> first_qubit) & reg_mask] += std::norm(state.amplitudes[i]);
  }
  return out;
}

std::vector<GateOp> qft_gates(int first_qubit, int qubit_count) {
  std::vector<GateOp> gates;
  for (int q = qubit_count - 1; q >= 0; --q) {
    gates.push_back(GateOp::h(first_qubit + q));
    for (int p = q - 1; p >= 0; --p) {
      const double angle = std::numbers::pi / static_cast<double>(1ULL << (q - p));
      gates.push_back(GateOp::cphase(first_qubit + p, first_qubit + q, angle));
    }
  }
  for (int i = 0; i < qubit_count / 2; ++i) {
    const int a = first_qubit + i;
    const int b = first_qubit + qubit_count - 1 - i;
    gates.push_back(GateOp::cx(a, b));
    gates.push_back(GateOp::cx(b, a));
    gates.push_back(GateOp::cx(a, b));
  }
  return gates;
}

void apply_qft(Statevector& state, int first_qubit, int qubit_count) {
  for (const GateOp& g : qft_gates(first_qubit, qubit_count)) apply_inplace(state, g);
}

void apply_inverse_qft(Statevector& state, int first_qubit, int qubit_count) {
  const std::vector<GateOp> gates = qft_gates(first_qubit, qubit_count);
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    apply_inplace(state, it->adjoint());
  }
}

}  // namespace qgan
