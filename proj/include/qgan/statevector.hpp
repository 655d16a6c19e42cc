#pragma once

#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include "qgan/rng.hpp"

namespace qgan {

using cdouble = std::complex<double>;

// Dense pure state of `qubit_count` qubits. Basis index j encodes qubit 0 as
// the least significant bit.
struct Statevector {
  int qubit_count = 0;
  std::vector<cdouble> amplitudes;

  Statevector() = default;
  explicit Statevector(int qubits);  // |0...0>
  static Statevector basis_state(int qubits, std::uint64_t index);

  std::uint64_t dim() const { return amplitudes.size(); }
  double norm_sq() const;
  std::vector<double> probabilities() const;
};

enum class GateKind { RY, H, X, CZ, CX, ControlledRY, CPhase, PhaseReflection };

// One primitive gate. RY is exp(-i*angle*Y/2). PhaseReflection flips the sign
// of every basis state with (index & mask) == value; mask == 0 is a global -1.
struct GateOp {
  GateKind kind = GateKind::RY;
  int target = -1;
  int control = -1;
  double angle = 0.0;
  std::uint64_t mask = 0;
  std::uint64_t value = 0;

  static GateOp ry(int qubit, double angle);
  static GateOp h(int qubit);
  static GateOp x(int qubit);
  static GateOp cz(int a, int b);
  static GateOp cx(int control, int target);
  static GateOp controlled_ry(int control, int target, double angle);
  static GateOp cphase(int control, int target, double angle);
  static GateOp phase_reflection(std::uint64_t mask, std::uint64_t value);

  GateOp adjoint() const;
  std::uint64_t support_mask() const;
};

// Householder reflection I - 2|u><u| over the low `qubit_count` qubits.
// Built from a probability vector it maps |0..0> to sum_i sqrt(p_i)|i>.
// Self-adjoint.
struct HouseholderLoad {
  int qubit_count = 0;
  std::vector<double> u;  // empty means identity (target was |0..0>)

  static HouseholderLoad from_probabilities(const std::vector<double>& probabilities);
};

// X on `target_qubit` for basis states whose low `grid_qubits` bits read a
// value > threshold. Self-inverse.
struct IntegerComparator {
  int grid_qubits = 0;
  std::uint64_t threshold = 0;
  int target_qubit = -1;
};

// RY(angles[i]) on `target_qubit` conditioned on `control_qubit`, where i is
// the value of the low `grid_qubits` bits.
struct GridControlledRY {
  int grid_qubits = 0;
  int control_qubit = -1;
  int target_qubit = -1;
  std::vector<double> angles;  // size 2^grid_qubits
  bool inverted = false;
};

using CircuitOp = std::variant<GateOp, HouseholderLoad, IntegerComparator, GridControlledRY>;

// Ordered op sequence; ops[0] is applied first.
struct Circuit {
  std::vector<CircuitOp> ops;

  void add(const GateOp& g) { ops.emplace_back(g); }
  void add(CircuitOp op) { ops.emplace_back(std::move(op)); }
  void append(const std::vector<GateOp>& gates);
  void append(const Circuit& other);

  Circuit adjoint() const;
  std::uint64_t support_mask() const;
};

// control_mask: the op acts only on basis states with all mask bits set.
// Mask bits must be outside the op's support.
void apply_inplace(Statevector& state, const GateOp& gate, std::uint64_t control_mask = 0);
void apply_inplace(Statevector& state, const CircuitOp& op, std::uint64_t control_mask = 0);
void apply_inplace(Statevector& state, const Circuit& circuit, std::uint64_t control_mask = 0);

Statevector apply_gate(Statevector state, const GateOp& gate);
Statevector apply_circuit(Statevector state, const Circuit& circuit);

// Applies `op` `power` times, conditioned on control_qubit = |1>.
Statevector apply_operator_power_controlled(Statevector state, const Circuit& op,
                                            std::uint64_t power, int control_qubit);

// Counts over all 2^q outcomes; deterministic given the rng state. Shots are
// consumed sequentially from the engine.
std::vector<std::uint64_t> sample(const Statevector& state, std::uint64_t shots, Rng& rng);
std::vector<std::uint64_t> sample(const Statevector& state, std::uint64_t shots, std::uint64_t seed);

// Outcome distribution of the contiguous register [first_qubit, first_qubit+qubit_count).
std::vector<double> marginal_probabilities(const Statevector& state, int first_qubit,
                                           int qubit_count);

// QFT over the contiguous register, LSB-first within the register:
// |y> -> 2^{-m/2} sum_x exp(2*pi*i*x*y / 2^m) |x>.
std::vector<GateOp> qft_gates(int first_qubit, int qubit_count);
void apply_qft(Statevector& state, int first_qubit, int qubit_count);
void apply_inverse_qft(Statevector& state, int first_qubit, int qubit_count);

}  // namespace qgan
