// SPDX-License-Identifier: MIT

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qbc/registers.hpp"
#include "qbc/rng.hpp"

namespace qbc::qstate {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Structural tolerance for norm / unitarity / hermiticity checks.
inline constexpr double kStructuralTol = 1e-9;
// Tolerance for spectral-function comparisons (matrix square roots amplify
// eigenvalue error).
inline constexpr double kSpectralTol = 1e-7;

// Measurement bases for single qubits. The diagonal convention is fixed as
// |0>x = (|0> + |1>)/sqrt(2), |1>x = (|0> - |1>)/sqrt(2).
enum class Basis { Rectilinear, Diagonal };

inline Basis basis_from_bit(int x) {
  return x == 0 ? Basis::Rectilinear : Basis::Diagonal;
}
inline int basis_bit(Basis b) { return b == Basis::Rectilinear ? 0 : 1; }

// Pure state over an ordered set of named registers. Immutable after
// construction; every operation returns a new value. Norm is validated to 1
// within 1e-9 at construction.
class StateVector {
 public:
  StateVector(RegisterMap layout, CVec amplitudes);

  // |basis_index> in the given layout.
  static StateVector computational(RegisterMap layout, std::uint64_t basis_index);

  const RegisterMap& layout() const { return layout_; }
  const CVec& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }

 private:
  RegisterMap layout_;
  CVec amplitudes_;
};

// Unitary operator, validated U U^dag = I within 1e-9 at construction.
// `target` optionally names the registers the operator is meant for; it is
// used as the default target set by apply_unitary.
class UnitaryOp {
 public:
  explicit UnitaryOp(CMat entries,
                     std::optional<std::vector<std::string>> target = {});

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const CMat& matrix() const { return entries_; }
  const std::optional<std::vector<std::string>>& target() const { return target_; }

  static UnitaryOp identity(std::size_t dim);
  static UnitaryOp hadamard();
  static UnitaryOp pauli_x();
  static UnitaryOp pauli_z();

 private:
  CMat entries_;
  std::optional<std::vector<std::string>> target_;
};

// The BB84 coding: bit z encoded in basis {+, x}[x].
//   (0,0) -> |0>+   (0,1) -> |1>+   (1,0) -> |0>x   (1,1) -> |1>x
StateVector bb84_state(int x, int z, std::string register_name = "rBz");

// Single-qubit state |z> in the given basis, as an amplitude pair.
CVec basis_ket(Basis basis, int z);

// Tensor composition; register names must be disjoint. a's registers occupy
// the most significant index bits.
StateVector tensor(const StateVector& a, const StateVector& b);

// <a|b>; layouts must match.
Complex inner_product(const StateVector& a, const StateVector& b);

// Applies u to the sub-index of `targets` (in the given order), identity
// elsewhere. If targets is empty, u.target() is used.
StateVector apply_unitary(const StateVector& s, const UnitaryOp& u,
                          std::span<const std::string> targets = {});

// Applies a 2x2 gate to one qubit of a register (qubit 0 = the register's
// most significant bit).
StateVector apply_single_qubit(const StateVector& s, const CMat& gate,
                               std::string_view register_name, int qubit = 0);

// Applies a reversible classical function as a basis-state permutation of the
// targets' sub-index: |t> -> |perm(t)>. perm must be a bijection on
// [0, 2^width); non-bijections are caught by the output norm check.
StateVector apply_basis_permutation(
    const StateVector& s, std::span<const std::string> targets,
    const std::function<std::uint64_t(std::uint64_t)>& perm);

// Returns the same state with registers rearranged into `new_order` (which
// must name every register exactly once).
StateVector reorder_registers(const StateVector& s,
                              std::span<const std::string> new_order);

// Tensors |0...0> of the named width onto the end of the layout.
StateVector append_register(const StateVector& s, std::string name, int width);

struct MeasureResult {
  std::vector<int> outcome;  // one bit per target qubit, MSB-first per target order
  StateVector post_state;    // renormalized projection, original frame
  double probability;        // Born weight of the sampled outcome
};

// Projective measurement of the target registers, one basis per qubit
// (qubits enumerated in target order, MSB-first within each register).
// Outcome is sampled by inverse CDF from a single rng draw; deterministic
// given the rng state.
MeasureResult measure(const StateVector& s, std::span<const std::string> targets,
                      std::span<const Basis> basis_per_qubit, Rng& rng);

// Born weights of all 2^k outcomes of the same measurement, indexed by the
// outcome's integer value (MSB-first). Sums to 1 within 1e-9.
std::vector<double> outcome_distribution(const StateVector& s,
                                         std::span<const std::string> targets,
                                         std::span<const Basis> basis_per_qubit);

// Deterministic projection onto one outcome; throws if its probability is
// numerically zero.
MeasureResult project_outcome(const StateVector& s,
                              std::span<const std::string> targets,
                              std::span<const Basis> basis_per_qubit,
                              std::uint64_t outcome);

// Packs outcome bits (MSB-first) into an integer, and back.
std::uint64_t pack_bits(std::span<const int> bits);
std::vector<int> unpack_bits(std::uint64_t value, int width);

}  // namespace qbc::qstate
