// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qbc::qstate {

struct Register {
  std::string name;
  int width = 0;  // qubits

  bool operator==(const Register&) const = default;
};

// An ordered set of named qubit registers defining the basis-index layout of
// a state vector.
//
// Index convention (used everywhere in this library): registers are
// big-endian in declaration order. The FIRST register occupies the MOST
// significant bits of a basis-state index, and within a register the first
// qubit is the most significant bit of its slice. So for registers
// (a:2, b:1), basis index 0b101 means a = 0b10, b = 0b1.
class RegisterMap {
 public:
  RegisterMap() = default;
  explicit RegisterMap(std::vector<Register> registers);

  static RegisterMap single(std::string name, int width);

  int total_width() const { return total_width_; }
  std::size_t dim() const { return std::size_t{1} << total_width_; }
  const std::vector<Register>& registers() const { return registers_; }

  bool has(std::string_view name) const;
  const Register& reg(std::string_view name) const;

  // Bits to the right of the named register's slice in a basis index.
  int shift(std::string_view name) const;

  // The register's value inside a basis index.
  std::uint64_t extract(std::string_view name, std::uint64_t basis_index) const;

  // Replaces the register's slice inside a basis index.
  std::uint64_t insert(std::string_view name, std::uint64_t basis_index,
                       std::uint64_t value) const;

  bool operator==(const RegisterMap&) const = default;

 private:
  std::vector<Register> registers_;
  int total_width_ = 0;
};

// Layout concatenation: a's registers stay in the most significant bits.
RegisterMap concat(const RegisterMap& a, const RegisterMap& b);

// Splits a basis index into (sub, rest) for a subset of registers.
//
// The sub index concatenates the named registers in the order GIVEN (first
// name = most significant bits); the rest index concatenates the remaining
// registers in layout order. This is the single piece of index arithmetic
// behind targeted unitaries, measurement and partial traces.
class SubsetIndexer {
 public:
  SubsetIndexer(const RegisterMap& layout, std::span<const std::string> names);

  int sub_width() const { return sub_width_; }
  std::size_t sub_dim() const { return std::size_t{1} << sub_width_; }
  int rest_width() const { return rest_width_; }
  std::size_t rest_dim() const { return std::size_t{1} << rest_width_; }

  std::uint64_t sub_of(std::uint64_t global) const;
  std::uint64_t rest_of(std::uint64_t global) const;
  std::uint64_t global_of(std::uint64_t sub, std::uint64_t rest) const;

  // The selected registers as a standalone layout, in the given order.
  const RegisterMap& sub_layout() const { return sub_layout_; }

  // Global shift (bits to the right) of the qubit at position `q` of the sub
  // index, counting q = 0 as the most significant sub-index bit.
  int global_shift_of_sub_qubit(int q) const;

 private:
  struct Slice {
    int src_shift;  // shift of the slice in the global index
    int width;
  };
  std::vector<Slice> sub_slices_;   // given-name order
  std::vector<Slice> rest_slices_;  // layout order
  RegisterMap sub_layout_;
  int sub_width_ = 0;
  int rest_width_ = 0;
};

}  // namespace qbc::qstate
