// SPDX-License-Identifier: MIT

#include "qbc/registers.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace qbc::qstate {

RegisterMap::RegisterMap(std::vector<Register> registers)
    : registers_(std::move(registers)) {
  if (registers_.empty()) {
    throw std::invalid_argument("RegisterMap: at least one register required");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& r : registers_) {
    if (r.width < 1) {
      throw std::invalid_argument("RegisterMap: register '" + r.name +
                                  "' must have width >= 1");
    }
    if (!seen.insert(r.name).second) {
      throw std::invalid_argument("RegisterMap: duplicate register name '" +
                                  r.name + "'");
    }
    total_width_ += r.width;
  }
  if (total_width_ > 62) {
    throw std::invalid_argument("RegisterMap: total width too large");
  }
}

RegisterMap RegisterMap::single(std::string name, int width) {
  return RegisterMap({{std::move(name), width}});
}

bool RegisterMap::has(std::string_view name) const {
  return std::any_of(registers_.begin(), registers_.end(),
                     [&](const Register& r) { return r.name == name; });
}

const Register& RegisterMap::reg(std::string_view name) const {
  for (const auto& r : registers_) {
    if (r.name == name) return r;
  }
  throw std::invalid_argument("RegisterMap: unknown register '" +
                              std::string(name) + "'");
}

int RegisterMap::shift(std::string_view name) const {
  int right = total_width_;
  for (const auto& r : registers_) {
    right -= r.width;
    if (r.name == name) return right;
  }
  throw std::invalid_argument("RegisterMap: unknown register '" +
                              std::string(name) + "'");
}

std::uint64_t RegisterMap::extract(std::string_view name,
                                   std::uint64_t basis_index) const {
  const Register& r = reg(name);
  const int s = shift(name);
  return (basis_index >> s) & ((std::uint64_t{1} << r.width) - 1);
}

std::uint64_t RegisterMap::insert(std::string_view name,
                                  std::uint64_t basis_index,
                                  std::uint64_t value) const {
  const Register& r = reg(name);
  const int s = shift(name);
  const std::uint64_t mask = ((std::uint64_t{1} << r.width) - 1) << s;
  return (basis_index & ~mask) | ((value << s) & mask);
}

RegisterMap concat(const RegisterMap& a, const RegisterMap& b) {
  std::vector<Register> regs = a.registers();
  regs.insert(regs.end(), b.registers().begin(), b.registers().end());
  return RegisterMap(std::move(regs));
}

SubsetIndexer::SubsetIndexer(const RegisterMap& layout,
                             std::span<const std::string> names) {
  if (names.empty()) {
    throw std::invalid_argument("SubsetIndexer: empty register subset");
  }
  std::unordered_set<std::string_view> chosen;
  std::vector<Register> sub_regs;
  for (const auto& name : names) {
    const Register& r = layout.reg(name);  // throws on unknown name
    if (!chosen.insert(name).second) {
      throw std::invalid_argument("SubsetIndexer: register '" + name +
                                  "' listed twice");
    }
    sub_slices_.push_back({layout.shift(name), r.width});
    sub_regs.push_back(r);
    sub_width_ += r.width;
  }
  for (const auto& r : layout.registers()) {
    if (!chosen.contains(r.name)) {
      rest_slices_.push_back({layout.shift(r.name), r.width});
      rest_width_ += r.width;
    }
  }
  sub_layout_ = RegisterMap(std::move(sub_regs));
}

std::uint64_t SubsetIndexer::sub_of(std::uint64_t global) const {
  std::uint64_t sub = 0;
  for (const auto& s : sub_slices_) {
    sub = (sub << s.width) |
          ((global >> s.src_shift) & ((std::uint64_t{1} << s.width) - 1));
  }
  return sub;
}

std::uint64_t SubsetIndexer::rest_of(std::uint64_t global) const {
  std::uint64_t rest = 0;
  for (const auto& s : rest_slices_) {
    rest = (rest << s.width) |
           ((global >> s.src_shift) & ((std::uint64_t{1} << s.width) - 1));
  }
  return rest;
}

std::uint64_t SubsetIndexer::global_of(std::uint64_t sub,
                                       std::uint64_t rest) const {
  std::uint64_t global = 0;
  int consumed = sub_width_;
  for (const auto& s : sub_slices_) {
    consumed -= s.width;
    const std::uint64_t v = (sub >> consumed) & ((std::uint64_t{1} << s.width) - 1);
    global |= v << s.src_shift;
  }
  consumed = rest_width_;
  for (const auto& s : rest_slices_) {
    consumed -= s.width;
    const std::uint64_t v = (rest >> consumed) & ((std::uint64_t{1} << s.width) - 1);
    global |= v << s.src_shift;
  }
  return global;
}

int SubsetIndexer::global_shift_of_sub_qubit(int q) const {
  if (q < 0 || q >= sub_width_) {
    throw std::out_of_range("SubsetIndexer: sub qubit index out of range");
  }
  int pos = 0;  // qubits consumed from the MSB side of the sub index
  for (const auto& s : sub_slices_) {
    if (q < pos + s.width) {
      // qubit (q - pos) within this slice, MSB first
      return s.src_shift + (s.width - 1 - (q - pos));
    }
    pos += s.width;
  }
  throw std::logic_error("SubsetIndexer: unreachable");
}

}  // namespace qbc::qstate
