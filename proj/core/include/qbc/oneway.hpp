// SPDX-License-Identifier: MIT

#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qbc/rng.hpp"

namespace qbc::oneway {

// Toy model of a classical, unconditionally hiding commitment: four seeded
// bijections on n-bit strings indexed by (x, z), with explicit inverse
// tables. Forward evaluation is the public commitment function; calling
// invert() models breaking the computational assumption, so every call bumps
// a shared audit counter that protocol runs snapshot at phase boundaries.
//
// Immutable after generation apart from the (atomic) audit counter; safe for
// concurrent reads.
class PermutationFamily {
 public:
  static constexpr int kMaxWidth = 12;

  // Four independent pseudorandom bijections (Fisher-Yates over a seeded
  // generator); deterministic in (n, seed).
  static PermutationFamily generate(int n, std::uint64_t seed);

  int n() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t domain_size() const { return std::uint64_t{1} << n_; }

  // y = f_{xz}(w)
  std::uint64_t eval(int x, int z, std::uint64_t w) const;

  // w = f_{xz}^{-1}(y); audited.
  std::uint64_t invert(int x, int z, std::uint64_t y) const;

  std::uint64_t invert_calls() const { return invert_calls_->load(); }

  // Versioned config form; tables are regenerated from (n, seed) on load.
  std::string to_json() const;
  static PermutationFamily from_json(const std::string& text);

 private:
  PermutationFamily() = default;

  static int table_index(int x, int z);

  int n_ = 0;
  std::uint64_t seed_ = 0;
  std::array<std::vector<std::uint32_t>, 4> tables_;
  std::array<std::vector<std::uint32_t>, 4> inverse_tables_;
  std::shared_ptr<std::atomic<std::uint64_t>> invert_calls_;
};

}  // namespace qbc::oneway
