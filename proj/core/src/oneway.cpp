// SPDX-License-Identifier: MIT

#include "qbc/oneway.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace qbc::oneway {

int PermutationFamily::table_index(int x, int z) {
  if ((x != 0 && x != 1) || (z != 0 && z != 1)) {
    throw std::invalid_argument("PermutationFamily: x and z must be bits");
  }
  return (x << 1) | z;
}

PermutationFamily PermutationFamily::generate(int n, std::uint64_t seed) {
  if (n < 1 || n > kMaxWidth) {
    throw std::invalid_argument("PermutationFamily: n must be in [1, " +
                                std::to_string(kMaxWidth) + "]");
  }
  PermutationFamily fam;
  fam.n_ = n;
  fam.seed_ = seed;
  fam.invert_calls_ = std::make_shared<std::atomic<std::uint64_t>>(0);
  const std::uint64_t size = std::uint64_t{1} << n;
  Rng rng(derive_seed(seed, 0));
  for (auto& table : fam.tables_) {
    table.resize(size);
    std::iota(table.begin(), table.end(), 0u);
    // Fisher-Yates with explicit bounded draws, so the layout is fixed by
    // the code rather than by a library distribution.
    for (std::uint64_t i = size - 1; i > 0; --i) {
      const std::uint64_t j = rng.below(i + 1);
      std::swap(table[i], table[j]);
    }
  }
  for (int t = 0; t < 4; ++t) {
    auto& inv = fam.inverse_tables_[static_cast<std::size_t>(t)];
    inv.resize(size);
    for (std::uint64_t w = 0; w < size; ++w) {
      inv[fam.tables_[static_cast<std::size_t>(t)][w]] =
          static_cast<std::uint32_t>(w);
    }
  }
  return fam;
}

std::uint64_t PermutationFamily::eval(int x, int z, std::uint64_t w) const {
  if (w >= domain_size()) {
    throw std::invalid_argument("PermutationFamily::eval: input wider than n");
  }
  return tables_[static_cast<std::size_t>(table_index(x, z))][w];
}

std::uint64_t PermutationFamily::invert(int x, int z, std::uint64_t y) const {
  if (y >= domain_size()) {
    throw std::invalid_argument("PermutationFamily::invert: input wider than n");
  }
  invert_calls_->fetch_add(1);
  return inverse_tables_[static_cast<std::size_t>(table_index(x, z))][y];
}

std::string PermutationFamily::to_json() const {
  nlohmann::json j;
  j["schema"] = 1;
  j["n"] = n_;
  j["seed"] = seed_;
  return j.dump();
}

PermutationFamily PermutationFamily::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("schema") || j.at("schema").get<int>() != 1) {
    throw std::invalid_argument("PermutationFamily: unsupported schema");
  }
  return generate(j.at("n").get<int>(), j.at("seed").get<std::uint64_t>());
}

}  // namespace qbc::oneway
