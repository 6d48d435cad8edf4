// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qbc/oneway.hpp"
#include "qbc/qstate.hpp"
#include "qbc/rng.hpp"
#include "qbc/transcript.hpp"

namespace qbc::protocols {

// Name of the register Alice physically transmits. By convention Bob's
// measurements touch only this register of a shared simulated system; the
// other registers are Alice's.
inline constexpr const char* kBobRegister = "rBz";

struct KentParams {
  std::size_t total_photons = 20;  // N_B
  std::size_t retained = 10;       // N = |Y|
  int width = 3;                   // commitment width n
  std::uint64_t seed = 0;          // experiment seed (permutation family)

  std::size_t sample_size() const { return total_photons - retained; }
  void validate() const;
};

struct TestUnveil {
  int x, z;
  std::uint64_t w;
};
struct OpenUnveil {
  int x, z;
  std::uint64_t w;
};

// A party in a Kent-style run. Strategies interact with the run only through
// the returned classical messages and the shared per-photon systems.
class AliceStrategy {
 public:
  virtual ~AliceStrategy() = default;
  // Commit phase, photon i (called in order): prepare the joint system and
  // return the commitment evidence y_i.
  virtual std::uint64_t commit_photon(std::size_t i, Rng& rng) = 0;
  // The simulated joint system holding photon i (valid after commit_photon).
  virtual qstate::StateVector& system(std::size_t i) = 0;
  virtual TestUnveil unveil_for_test(std::size_t i, Rng& rng) = 0;
  // x_i XOR b for retained photon i, announced at mask time.
  virtual int mask_bit(std::size_t i, int b, Rng& rng) = 0;
  // Open-phase unveiling for photon i, claiming bit b against the announced
  // mask bit.
  virtual OpenUnveil open_photon(std::size_t i, int mask_bit, int b, Rng& rng) = 0;
};

class BobStrategy {
 public:
  virtual ~BobStrategy() = default;
  virtual void receive_photon(std::size_t i, qstate::StateVector& system,
                              Rng& rng) = 0;
  virtual std::vector<std::size_t> choose_sample(std::size_t total,
                                                 std::size_t sample_size,
                                                 Rng& rng) = 0;
  // theta_x-basis check of the transmitted register against claimed z;
  // nullopt when Bob has no usable measurement for this photon.
  virtual std::optional<bool> check_photon(std::size_t i,
                                           qstate::StateVector& system, int x,
                                           int z, Rng& rng) = 0;
};

// Honest Alice: uniform (x_i, z_i, w_i), BB84 pure states, y_i = f_{xz}(w).
// When asked to open against a basis she did not use, she meets the
// commitment equation by inverting f (legitimate at open time, when the
// computational assumption is dropped) and takes her chances on Bob's
// measurement.
class HonestKentAlice : public AliceStrategy {
 public:
  explicit HonestKentAlice(const oneway::PermutationFamily& family);

  std::uint64_t commit_photon(std::size_t i, Rng& rng) override;
  qstate::StateVector& system(std::size_t i) override;
  TestUnveil unveil_for_test(std::size_t i, Rng& rng) override;
  int mask_bit(std::size_t i, int b, Rng& rng) override;
  OpenUnveil open_photon(std::size_t i, int mask_bit, int b, Rng& rng) override;

  int basis_bit_of(std::size_t i) const { return x_.at(i); }
  int encoded_bit_of(std::size_t i) const { return z_.at(i); }

 private:
  const oneway::PermutationFamily* family_;
  std::vector<int> x_, z_;
  std::vector<std::uint64_t> w_, y_;
  std::vector<qstate::StateVector> systems_;
};

enum class BobMode { Deferred, Immediate };

// Bob for the Kent protocol. Deferred mode (the default, the stronger test)
// keeps every photon unmeasured until a check asks for it; immediate mode
// measures each photon at reception in a random basis and can check an
// unveiling only when the bases happen to match.
class KentBob final : public BobStrategy {
 public:
  explicit KentBob(BobMode mode = BobMode::Deferred) : mode_(mode) {}

  void receive_photon(std::size_t i, qstate::StateVector& system,
                      Rng& rng) override;
  std::vector<std::size_t> choose_sample(std::size_t total,
                                         std::size_t sample_size,
                                         Rng& rng) override;
  std::optional<bool> check_photon(std::size_t i, qstate::StateVector& system,
                                   int x, int z, Rng& rng) override;

 private:
  BobMode mode_;
  std::vector<int> measured_basis_;
  std::vector<int> measured_outcome_;
};

struct OpenOutcome {
  int claimed_bit = -1;
  bool accepted = false;
  int decoded_bit = -1;
  std::string reason;
};

// One Kent run's orchestration state.
struct KentRun {
  KentParams params;
  const oneway::PermutationFamily* family;
  Transcript transcript;
  std::uint64_t invert_calls_at_start = 0;
  bool early_invert = false;  // f was inverted before the open phase
};

KentRun kent_commit_phase(AliceStrategy& alice, BobStrategy& bob,
                          const KentParams& params,
                          const oneway::PermutationFamily& family, Rng& rng);

// Returns false (with a "caught" verdict recorded) on the first failed check.
bool kent_test_phase(KentRun& run, AliceStrategy& alice, BobStrategy& bob,
                     Rng& rng);

void kent_mask_announce(KentRun& run, AliceStrategy& alice, int b, Rng& rng);

OpenOutcome kent_open_phase(KentRun& run, AliceStrategy& alice,
                            BobStrategy& bob, int b, Rng& rng);

// --- bb84-style commitment (all photons share one basis; no
// sub-commitments, no test phase; Bob measures at open time) ---

class Bb84AliceStrategy {
 public:
  virtual ~Bb84AliceStrategy() = default;
  virtual void prepare(std::size_t count, int commit_bit, Rng& rng) = 0;
  virtual qstate::StateVector& system(std::size_t i) = 0;
  // z_i announced when opening bit b.
  virtual int open_photon(std::size_t i, int b, Rng& rng) = 0;
};

class HonestBb84Alice final : public Bb84AliceStrategy {
 public:
  void prepare(std::size_t count, int commit_bit, Rng& rng) override;
  qstate::StateVector& system(std::size_t i) override;
  int open_photon(std::size_t i, int b, Rng& rng) override;

 private:
  int commit_bit_ = 0;
  std::vector<int> z_;
  std::vector<qstate::StateVector> systems_;
};

struct Bb84Run {
  std::size_t photons;
  Transcript transcript;
};

Bb84Run bb84_commit_phase(Bb84AliceStrategy& alice, std::size_t count,
                          int commit_bit, Rng& rng);

OpenOutcome bb84_open_phase(Bb84Run& run, Bb84AliceStrategy& alice, int b,
                            Rng& rng);

// Full run: commit with commit_bit, then open open_bit.
std::pair<Transcript, OpenOutcome> bb84_commit_protocol(
    Bb84AliceStrategy& alice, std::size_t count, int commit_bit, int open_bit,
    Rng& rng);

}  // namespace qbc::protocols
