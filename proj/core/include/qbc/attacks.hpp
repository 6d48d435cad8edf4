// SPDX-License-Identifier: MIT

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qbc/analysis.hpp"
#include "qbc/oneway.hpp"
#include "qbc/protocols.hpp"
#include "qbc/qstate.hpp"
#include "qbc/rng.hpp"

namespace qbc::attacks {

// Register names of the cheating system, left to right: r_w (n qubits),
// r_f (n qubits), r^A_z (1 qubit), r^B_z (1 qubit, the transmitted one).
inline constexpr const char* kRegW = "rw";
inline constexpr const char* kRegF = "rf";
inline constexpr const char* kRegAz = "rAz";
inline constexpr const char* kRegBz = protocols::kBobRegister;

enum class GammaPhase { Prepared, Committed, Tested, Erased, Opened };

// One photon's entangled commitment system, tracked through the attack.
struct GammaSystem {
  qstate::StateVector state;
  qstate::Basis theta;
  std::optional<std::uint64_t> y;  // announced commitment, once measured
  GammaPhase phase = GammaPhase::Prepared;
};

// Prepares the entangled state
//   (1/sqrt(2^{n+1})) sum_w |w>|f_{theta 0}(w)>|0>_th|0>_th
//                         + |w>|f_{theta 1}(w)>|1>_th|1>_th
// by uniform superposition on r_w and r^A_z, reversible table evaluation
// into r_f controlled on r^A_z in the theta basis, and a theta-basis copy
// into r^B_z. The superposition over theta itself is deliberately omitted.
GammaSystem prepare_gamma(const oneway::PermutationFamily& fam,
                          qstate::Basis theta);

// Commit: measure r_f in the rectilinear basis and announce the outcome.
// The two surviving branches carry the preimages under f_{theta 0} and
// f_{theta 1}; no inverse is ever computed here.
std::uint64_t kent_commit(GammaSystem& sys, Rng& rng);

// Test-phase unveiling: measure r_w in + and r^A_z in theta. Bob's
// commitment equation and basis check then pass with certainty.
protocols::TestUnveil kent_unveil_for_test(GammaSystem& sys, Rng& rng);

// Disentangles r_w by XORing the basis-dependent preimage of y into it
// (a reversible computation in the basis defined by theta for r^A_z),
// leaving (r^A_z, r^B_z) in a perfectly correlated pair. Uses the inverse
// tables; callers must be past the test phase.
void erase_rw(GammaSystem& sys, const oneway::PermutationFamily& fam);

// Opens the commitment as bit b against the announced mask: measures r^A_z
// in the claimed basis and inverts f for the matching preimage. Bob's open
// checks pass with certainty on the erased state.
protocols::OpenUnveil kent_open_as(GammaSystem& sys,
                                   const oneway::PermutationFamily& fam, int b,
                                   int claimed_mask, Rng& rng);

// Exploration variant: also hold the basis choice theta in superposition on
// an extra register (kRegTheta). It collapses no later than the mask
// announcement, since x_i XOR b must be said out loud, which is why the
// plain per-theta preparation loses nothing.
inline constexpr const char* kRegTheta = "rTheta";

// (|0>|gamma(+)> + |1>|gamma(x)>) / sqrt(2) over (rTheta, rw, rf, rAz, rBz).
qstate::StateVector prepare_gamma_superposed(
    const oneway::PermutationFamily& fam);

enum class ThetaMode { Classical, Superposed };

// Kent-protocol Alice that runs the honest algorithm at the quantum level
// and can open either bit after the commit (and mask) phases.
class KentAttackAlice final : public protocols::AliceStrategy {
 public:
  explicit KentAttackAlice(const oneway::PermutationFamily& family,
                           ThetaMode theta_mode = ThetaMode::Classical);

  std::uint64_t commit_photon(std::size_t i, Rng& rng) override;
  qstate::StateVector& system(std::size_t i) override;
  protocols::TestUnveil unveil_for_test(std::size_t i, Rng& rng) override;
  int mask_bit(std::size_t i, int b, Rng& rng) override;
  protocols::OpenUnveil open_photon(std::size_t i, int mask_bit, int b,
                                    Rng& rng) override;

  const GammaSystem& gamma(std::size_t i) const { return systems_.at(i); }

 private:
  void collapse_theta(std::size_t i, Rng& rng);

  const oneway::PermutationFamily* family_;
  ThetaMode theta_mode_;
  std::vector<GammaSystem> systems_;
  std::vector<bool> theta_fixed_;
};

// bb84 attack: send halves of EPR pairs, measure the kept halves in the
// basis of whichever bit is opened.
class EprAttackBb84Alice final : public protocols::Bb84AliceStrategy {
 public:
  void prepare(std::size_t count, int commit_bit, Rng& rng) override;
  qstate::StateVector& system(std::size_t i) override;
  int open_photon(std::size_t i, int b, Rng& rng) override;

 private:
  std::vector<qstate::StateVector> systems_;
};

inline EprAttackBb84Alice epr_attack_bb84() { return EprAttackBb84Alice{}; }

// --- keeping classical messages at the quantum level ---

struct CoherentEvalResult {
  std::vector<int> message;     // the announced bits, MSB-first
  std::uint64_t message_value;
  qstate::StateVector state;    // out-register appended and collapsed; input
                                // registers still in superposition
};

// Computes a classical message f(inputs) without measuring the inputs:
// appends a fresh out-register, applies |u>|r> -> |u>|r XOR f(u)>, and
// measures only the out-register.
CoherentEvalResult coherent_message_eval(
    const qstate::StateVector& s, std::span<const std::string> inputs,
    const std::function<std::uint64_t(std::uint64_t)>& f, int out_width,
    Rng& rng, const std::string& out_register = "msg");

// --- the generic attack on a purified protocol ---

// Purified commit phase: everything, measurements included, deferred to
// quantum registers, so committing bit b is one unitary on the full system.
struct PurifiedProtocol {
  qstate::StateVector initial;
  qstate::UnitaryOp commit0;
  qstate::UnitaryOp commit1;
  analysis::Bipartition bipartition;
};

struct GenericAttackPlan {
  qstate::StateVector prepared;  // what Alice creates during the commit phase
  std::array<qstate::UnitaryOp, 2> open_map;  // side-A rotation before opening b
  std::array<double, 2> predicted_overlap;    // with the honest |phi_b>
};

// If the reduced B-states of U_0|psi> and U_1|psi> coincide, Alice prepares
// |phi_0> and swaps in the exact Schmidt-pairing unitary to open 1.
// Otherwise she prepares the Uhlmann-optimal purification (realized as
// |phi_0> itself) and the best side-A rotation, achieving overlap equal to
// the reduced-state fidelity.
GenericAttackPlan generic_attack(const PurifiedProtocol& p);

}  // namespace qbc::attacks
