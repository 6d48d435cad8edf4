// SPDX-License-Identifier: MIT

#include "qbc/protocols.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qbc::protocols {

namespace {

using qstate::Basis;

const std::vector<std::string> kBobRegisterTargets{kBobRegister};

// theta_x-basis measurement of the transmitted register, consuming the shot.
int measure_bob_register(qstate::StateVector& system, int x, Rng& rng) {
  const std::vector<Basis> bases{qstate::basis_from_bit(x)};
  auto res = qstate::measure(system, kBobRegisterTargets, bases, rng);
  const int outcome = res.outcome[0];
  system = std::move(res.post_state);
  return outcome;
}

}  // namespace

void KentParams::validate() const {
  if (retained == 0 || retained >= total_photons) {
    throw std::invalid_argument("KentParams: need 0 < retained < total_photons");
  }
  if (width < 1 || width > oneway::PermutationFamily::kMaxWidth) {
    throw std::invalid_argument("KentParams: width must be in [1, 12]");
  }
}

HonestKentAlice::HonestKentAlice(const oneway::PermutationFamily& family)
    : family_(&family) {}

std::uint64_t HonestKentAlice::commit_photon(std::size_t i, Rng& rng) {
  if (i != systems_.size()) {
    throw std::logic_error("HonestKentAlice: commits must arrive in order");
  }
  const int x = rng.next_bit();
  const int z = rng.next_bit();
  const std::uint64_t w = rng.bits(family_->n());
  x_.push_back(x);
  z_.push_back(z);
  w_.push_back(w);
  y_.push_back(family_->eval(x, z, w));
  systems_.push_back(qstate::bb84_state(x, z, kBobRegister));
  return y_.back();
}

qstate::StateVector& HonestKentAlice::system(std::size_t i) {
  return systems_.at(i);
}

TestUnveil HonestKentAlice::unveil_for_test(std::size_t i, Rng&) {
  return {x_.at(i), z_.at(i), w_.at(i)};
}

int HonestKentAlice::mask_bit(std::size_t i, int b, Rng&) {
  return x_.at(i) ^ b;
}

OpenUnveil HonestKentAlice::open_photon(std::size_t i, int mask_bit, int b,
                                        Rng&) {
  const int claimed_x = mask_bit ^ b;
  if (claimed_x == x_.at(i)) {
    return {x_[i], z_[i], w_[i]};
  }
  return {claimed_x, z_.at(i), family_->invert(claimed_x, z_.at(i), y_.at(i))};
}

void KentBob::receive_photon(std::size_t i, qstate::StateVector& system,
                             Rng& rng) {
  if (mode_ == BobMode::Deferred) return;
  if (i != measured_basis_.size()) {
    throw std::logic_error("KentBob: photons must arrive in order");
  }
  const int basis = rng.next_bit();
  measured_basis_.push_back(basis);
  measured_outcome_.push_back(measure_bob_register(system, basis, rng));
}

std::vector<std::size_t> KentBob::choose_sample(std::size_t total,
                                                std::size_t sample_size,
                                                Rng& rng) {
  // uniform subset without replacement: partial Fisher-Yates
  std::vector<std::size_t> pool(total);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t k = 0; k < sample_size; ++k) {
    const std::size_t j = k + rng.below(total - k);
    std::swap(pool[k], pool[j]);
  }
  std::vector<std::size_t> sample(pool.begin(),
                                  pool.begin() + static_cast<long>(sample_size));
  std::sort(sample.begin(), sample.end());
  return sample;
}

std::optional<bool> KentBob::check_photon(std::size_t i,
                                          qstate::StateVector& system, int x,
                                          int z, Rng& rng) {
  if (mode_ == BobMode::Deferred) {
    return measure_bob_register(system, x, rng) == z;
  }
  if (measured_basis_.at(i) != x) return std::nullopt;  // weaker test
  return measured_outcome_.at(i) == z;
}

KentRun kent_commit_phase(AliceStrategy& alice, BobStrategy& bob,
                          const KentParams& params,
                          const oneway::PermutationFamily& family, Rng& rng) {
  params.validate();
  if (family.n() != params.width) {
    throw std::invalid_argument("kent_commit_phase: family width mismatch");
  }
  KentRun run{params,
              &family,
              Transcript(ProtocolKind::Kent, params.total_photons,
                         params.sample_size(), params.width),
              family.invert_calls(),
              false};
  for (std::size_t i = 0; i < params.total_photons; ++i) {
    const std::uint64_t y = alice.commit_photon(i, rng);
    run.transcript.append(CommitEvent{i, y});
    bob.receive_photon(i, alice.system(i), rng);
  }
  return run;
}

bool kent_test_phase(KentRun& run, AliceStrategy& alice, BobStrategy& bob,
                     Rng& rng) {
  const auto sample = bob.choose_sample(run.params.total_photons,
                                        run.params.sample_size(), rng);
  run.transcript.append(SampleEvent{sample});
  for (std::size_t i : sample) {
    const TestUnveil u = alice.unveil_for_test(i, rng);
    run.transcript.append(TestUnveilEvent{i, u.x, u.z, u.w});
    const bool commit_ok =
        run.family->eval(u.x, u.z, u.w) == run.transcript.commitment(i);
    const std::optional<bool> quantum_ok =
        bob.check_photon(i, alice.system(i), u.x, u.z, rng);
    run.transcript.append(TestCheckEvent{i, commit_ok, quantum_ok});
    if (!commit_ok || (quantum_ok && !*quantum_ok)) {
      run.transcript.append(VerdictEvent{
          false, -1, "alice caught at photon " + std::to_string(i)});
      return false;
    }
  }
  return true;
}

void kent_mask_announce(KentRun& run, AliceStrategy& alice, int b, Rng& rng) {
  std::vector<int> bits;
  bits.reserve(run.transcript.retained().size());
  for (std::size_t i : run.transcript.retained()) {
    bits.push_back(alice.mask_bit(i, b, rng));
  }
  run.transcript.append(MaskEvent{std::move(bits)});
}

OpenOutcome kent_open_phase(KentRun& run, AliceStrategy& alice,
                            BobStrategy& bob, int b, Rng& rng) {
  run.early_invert =
      run.family->invert_calls() != run.invert_calls_at_start;
  const auto& retained = run.transcript.retained();
  const auto& masks = run.transcript.masked_bits();

  bool all_ok = true;
  int decoded = -1;
  bool decoded_consistent = true;
  std::string reason;
  for (std::size_t k = 0; k < retained.size(); ++k) {
    const std::size_t i = retained[k];
    const OpenUnveil u = alice.open_photon(i, masks[k], b, rng);
    run.transcript.append(OpenUnveilEvent{i, u.x, u.z, u.w});
    const bool commit_ok =
        run.family->eval(u.x, u.z, u.w) == run.transcript.commitment(i);
    const std::optional<bool> quantum_ok =
        bob.check_photon(i, alice.system(i), u.x, u.z, rng);
    const int photon_bit = u.x ^ masks[k];
    if (decoded == -1 && decoded_consistent) decoded = photon_bit;
    const bool mask_ok = photon_bit == decoded;
    if (!mask_ok) decoded_consistent = false;
    run.transcript.append(OpenCheckEvent{i, commit_ok, quantum_ok, mask_ok});
    if (!commit_ok || (quantum_ok && !*quantum_ok) || !mask_ok) {
      all_ok = false;
      if (reason.empty()) {
        reason = !mask_ok ? "inconsistent mask at photon " + std::to_string(i)
                          : "open check failed at photon " + std::to_string(i);
      }
    }
  }
  if (!decoded_consistent) decoded = -1;
  OpenOutcome out{b, all_ok, decoded, reason};
  run.transcript.append(
      VerdictEvent{out.accepted, out.decoded_bit, out.reason});
  return out;
}

void HonestBb84Alice::prepare(std::size_t count, int commit_bit, Rng& rng) {
  commit_bit_ = commit_bit;
  z_.clear();
  systems_.clear();
  for (std::size_t i = 0; i < count; ++i) {
    z_.push_back(rng.next_bit());
    systems_.push_back(qstate::bb84_state(commit_bit, z_.back(), kBobRegister));
  }
}

qstate::StateVector& HonestBb84Alice::system(std::size_t i) {
  return systems_.at(i);
}

int HonestBb84Alice::open_photon(std::size_t i, int, Rng&) { return z_.at(i); }

Bb84Run bb84_commit_phase(Bb84AliceStrategy& alice, std::size_t count,
                          int commit_bit, Rng& rng) {
  if (count == 0) {
    throw std::invalid_argument("bb84_commit_phase: need at least one photon");
  }
  Bb84Run run{count, Transcript(ProtocolKind::Bb84, count, 0, 0)};
  alice.prepare(count, commit_bit, rng);
  for (std::size_t i = 0; i < count; ++i) {
    run.transcript.append(CommitEvent{i, std::nullopt});
  }
  return run;
}

OpenOutcome bb84_open_phase(Bb84Run& run, Bb84AliceStrategy& alice, int b,
                            Rng& rng) {
  bool all_ok = true;
  std::string reason;
  for (std::size_t i = 0; i < run.photons; ++i) {
    const int z = alice.open_photon(i, b, rng);
    run.transcript.append(OpenUnveilEvent{i, b, z, std::nullopt});
    // deferred Bob: measure now in the claimed basis
    const bool quantum_ok = measure_bob_register(alice.system(i), b, rng) == z;
    run.transcript.append(
        OpenCheckEvent{i, std::nullopt, quantum_ok, std::nullopt});
    if (!quantum_ok) {
      all_ok = false;
      if (reason.empty()) {
        reason = "basis check failed at photon " + std::to_string(i);
      }
    }
  }
  OpenOutcome out{b, all_ok, all_ok ? b : -1, reason};
  run.transcript.append(VerdictEvent{out.accepted, out.decoded_bit, out.reason});
  return out;
}

std::pair<Transcript, OpenOutcome> bb84_commit_protocol(
    Bb84AliceStrategy& alice, std::size_t count, int commit_bit, int open_bit,
    Rng& rng) {
  Bb84Run run = bb84_commit_phase(alice, count, commit_bit, rng);
  OpenOutcome outcome = bb84_open_phase(run, alice, open_bit, rng);
  return {std::move(run.transcript), std::move(outcome)};
}

}  // namespace qbc::protocols
