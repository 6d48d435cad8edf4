// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qbc::protocols {

enum class ProtocolKind { Kent, Bb84 };
enum class Phase { Commit, Test, Mask, Open, Done };

// Classical messages exchanged in a run, in the order they occur. Bit
// strings (y, w) are integers of the transcript's commitment width.
struct CommitEvent {
  std::size_t index;
  std::optional<std::uint64_t> y;  // present for Kent, absent for bb84
};
struct SampleEvent {
  std::vector<std::size_t> indices;  // Bob's test sample X, strictly ascending
};
struct TestUnveilEvent {
  std::size_t index;
  int x, z;
  std::uint64_t w;
};
struct TestCheckEvent {
  std::size_t index;
  bool commitment_ok;
  std::optional<bool> quantum_ok;  // absent when Bob had no usable measurement
};
struct MaskEvent {
  std::vector<int> bits;  // x_i XOR b for retained i, ascending
};
struct OpenUnveilEvent {
  std::size_t index;
  int x, z;
  std::optional<std::uint64_t> w;  // present for Kent, absent for bb84
};
struct OpenCheckEvent {
  std::size_t index;
  std::optional<bool> commitment_ok;
  std::optional<bool> quantum_ok;
  std::optional<bool> mask_ok;
};
struct VerdictEvent {
  bool accept;
  int decoded_bit;  // -1 when no single bit could be decoded
  std::string reason;
};

using Event = std::variant<CommitEvent, SampleEvent, TestUnveilEvent,
                           TestCheckEvent, MaskEvent, OpenUnveilEvent,
                           OpenCheckEvent, VerdictEvent>;

// Out-of-order or malformed message, attributed to the party whose message
// it was.
class ProtocolViolation : public std::runtime_error {
 public:
  ProtocolViolation(std::string party, const std::string& what)
      : std::runtime_error("protocol violation by " + party + ": " + what),
        party_(std::move(party)) {}
  const std::string& party() const { return party_; }

 private:
  std::string party_;
};

// Ordered log of one protocol run's classical messages. append() enforces
// the phase machine commit -> test -> mask -> open (commit -> open for
// bb84); any out-of-order event throws ProtocolViolation naming the sender.
class Transcript {
 public:
  Transcript(ProtocolKind kind, std::size_t total_photons,
             std::size_t sample_size, int width);

  void append(Event e);

  ProtocolKind kind() const { return kind_; }
  std::size_t total_photons() const { return total_; }
  std::size_t sample_size() const { return sample_size_; }
  int width() const { return width_; }
  Phase phase() const { return phase_; }
  bool complete() const { return phase_ == Phase::Done; }

  const std::vector<Event>& events() const { return events_; }
  const std::vector<std::size_t>& sample() const;
  const std::vector<std::size_t>& retained() const;
  const std::vector<int>& masked_bits() const;
  std::uint64_t commitment(std::size_t index) const;
  std::optional<VerdictEvent> verdict() const;
  std::vector<TestCheckEvent> test_checks() const;
  std::vector<OpenCheckEvent> open_checks() const;
  std::vector<OpenUnveilEvent> open_unveils() const;

  // One JSON object per line; first line is a schema-versioned header.
  std::string to_json_lines() const;
  static Transcript from_json_lines(const std::string& text);

 private:
  ProtocolKind kind_;
  std::size_t total_;
  std::size_t sample_size_;
  int width_;

  Phase phase_ = Phase::Commit;
  std::size_t commits_seen_ = 0;
  bool sample_recorded_ = false;
  std::size_t test_pos_ = 0;
  bool test_unveil_pending_ = false;
  std::size_t open_pos_ = 0;
  bool open_unveil_pending_ = false;
  bool last_check_failed_ = false;

  std::vector<Event> events_;
  std::vector<std::size_t> sample_;
  std::vector<std::size_t> retained_;
  std::vector<int> masked_bits_;
  std::vector<std::uint64_t> commitments_;
};

}  // namespace qbc::protocols
