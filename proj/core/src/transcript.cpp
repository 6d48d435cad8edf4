// SPDX-License-Identifier: MIT

#include "qbc/transcript.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace qbc::protocols {

namespace {

using nlohmann::json;

constexpr const char* kAlice = "alice";
constexpr const char* kBob = "bob";

bool is_bit(int v) { return v == 0 || v == 1; }

std::string bits_to_string(std::uint64_t v, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((v >> (width - 1 - i)) & 1) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

std::uint64_t bits_from_string(const std::string& s) {
  std::uint64_t v = 0;
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("transcript: malformed bit string '" + s + "'");
    }
    v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return v;
}

}  // namespace

Transcript::Transcript(ProtocolKind kind, std::size_t total_photons,
                       std::size_t sample_size, int width)
    : kind_(kind), total_(total_photons), sample_size_(sample_size),
      width_(width) {
  if (total_ == 0) {
    throw std::invalid_argument("Transcript: need at least one photon");
  }
  if (kind_ == ProtocolKind::Kent) {
    if (sample_size_ == 0 || sample_size_ >= total_) {
      throw std::invalid_argument("Transcript: sample size must satisfy 0 < |X| < N_B");
    }
    if (width_ < 1) {
      throw std::invalid_argument("Transcript: Kent runs need a commitment width");
    }
  } else {
    sample_size_ = 0;
    width_ = 0;
    // bb84 opens every photon
    retained_.resize(total_);
    for (std::size_t i = 0; i < total_; ++i) retained_[i] = i;
  }
  commitments_.assign(total_, 0);
}

void Transcript::append(Event e) {
  const bool check_failure_gate = last_check_failed_;
  last_check_failed_ = false;

  std::visit(
      [&](auto&& ev) {
        using T = std::decay_t<decltype(ev)>;
        if (phase_ == Phase::Done) {
          throw ProtocolViolation(kBob, "run already has a verdict");
        }
        if constexpr (std::is_same_v<T, CommitEvent>) {
          if (phase_ != Phase::Commit) {
            throw ProtocolViolation(kAlice, "commit outside commit phase");
          }
          if (ev.index != commits_seen_) {
            throw ProtocolViolation(kAlice, "commit index out of order");
          }
          if (kind_ == ProtocolKind::Kent) {
            if (!ev.y || *ev.y >= (std::uint64_t{1} << width_)) {
              throw ProtocolViolation(kAlice, "commitment evidence missing or too wide");
            }
            commitments_[ev.index] = *ev.y;
          } else if (ev.y) {
            throw ProtocolViolation(kAlice, "bb84 commits carry no evidence");
          }
          ++commits_seen_;
          if (commits_seen_ == total_) {
            phase_ = kind_ == ProtocolKind::Kent ? Phase::Test : Phase::Open;
          }
        } else if constexpr (std::is_same_v<T, SampleEvent>) {
          if (kind_ != ProtocolKind::Kent) {
            throw ProtocolViolation(kBob, "bb84 has no test sample");
          }
          if (phase_ != Phase::Test || sample_recorded_) {
            throw ProtocolViolation(kBob, "sample announced out of order");
          }
          if (ev.indices.size() != sample_size_) {
            throw ProtocolViolation(kBob, "sample size mismatch");
          }
          for (std::size_t k = 0; k < ev.indices.size(); ++k) {
            if (ev.indices[k] >= total_ ||
                (k > 0 && ev.indices[k] <= ev.indices[k - 1])) {
              throw ProtocolViolation(kBob, "sample must be ascending photon indices");
            }
          }
          sample_ = ev.indices;
          retained_.clear();
          for (std::size_t i = 0; i < total_; ++i) {
            if (!std::binary_search(sample_.begin(), sample_.end(), i)) {
              retained_.push_back(i);
            }
          }
          sample_recorded_ = true;
        } else if constexpr (std::is_same_v<T, TestUnveilEvent>) {
          if (phase_ != Phase::Test || !sample_recorded_ ||
              test_unveil_pending_ || test_pos_ >= sample_.size()) {
            throw ProtocolViolation(kAlice, "test unveil out of order");
          }
          if (ev.index != sample_[test_pos_]) {
            throw ProtocolViolation(kAlice, "test unveil for wrong photon");
          }
          if (!is_bit(ev.x) || !is_bit(ev.z) ||
              ev.w >= (std::uint64_t{1} << width_)) {
            throw ProtocolViolation(kAlice, "malformed test unveiling");
          }
          test_unveil_pending_ = true;
        } else if constexpr (std::is_same_v<T, TestCheckEvent>) {
          if (phase_ != Phase::Test || !test_unveil_pending_) {
            throw ProtocolViolation(kBob, "test check without an unveiling");
          }
          if (ev.index != sample_[test_pos_]) {
            throw ProtocolViolation(kBob, "test check for wrong photon");
          }
          test_unveil_pending_ = false;
          ++test_pos_;
          if (!ev.commitment_ok || (ev.quantum_ok && !*ev.quantum_ok)) {
            last_check_failed_ = true;
          }
          if (test_pos_ == sample_.size()) phase_ = Phase::Mask;
        } else if constexpr (std::is_same_v<T, MaskEvent>) {
          if (kind_ != ProtocolKind::Kent || phase_ != Phase::Mask) {
            throw ProtocolViolation(kAlice, "mask announced out of order");
          }
          if (ev.bits.size() != retained_.size()) {
            throw ProtocolViolation(kAlice, "mask bit count mismatch");
          }
          for (int b : ev.bits) {
            if (!is_bit(b)) throw ProtocolViolation(kAlice, "mask bits must be bits");
          }
          masked_bits_ = ev.bits;
          phase_ = Phase::Open;
        } else if constexpr (std::is_same_v<T, OpenUnveilEvent>) {
          if (phase_ != Phase::Open || open_unveil_pending_ ||
              open_pos_ >= retained_.size()) {
            throw ProtocolViolation(kAlice, "open unveil out of order");
          }
          if (ev.index != retained_[open_pos_]) {
            throw ProtocolViolation(kAlice, "open unveil for wrong photon");
          }
          if (!is_bit(ev.x) || !is_bit(ev.z)) {
            throw ProtocolViolation(kAlice, "malformed open unveiling");
          }
          if (kind_ == ProtocolKind::Kent) {
            if (!ev.w || *ev.w >= (std::uint64_t{1} << width_)) {
              throw ProtocolViolation(kAlice, "open unveiling missing preimage");
            }
          } else if (ev.w) {
            throw ProtocolViolation(kAlice, "bb84 openings carry no preimage");
          }
          open_unveil_pending_ = true;
        } else if constexpr (std::is_same_v<T, OpenCheckEvent>) {
          if (phase_ != Phase::Open || !open_unveil_pending_) {
            throw ProtocolViolation(kBob, "open check without an unveiling");
          }
          if (ev.index != retained_[open_pos_]) {
            throw ProtocolViolation(kBob, "open check for wrong photon");
          }
          open_unveil_pending_ = false;
          ++open_pos_;
          const auto failed = [](const std::optional<bool>& f) {
            return f && !*f;
          };
          if (failed(ev.commitment_ok) || failed(ev.quantum_ok) ||
              failed(ev.mask_ok)) {
            last_check_failed_ = true;
          }
        } else if constexpr (std::is_same_v<T, VerdictEvent>) {
          const bool open_complete = phase_ == Phase::Open &&
                                     !open_unveil_pending_ &&
                                     open_pos_ == retained_.size();
          // A verdict may also immediately follow a failed check ("caught").
          if (!open_complete && !check_failure_gate) {
            throw ProtocolViolation(kBob, "verdict before the run finished");
          }
          if (ev.decoded_bit < -1 || ev.decoded_bit > 1) {
            throw ProtocolViolation(kBob, "decoded bit must be -1, 0 or 1");
          }
          phase_ = Phase::Done;
        }
      },
      e);
  events_.push_back(std::move(e));
}

const std::vector<std::size_t>& Transcript::sample() const { return sample_; }
const std::vector<std::size_t>& Transcript::retained() const { return retained_; }
const std::vector<int>& Transcript::masked_bits() const { return masked_bits_; }

std::uint64_t Transcript::commitment(std::size_t index) const {
  if (index >= commits_seen_) {
    throw std::out_of_range("Transcript: no commitment at that index yet");
  }
  return commitments_[index];
}

std::optional<VerdictEvent> Transcript::verdict() const {
  if (phase_ != Phase::Done) return std::nullopt;
  return std::get<VerdictEvent>(events_.back());
}

std::vector<TestCheckEvent> Transcript::test_checks() const {
  std::vector<TestCheckEvent> out;
  for (const auto& e : events_) {
    if (const auto* c = std::get_if<TestCheckEvent>(&e)) out.push_back(*c);
  }
  return out;
}

std::vector<OpenCheckEvent> Transcript::open_checks() const {
  std::vector<OpenCheckEvent> out;
  for (const auto& e : events_) {
    if (const auto* c = std::get_if<OpenCheckEvent>(&e)) out.push_back(*c);
  }
  return out;
}

std::vector<OpenUnveilEvent> Transcript::open_unveils() const {
  std::vector<OpenUnveilEvent> out;
  for (const auto& e : events_) {
    if (const auto* c = std::get_if<OpenUnveilEvent>(&e)) out.push_back(*c);
  }
  return out;
}

std::string Transcript::to_json_lines() const {
  std::ostringstream out;
  json header;
  header["schema"] = 1;
  header["event"] = "header";
  header["protocol"] = kind_ == ProtocolKind::Kent ? "kent" : "bb84";
  header["total"] = total_;
  if (kind_ == ProtocolKind::Kent) {
    header["sample_size"] = sample_size_;
    header["width"] = width_;
  }
  out << header.dump() << '\n';
  for (const auto& e : events_) {
    json j;
    std::visit(
        [&](auto&& ev) {
          using T = std::decay_t<decltype(ev)>;
          if constexpr (std::is_same_v<T, CommitEvent>) {
            j["event"] = "commit";
            j["i"] = ev.index;
            if (ev.y) j["y"] = bits_to_string(*ev.y, width_);
          } else if constexpr (std::is_same_v<T, SampleEvent>) {
            j["event"] = "sample";
            j["x"] = ev.indices;
          } else if constexpr (std::is_same_v<T, TestUnveilEvent>) {
            j["event"] = "test_unveil";
            j["i"] = ev.index;
            j["x"] = ev.x;
            j["z"] = ev.z;
            j["w"] = bits_to_string(ev.w, width_);
          } else if constexpr (std::is_same_v<T, TestCheckEvent>) {
            j["event"] = "test_check";
            j["i"] = ev.index;
            j["commit_ok"] = ev.commitment_ok;
            j["quantum_ok"] =
                ev.quantum_ok ? json(*ev.quantum_ok) : json(nullptr);
          } else if constexpr (std::is_same_v<T, MaskEvent>) {
            j["event"] = "mask";
            j["bits"] = ev.bits;
          } else if constexpr (std::is_same_v<T, OpenUnveilEvent>) {
            j["event"] = "open_unveil";
            j["i"] = ev.index;
            j["x"] = ev.x;
            j["z"] = ev.z;
            if (ev.w) j["w"] = bits_to_string(*ev.w, width_);
          } else if constexpr (std::is_same_v<T, OpenCheckEvent>) {
            j["event"] = "open_check";
            j["i"] = ev.index;
            j["commit_ok"] =
                ev.commitment_ok ? json(*ev.commitment_ok) : json(nullptr);
            j["quantum_ok"] =
                ev.quantum_ok ? json(*ev.quantum_ok) : json(nullptr);
            j["mask_ok"] = ev.mask_ok ? json(*ev.mask_ok) : json(nullptr);
          } else if constexpr (std::is_same_v<T, VerdictEvent>) {
            j["event"] = "verdict";
            j["accept"] = ev.accept;
            j["decoded_bit"] = ev.decoded_bit;
            j["reason"] = ev.reason;
          }
        },
        e);
    out << j.dump() << '\n';
  }
  return out.str();
}

Transcript Transcript::from_json_lines(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("Transcript: empty input");
  }
  const json header = json::parse(line);
  if (header.value("schema", 0) != 1 || header.value("event", "") != "header") {
    throw std::invalid_argument("Transcript: missing or unsupported header");
  }
  const std::string proto = header.at("protocol").get<std::string>();
  const ProtocolKind kind =
      proto == "kent" ? ProtocolKind::Kent : ProtocolKind::Bb84;
  if (proto != "kent" && proto != "bb84") {
    throw std::invalid_argument("Transcript: unknown protocol '" + proto + "'");
  }
  Transcript t(kind, header.at("total").get<std::size_t>(),
               header.value("sample_size", std::size_t{0}),
               header.value("width", 0));
  auto opt_bool = [](const json& j, const char* key) -> std::optional<bool> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<bool>();
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    const std::string kind_str = j.at("event").get<std::string>();
    if (kind_str == "commit") {
      CommitEvent ev{j.at("i").get<std::size_t>(), std::nullopt};
      if (j.contains("y")) ev.y = bits_from_string(j.at("y").get<std::string>());
      t.append(ev);
    } else if (kind_str == "sample") {
      t.append(SampleEvent{j.at("x").get<std::vector<std::size_t>>()});
    } else if (kind_str == "test_unveil") {
      t.append(TestUnveilEvent{j.at("i").get<std::size_t>(), j.at("x").get<int>(),
                               j.at("z").get<int>(),
                               bits_from_string(j.at("w").get<std::string>())});
    } else if (kind_str == "test_check") {
      t.append(TestCheckEvent{j.at("i").get<std::size_t>(),
                              j.at("commit_ok").get<bool>(),
                              opt_bool(j, "quantum_ok")});
    } else if (kind_str == "mask") {
      t.append(MaskEvent{j.at("bits").get<std::vector<int>>()});
    } else if (kind_str == "open_unveil") {
      OpenUnveilEvent ev{j.at("i").get<std::size_t>(), j.at("x").get<int>(),
                         j.at("z").get<int>(), std::nullopt};
      if (j.contains("w")) ev.w = bits_from_string(j.at("w").get<std::string>());
      t.append(ev);
    } else if (kind_str == "open_check") {
      t.append(OpenCheckEvent{j.at("i").get<std::size_t>(),
                              opt_bool(j, "commit_ok"), opt_bool(j, "quantum_ok"),
                              opt_bool(j, "mask_ok")});
    } else if (kind_str == "verdict") {
      t.append(VerdictEvent{j.at("accept").get<bool>(),
                            j.at("decoded_bit").get<int>(),
                            j.at("reason").get<std::string>()});
    } else {
      throw std::invalid_argument("Transcript: unknown event '" + kind_str + "'");
    }
  }
  return t;
}

}  // namespace qbc::protocols
