// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbc/protocols.hpp"

namespace qbc::harness {

enum class ProtocolChoice { Kent, Bb84 };
enum class AliceChoice { Honest, Attack };
enum class BobChoice { Deferred, Immediate };
enum class OpenBitPolicy { Fixed0, Fixed1, CoinAfterCommit };
enum class OutputFormat { Json, Csv };

// Unwritable output and friends; distinguished from config errors so the CLI
// can map them to different exit codes.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  ProtocolChoice protocol = ProtocolChoice::Kent;
  AliceChoice alice = AliceChoice::Honest;
  BobChoice bob = BobChoice::Deferred;
  protocols::KentParams kent;      // Kent runs (includes the family seed)
  std::size_t bb84_photons = 10;   // bb84 runs
  std::size_t trials = 1;
  std::uint64_t base_seed = 0;
  OpenBitPolicy open_bit_policy = OpenBitPolicy::Fixed0;
  // Honest-baseline flag: Alice claims the flipped bit at open time.
  bool force_wrong_open = false;
  // Deliberately broken variant: z_i counts as announced in clear when
  // evaluating what Bob's view leaks (probe / concealment metric only).
  bool leak_z = false;
  std::string output_path;  // empty: no file output
  OutputFormat format = OutputFormat::Json;

  void validate() const;  // throws std::invalid_argument with the field name
  static ExperimentConfig from_json_string(const std::string& text);
  std::string to_json_string() const;
};

struct TrialRow {
  std::uint64_t seed = 0;
  bool test_pass = false;
  int opened_bit = -1;
  bool open_accept = false;
  int decoded_bit = -1;
  bool early_invert = false;   // f inverted before the open phase
  double concealment_td = 0;   // mean over retained photons, this trial
};

struct Aggregate {
  std::size_t trials = 0;
  std::size_t test_passes = 0;
  std::size_t opened0 = 0, opened1 = 0;
  std::size_t accepted0 = 0, accepted1 = 0;
  std::size_t decode_matches = 0;  // decoded == opened among accepted trials
  std::size_t early_invert_trials = 0;
  double test_pass_rate = 0;
  double open_accept_rate = 0;
  double accept_rate_bit0 = 0;  // among trials that opened 0 (0 when none)
  double accept_rate_bit1 = 0;
  double decode_match_rate = 0;  // among accepted trials (0 when none)
  double mean_concealment_td = 0;
  double wall_seconds = 0;  // excluded from reproducibility comparisons
};

struct Report {
  int schema = 1;
  ExperimentConfig config;
  std::vector<TrialRow> rows;
  Aggregate aggregate;

  static Aggregate compute_aggregate(const std::vector<TrialRow>& rows,
                                     double wall_seconds);
  std::string to_json_string() const;
  // seed,test_verdict,opened_bit,open_verdict,decoded_bit
  std::string to_csv_string() const;
  // Parses and re-derives the aggregate from the rows; throws on mismatch.
  static Report from_json_string(const std::string& text);
};

// Runs the configured campaign. Trial i uses seed derive_seed(base_seed, i);
// rows are streamed to config.output_path (if set) as they are produced.
Report run_experiment(const ExperimentConfig& cfg);

// Exact trace distance between Bob's full pre-open view (classical
// transcript distribution plus unmeasured quantum registers) under b = 0
// versus b = 1, enumerated exhaustively. Kent runs are limited to
// 2*width + 2 <= 12 qubits per system and total_photons <= 4; larger
// configurations are rejected with a pointer at the Monte-Carlo metric.
double concealment_probe(const ExperimentConfig& cfg);

}  // namespace qbc::harness
