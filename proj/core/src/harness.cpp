// SPDX-License-Identifier: MIT

#include "qbc/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "qbc/attacks.hpp"
#include "qbc/density.hpp"

namespace qbc::harness {

namespace {

using nlohmann::json;
using qstate::CMat;
using qstate::DensityMatrix;

// --- enum <-> string ---

std::string to_string(ProtocolChoice v) {
  return v == ProtocolChoice::Kent ? "kent" : "bb84";
}
std::string to_string(AliceChoice v) {
  return v == AliceChoice::Honest ? "honest" : "attack";
}
std::string to_string(BobChoice v) {
  return v == BobChoice::Deferred ? "deferred" : "immediate";
}
std::string to_string(OpenBitPolicy v) {
  switch (v) {
    case OpenBitPolicy::Fixed0: return "fixed0";
    case OpenBitPolicy::Fixed1: return "fixed1";
    default: return "coin_after_commit";
  }
}
std::string to_string(OutputFormat v) {
  return v == OutputFormat::Json ? "json" : "csv";
}

template <typename T>
T parse_enum(const std::string& text, const char* field,
             std::initializer_list<std::pair<const char*, T>> values) {
  for (const auto& [name, value] : values) {
    if (text == name) return value;
  }
  std::string expected;
  for (const auto& [name, value] : values) {
    if (!expected.empty()) expected += "|";
    expected += name;
  }
  throw std::invalid_argument(std::string(field) + ": expected one of " +
                              expected + ", got '" + text + "'");
}

const json& require_field(const json& j, const char* field, const char* path) {
  if (!j.contains(field)) {
    throw std::invalid_argument(std::string(path) + ": missing required field");
  }
  return j.at(field);
}

// --- per-photon view states ---

DensityMatrix bb84_projector(int x, int z) {
  return DensityMatrix::pure(qstate::bb84_state(x, z));
}

// Bob's conditional state for one retained photon under hypothesis b, given
// the announced mask bit (and z_i when it leaked).
DensityMatrix view_state(int mask_bit, int b, std::optional<int> leaked_z) {
  const int x = mask_bit ^ b;
  if (leaked_z) return bb84_projector(x, *leaked_z);
  const CMat mixed =
      0.5 * (bb84_projector(x, 0).matrix() + bb84_projector(x, 1).matrix());
  return DensityMatrix(mixed);
}

// --- trial runners ---

int policy_bit(OpenBitPolicy policy, Rng& rng) {
  switch (policy) {
    case OpenBitPolicy::Fixed0: return 0;
    case OpenBitPolicy::Fixed1: return 1;
    default: return rng.next_bit();
  }
}

TrialRow kent_trial(const ExperimentConfig& cfg,
                    const oneway::PermutationFamily& family,
                    std::uint64_t seed) {
  Rng rng(seed);
  std::unique_ptr<protocols::AliceStrategy> alice;
  protocols::HonestKentAlice* honest = nullptr;
  if (cfg.alice == AliceChoice::Honest) {
    auto h = std::make_unique<protocols::HonestKentAlice>(family);
    honest = h.get();
    alice = std::move(h);
  } else {
    alice = std::make_unique<attacks::KentAttackAlice>(family);
  }
  protocols::KentBob bob(cfg.bob == BobChoice::Deferred
                             ? protocols::BobMode::Deferred
                             : protocols::BobMode::Immediate);

  TrialRow row;
  row.seed = seed;
  protocols::KentRun run =
      protocols::kent_commit_phase(*alice, bob, cfg.kent, family, rng);
  row.test_pass = protocols::kent_test_phase(run, *alice, bob, rng);
  if (!row.test_pass) {
    row.early_invert = family.invert_calls() != run.invert_calls_at_start;
    return row;
  }

  const int b_mask = policy_bit(cfg.open_bit_policy, rng);
  protocols::kent_mask_announce(run, *alice, b_mask, rng);
  int b_open = b_mask;
  if (cfg.force_wrong_open) {
    b_open = b_mask ^ 1;
  } else if (cfg.open_bit_policy == OpenBitPolicy::CoinAfterCommit &&
             cfg.alice == AliceChoice::Attack) {
    // the attack can pick the bit after the mask is already on the wire
    b_open = rng.next_bit();
  }
  const protocols::OpenOutcome oc =
      protocols::kent_open_phase(run, *alice, bob, b_open, rng);
  row.opened_bit = b_open;
  row.open_accept = oc.accepted;
  row.decoded_bit = oc.decoded_bit;
  row.early_invert = run.early_invert;

  const auto& retained = run.transcript.retained();
  const auto& masks = run.transcript.masked_bits();
  double td = 0.0;
  for (std::size_t k = 0; k < retained.size(); ++k) {
    std::optional<int> leaked;
    if (cfg.leak_z && honest != nullptr) {
      leaked = honest->encoded_bit_of(retained[k]);
    }
    td += qstate::trace_distance(view_state(masks[k], 0, leaked),
                                 view_state(masks[k], 1, leaked));
  }
  row.concealment_td = td / static_cast<double>(retained.size());
  return row;
}

TrialRow bb84_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  std::unique_ptr<protocols::Bb84AliceStrategy> alice;
  if (cfg.alice == AliceChoice::Honest) {
    alice = std::make_unique<protocols::HonestBb84Alice>();
  } else {
    alice = std::make_unique<attacks::EprAttackBb84Alice>();
  }
  TrialRow row;
  row.seed = seed;
  row.test_pass = true;  // bb84 has no test phase

  const int commit_bit = policy_bit(cfg.open_bit_policy, rng);
  protocols::Bb84Run run =
      protocols::bb84_commit_phase(*alice, cfg.bb84_photons, commit_bit, rng);
  int b_open = commit_bit;
  if (cfg.force_wrong_open) {
    b_open = commit_bit ^ 1;
  } else if (cfg.open_bit_policy == OpenBitPolicy::CoinAfterCommit &&
             cfg.alice == AliceChoice::Attack) {
    b_open = rng.next_bit();
  }
  const protocols::OpenOutcome oc =
      protocols::bb84_open_phase(run, *alice, b_open, rng);
  row.opened_bit = b_open;
  row.open_accept = oc.accepted;
  row.decoded_bit = oc.decoded_bit;

  // pre-open, Bob has no classical information at all
  row.concealment_td = qstate::trace_distance(view_state(0, 0, std::nullopt),
                                              view_state(0, 1, std::nullopt));
  return row;
}

// --- report serialization ---

json row_to_json(const TrialRow& r) {
  json j;
  j["seed"] = r.seed;
  j["test_verdict"] = r.test_pass ? "pass" : "fail";
  j["opened_bit"] = r.opened_bit;
  j["open_verdict"] = r.open_accept ? "accept" : "reject";
  j["decoded_bit"] = r.decoded_bit;
  j["early_invert"] = r.early_invert;
  j["concealment_td"] = r.concealment_td;
  return j;
}

TrialRow row_from_json(const json& j) {
  TrialRow r;
  r.seed = j.at("seed").get<std::uint64_t>();
  r.test_pass = j.at("test_verdict").get<std::string>() == "pass";
  r.opened_bit = j.at("opened_bit").get<int>();
  r.open_accept = j.at("open_verdict").get<std::string>() == "accept";
  r.decoded_bit = j.at("decoded_bit").get<int>();
  r.early_invert = j.at("early_invert").get<bool>();
  r.concealment_td = j.at("concealment_td").get<double>();
  return r;
}

std::string csv_row(const TrialRow& r) {
  std::ostringstream out;
  out << r.seed << ',' << (r.test_pass ? "pass" : "fail") << ',' << r.opened_bit
      << ',' << (r.open_accept ? "accept" : "reject") << ',' << r.decoded_bit;
  return out.str();
}

constexpr const char* kCsvHeader =
    "seed,test_verdict,opened_bit,open_verdict,decoded_bit";

json aggregate_to_json(const Aggregate& a) {
  json j;
  j["trials"] = a.trials;
  j["test_passes"] = a.test_passes;
  j["opened0"] = a.opened0;
  j["opened1"] = a.opened1;
  j["accepted0"] = a.accepted0;
  j["accepted1"] = a.accepted1;
  j["decode_matches"] = a.decode_matches;
  j["early_invert_trials"] = a.early_invert_trials;
  j["test_pass_rate"] = a.test_pass_rate;
  j["open_accept_rate"] = a.open_accept_rate;
  j["accept_rate_bit0"] = a.accept_rate_bit0;
  j["accept_rate_bit1"] = a.accept_rate_bit1;
  j["decode_match_rate"] = a.decode_match_rate;
  j["mean_concealment_td"] = a.mean_concealment_td;
  j["wall_seconds"] = a.wall_seconds;
  return j;
}

Aggregate aggregate_from_json(const json& j) {
  Aggregate a;
  a.trials = j.at("trials").get<std::size_t>();
  a.test_passes = j.at("test_passes").get<std::size_t>();
  a.opened0 = j.at("opened0").get<std::size_t>();
  a.opened1 = j.at("opened1").get<std::size_t>();
  a.accepted0 = j.at("accepted0").get<std::size_t>();
  a.accepted1 = j.at("accepted1").get<std::size_t>();
  a.decode_matches = j.at("decode_matches").get<std::size_t>();
  a.early_invert_trials = j.at("early_invert_trials").get<std::size_t>();
  a.test_pass_rate = j.at("test_pass_rate").get<double>();
  a.open_accept_rate = j.at("open_accept_rate").get<double>();
  a.accept_rate_bit0 = j.at("accept_rate_bit0").get<double>();
  a.accept_rate_bit1 = j.at("accept_rate_bit1").get<double>();
  a.decode_match_rate = j.at("decode_match_rate").get<double>();
  a.mean_concealment_td = j.at("mean_concealment_td").get<double>();
  a.wall_seconds = j.at("wall_seconds").get<double>();
  return a;
}

// Incremental writer so rows reach the output as they are produced.
class ReportWriter {
 public:
  ReportWriter(const std::string& path, OutputFormat format,
               const ExperimentConfig& cfg)
      : format_(format) {
    if (path.empty()) return;
    out_.open(path, std::ios::trunc);
    if (!out_) throw IoError("cannot open output file '" + path + "'");
    if (format_ == OutputFormat::Csv) {
      out_ << kCsvHeader << '\n';
    } else {
      out_ << "{\"schema\":1,\n\"config\":" << cfg.to_json_string()
           << ",\n\"rows\":[";
    }
    check();
  }

  void row(const TrialRow& r) {
    if (!out_.is_open()) return;
    if (format_ == OutputFormat::Csv) {
      out_ << csv_row(r) << '\n';
    } else {
      out_ << (first_ ? "\n" : ",\n") << row_to_json(r).dump();
      first_ = false;
    }
    check();
  }

  void finish(const Aggregate& a) {
    if (!out_.is_open()) return;
    if (format_ == OutputFormat::Json) {
      out_ << "\n],\n\"aggregate\":" << aggregate_to_json(a).dump() << "}\n";
    }
    out_.close();
    if (out_.fail()) throw IoError("error writing report");
  }

 private:
  void check() {
    if (out_.is_open() && !out_) throw IoError("error writing report");
  }

  OutputFormat format_;
  std::ofstream out_;
  bool first_ = true;
};

double trace_norm_hermitian(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) {
    throw std::invalid_argument("config.trials: must be >= 1");
  }
  if (protocol == ProtocolChoice::Kent) {
    try {
      kent.validate();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string("config.params: ") + e.what());
    }
  } else {
    if (bb84_photons < 1) {
      throw std::invalid_argument("config.bb84.photons: must be >= 1");
    }
    if (bob == BobChoice::Immediate) {
      throw std::invalid_argument(
          "config.bob: bb84 runs support the deferred Bob only");
    }
  }
  if (leak_z &&
      (protocol != ProtocolChoice::Kent || alice != AliceChoice::Honest)) {
    throw std::invalid_argument(
        "config.leak_z: only meaningful for kent runs with honest Alice");
  }
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (j.value("schema", 0) != 1) {
    throw std::invalid_argument("config.schema: must be 1");
  }
  ExperimentConfig cfg;
  cfg.protocol = parse_enum<ProtocolChoice>(
      require_field(j, "protocol", "config.protocol").get<std::string>(),
      "config.protocol",
      {{"kent", ProtocolChoice::Kent}, {"bb84", ProtocolChoice::Bb84}});
  cfg.alice = parse_enum<AliceChoice>(
      require_field(j, "alice", "config.alice").get<std::string>(),
      "config.alice",
      {{"honest", AliceChoice::Honest}, {"attack", AliceChoice::Attack}});
  if (j.contains("bob")) {
    cfg.bob = parse_enum<BobChoice>(j.at("bob").get<std::string>(), "config.bob",
                                    {{"deferred", BobChoice::Deferred},
                                     {"immediate", BobChoice::Immediate}});
  }
  if (cfg.protocol == ProtocolChoice::Kent) {
    const json& p = require_field(j, "params", "config.params");
    cfg.kent.total_photons =
        require_field(p, "total_photons", "config.params.total_photons")
            .get<std::size_t>();
    cfg.kent.retained =
        require_field(p, "retained", "config.params.retained").get<std::size_t>();
    cfg.kent.width = require_field(p, "width", "config.params.width").get<int>();
    cfg.kent.seed = p.value("seed", std::uint64_t{0});
  } else if (j.contains("bb84")) {
    cfg.bb84_photons = require_field(j.at("bb84"), "photons",
                                     "config.bb84.photons").get<std::size_t>();
  }
  if (j.contains("trials")) cfg.trials = j.at("trials").get<std::size_t>();
  if (j.contains("base_seed")) {
    cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
  }
  if (j.contains("open_bit_policy")) {
    cfg.open_bit_policy = parse_enum<OpenBitPolicy>(
        j.at("open_bit_policy").get<std::string>(), "config.open_bit_policy",
        {{"fixed0", OpenBitPolicy::Fixed0},
         {"fixed1", OpenBitPolicy::Fixed1},
         {"coin_after_commit", OpenBitPolicy::CoinAfterCommit}});
  }
  if (j.contains("force_wrong_open")) {
    cfg.force_wrong_open = j.at("force_wrong_open").get<bool>();
  }
  if (j.contains("leak_z")) cfg.leak_z = j.at("leak_z").get<bool>();
  if (j.contains("output")) {
    const json& o = j.at("output");
    cfg.output_path = o.value("path", std::string{});
    if (o.contains("format")) {
      cfg.format = parse_enum<OutputFormat>(
          o.at("format").get<std::string>(), "config.output.format",
          {{"json", OutputFormat::Json}, {"csv", OutputFormat::Csv}});
    }
  }
  cfg.validate();
  return cfg;
}

std::string ExperimentConfig::to_json_string() const {
  json j;
  j["schema"] = 1;
  j["protocol"] = to_string(protocol);
  j["alice"] = to_string(alice);
  j["bob"] = to_string(bob);
  if (protocol == ProtocolChoice::Kent) {
    j["params"] = {{"total_photons", kent.total_photons},
                   {"retained", kent.retained},
                   {"width", kent.width},
                   {"seed", kent.seed}};
  } else {
    j["bb84"] = {{"photons", bb84_photons}};
  }
  j["trials"] = trials;
  j["base_seed"] = base_seed;
  j["open_bit_policy"] = to_string(open_bit_policy);
  j["force_wrong_open"] = force_wrong_open;
  j["leak_z"] = leak_z;
  if (!output_path.empty()) {
    j["output"] = {{"path", output_path}, {"format", to_string(format)}};
  }
  return j.dump();
}

Aggregate Report::compute_aggregate(const std::vector<TrialRow>& rows,
                                    double wall_seconds) {
  Aggregate a;
  a.trials = rows.size();
  double td_sum = 0.0;
  std::size_t accepted = 0;
  for (const auto& r : rows) {
    if (r.test_pass) ++a.test_passes;
    if (r.opened_bit == 0) {
      ++a.opened0;
      if (r.open_accept) ++a.accepted0;
    } else if (r.opened_bit == 1) {
      ++a.opened1;
      if (r.open_accept) ++a.accepted1;
    }
    if (r.open_accept) {
      ++accepted;
      if (r.decoded_bit == r.opened_bit) ++a.decode_matches;
    }
    if (r.early_invert) ++a.early_invert_trials;
    td_sum += r.concealment_td;
  }
  const auto rate = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  a.test_pass_rate = rate(a.test_passes, a.trials);
  a.open_accept_rate = rate(a.accepted0 + a.accepted1, a.trials);
  a.accept_rate_bit0 = rate(a.accepted0, a.opened0);
  a.accept_rate_bit1 = rate(a.accepted1, a.opened1);
  a.decode_match_rate = rate(a.decode_matches, accepted);
  a.mean_concealment_td =
      a.trials == 0 ? 0.0 : td_sum / static_cast<double>(a.trials);
  a.wall_seconds = wall_seconds;
  return a;
}

std::string Report::to_json_string() const {
  std::ostringstream out;
  out << "{\"schema\":1,\n\"config\":" << config.to_json_string()
      << ",\n\"rows\":[";
  bool first = true;
  for (const auto& r : rows) {
    out << (first ? "\n" : ",\n") << row_to_json(r).dump();
    first = false;
  }
  out << "\n],\n\"aggregate\":" << aggregate_to_json(aggregate).dump() << "}\n";
  return out.str();
}

std::string Report::to_csv_string() const {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : rows) out << csv_row(r) << '\n';
  return out.str();
}

Report Report::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("report: invalid JSON: ") + e.what());
  }
  if (j.value("schema", 0) != 1) {
    throw std::invalid_argument("report.schema: must be 1");
  }
  Report report;
  report.config =
      ExperimentConfig::from_json_string(j.at("config").dump());
  for (const auto& rj : j.at("rows")) {
    report.rows.push_back(row_from_json(rj));
  }
  report.aggregate = aggregate_from_json(j.at("aggregate"));

  // row/aggregate consistency on reload
  const Aggregate derived =
      compute_aggregate(report.rows, report.aggregate.wall_seconds);
  const auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12; };
  if (derived.trials != report.aggregate.trials ||
      derived.test_passes != report.aggregate.test_passes ||
      derived.opened0 != report.aggregate.opened0 ||
      derived.opened1 != report.aggregate.opened1 ||
      derived.accepted0 != report.aggregate.accepted0 ||
      derived.accepted1 != report.aggregate.accepted1 ||
      derived.decode_matches != report.aggregate.decode_matches ||
      derived.early_invert_trials != report.aggregate.early_invert_trials ||
      !close(derived.test_pass_rate, report.aggregate.test_pass_rate) ||
      !close(derived.open_accept_rate, report.aggregate.open_accept_rate) ||
      !close(derived.accept_rate_bit0, report.aggregate.accept_rate_bit0) ||
      !close(derived.accept_rate_bit1, report.aggregate.accept_rate_bit1) ||
      !close(derived.decode_match_rate, report.aggregate.decode_match_rate) ||
      !close(derived.mean_concealment_td,
             report.aggregate.mean_concealment_td)) {
    throw std::invalid_argument(
        "report.aggregate: values are not recomputable from the rows");
  }
  return report;
}

Report run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  Report report;
  report.config = cfg;
  ReportWriter writer(cfg.output_path, cfg.format, cfg);

  std::unique_ptr<oneway::PermutationFamily> family;
  if (cfg.protocol == ProtocolChoice::Kent) {
    family = std::make_unique<oneway::PermutationFamily>(
        oneway::PermutationFamily::generate(cfg.kent.width, cfg.kent.seed));
  }
  report.rows.reserve(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = derive_seed(cfg.base_seed, t);
    TrialRow row = cfg.protocol == ProtocolChoice::Kent
                       ? kent_trial(cfg, *family, seed)
                       : bb84_trial(cfg, seed);
    writer.row(row);
    report.rows.push_back(row);
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report.aggregate = Report::compute_aggregate(report.rows, wall);
  writer.finish(report.aggregate);
  return report;
}

double concealment_probe(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.protocol == ProtocolChoice::Bb84) {
    // no classical messages before opening; Bob's per-photon state is
    // rho_+ or rho_x depending on the hypothesis
    return qstate::trace_distance(view_state(0, 0, std::nullopt),
                                  view_state(0, 1, std::nullopt));
  }
  if (cfg.alice != AliceChoice::Honest) {
    throw std::invalid_argument(
        "concealment_probe: probes the honest protocol view (the attack's "
        "transcript distribution is identical; see the acceptance suite)");
  }
  const protocols::KentParams& p = cfg.kent;
  if (2 * p.width + 2 > 12 || p.total_photons > 4) {
    throw std::invalid_argument(
        "concealment_probe: parameters too large for exact enumeration "
        "(need 2*width + 2 <= 12 and total_photons <= 4); use "
        "run_experiment's mean_concealment_td Monte-Carlo metric instead");
  }
  const oneway::PermutationFamily family =
      oneway::PermutationFamily::generate(p.width, p.seed);

  // Bob's pre-open view factors over photons. The sample announcement and
  // the tested photons' unveilings are distributed identically under both
  // hypotheses (b never enters them), and trace norms are multiplicative, so
  // those factors cancel; only the retained photons' blocks -- classical
  // (y_i, m_i[, z_i]) tagging an unmeasured qubit -- contribute.
  const std::uint64_t domain = family.domain_size();
  const double weight = 1.0 / static_cast<double>(4 * domain);
  std::array<std::map<std::uint64_t, CMat>, 2> factor;
  for (int x = 0; x < 2; ++x) {
    for (int z = 0; z < 2; ++z) {
      const CMat rho = bb84_projector(x, z).matrix();
      for (std::uint64_t w = 0; w < domain; ++w) {
        const std::uint64_t y = family.eval(x, z, w);
        for (int b = 0; b < 2; ++b) {
          const int m = x ^ b;
          const std::uint64_t key =
              (y << 2) | (static_cast<std::uint64_t>(m) << 1) |
              static_cast<std::uint64_t>(cfg.leak_z ? z : 0);
          auto [it, inserted] =
              factor[static_cast<std::size_t>(b)].try_emplace(key,
                                                              CMat::Zero(2, 2));
          it->second += weight * rho;
        }
      }
    }
  }
  std::vector<std::uint64_t> keys;
  for (const auto& [k, v] : factor[0]) keys.push_back(k);
  for (const auto& [k, v] : factor[1]) {
    if (!factor[0].contains(k)) keys.push_back(k);
  }
  const auto block = [&](int b, std::uint64_t key) -> CMat {
    const auto it = factor[static_cast<std::size_t>(b)].find(key);
    return it == factor[static_cast<std::size_t>(b)].end() ? CMat::Zero(2, 2)
                                                           : it->second;
  };

  // joint over the retained photons (any size-N subset; photons are iid)
  const std::size_t retained = p.retained;
  std::vector<std::size_t> tuple(retained, 0);
  double total = 0.0;
  for (;;) {
    CMat joint0 = block(0, keys[tuple[0]]);
    CMat joint1 = block(1, keys[tuple[0]]);
    for (std::size_t i = 1; i < retained; ++i) {
      joint0 = kron(joint0, block(0, keys[tuple[i]]));
      joint1 = kron(joint1, block(1, keys[tuple[i]]));
    }
    const CMat diff = joint0 - joint1;
    if (diff.cwiseAbs().maxCoeff() > 1e-16) {
      total += 0.5 * trace_norm_hermitian(diff);
    }
    // next tuple
    std::size_t pos = 0;
    while (pos < retained && ++tuple[pos] == keys.size()) {
      tuple[pos] = 0;
      ++pos;
    }
    if (pos == retained) break;
  }
  return total;
}

}  // namespace qbc::harness
