// SPDX-License-Identifier: MIT

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
// its measured value and wall time; the exit code is the failure count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "enumeration.hpp"
#include "oracles.hpp"
#include "qbc/attacks.hpp"
#include "qbc/harness.hpp"
#include "support.hpp"

using namespace qbc;
using namespace qbc::test;

namespace {

int g_failures = 0;

void criterion(const char* name, double budget_seconds,
               const std::function<bool(std::string&)>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const bool in_budget = elapsed < budget_seconds;
  const bool pass = ok && in_budget;
  if (!pass) ++g_failures;
  std::printf("[%s] %s (%s; %.3fs of %gs budget)\n", pass ? "PASS" : "FAIL",
              name, detail.c_str(), elapsed, budget_seconds);
  std::fflush(stdout);
}

std::vector<std::string> names(std::initializer_list<const char*> list) {
  return {list.begin(), list.end()};
}

harness::ExperimentConfig attack_campaign_config() {
  harness::ExperimentConfig cfg;
  cfg.protocol = harness::ProtocolChoice::Kent;
  cfg.alice = harness::AliceChoice::Attack;
  cfg.kent = protocols::KentParams{20, 10, 3, 424242};
  cfg.trials = 200;
  cfg.base_seed = 20200;
  cfg.open_bit_policy = harness::OpenBitPolicy::CoinAfterCommit;
  return cfg;
}

}  // namespace

int main() {
  // 1. concealment identity rho_+ = rho_x
  criterion("C1 concealment rho_+ = rho_x", 0.001, [](std::string& detail) {
    const CMat rho_plus =
        0.5 * (DensityMatrix::pure(qstate::bb84_state(0, 0)).matrix() +
               DensityMatrix::pure(qstate::bb84_state(0, 1)).matrix());
    const CMat rho_times =
        0.5 * (DensityMatrix::pure(qstate::bb84_state(1, 0)).matrix() +
               DensityMatrix::pure(qstate::bb84_state(1, 1)).matrix());
    const double td = qstate::trace_distance(DensityMatrix(rho_plus),
                                             DensityMatrix(rho_times));
    detail = "trace distance " + std::to_string(td);
    return td <= 1e-12;
  });

  // 2. the transmitted register of the entangled preparation is I/2
  criterion("C2 transmitted register of |gamma> is I/2", 1.0,
            [&](std::string& detail) {
              double worst = 0.0;
              for (int n = 1; n <= 3; ++n) {
                const auto fam =
                    oneway::PermutationFamily::generate(n, 1000 + n);
                for (const Basis theta :
                     {Basis::Rectilinear, Basis::Diagonal}) {
                  const auto sys = attacks::prepare_gamma(fam, theta);
                  const auto rho =
                      qstate::partial_trace(sys.state, names({"rBz"}));
                  worst = std::max(
                      worst, qstate::trace_distance(
                                 rho, DensityMatrix::maximally_mixed(2)));
                }
              }
              detail = "worst deviation " + std::to_string(worst);
              return worst <= 1e-9;
            });

  // 3 + 4. one attack campaign, two criteria
  harness::Report campaign;
  criterion("C3 attack survives Bob's test (200 trials, no early inversion)",
            30.0, [&](std::string& detail) {
              campaign = harness::run_experiment(attack_campaign_config());
              detail = std::to_string(campaign.aggregate.test_passes) +
                       "/200 passed, " +
                       std::to_string(campaign.aggregate.early_invert_trials) +
                       " early inversions";
              return campaign.aggregate.test_passes == 200 &&
                     campaign.aggregate.early_invert_trials == 0;
            });

  criterion("C4 attack opens the post-commit coin (200 trials)", 30.0,
            [&](std::string& detail) {
              const std::size_t accepted = campaign.aggregate.accepted0 +
                                           campaign.aggregate.accepted1;
              detail = std::to_string(accepted) + "/200 accepted, " +
                       std::to_string(campaign.aggregate.decode_matches) +
                       " decoded = coin (" +
                       std::to_string(campaign.aggregate.opened0) + "/" +
                       std::to_string(campaign.aggregate.opened1) +
                       " split)";
              return accepted == 200 &&
                     campaign.aggregate.decode_matches == 200 &&
                     campaign.aggregate.opened0 > 0 &&
                     campaign.aggregate.opened1 > 0;
            });

  // 5. honest binding baseline 2^-N
  criterion("C5 honest Alice cannot open the flipped bit", 60.0,
            [](std::string& detail) {
              harness::ExperimentConfig cfg;
              cfg.protocol = harness::ProtocolChoice::Kent;
              cfg.alice = harness::AliceChoice::Honest;
              cfg.kent = protocols::KentParams{20, 10, 3, 77};
              cfg.trials = 10000;
              cfg.base_seed = 31337;
              cfg.open_bit_policy = harness::OpenBitPolicy::Fixed0;
              cfg.force_wrong_open = true;
              const auto report = harness::run_experiment(cfg);
              detail = "acceptance rate " +
                       std::to_string(report.aggregate.open_accept_rate) +
                       " (theory 2^-10 = 0.000977)";
              return report.aggregate.open_accept_rate <= 2e-3;
            });

  // 6. EPR attack on the bb84-style commitment
  criterion("C6 EPR attack opens either bit of the bb84 commitment", 5.0,
            [](std::string& detail) {
              std::size_t accepted = 0;
              for (int bit = 0; bit < 2; ++bit) {
                harness::ExperimentConfig cfg;
                cfg.protocol = harness::ProtocolChoice::Bb84;
                cfg.alice = harness::AliceChoice::Attack;
                cfg.bb84_photons = 10;
                cfg.trials = 100;
                cfg.base_seed = 600 + static_cast<std::uint64_t>(bit);
                cfg.open_bit_policy = bit == 0
                                          ? harness::OpenBitPolicy::Fixed0
                                          : harness::OpenBitPolicy::Fixed1;
                const auto report = harness::run_experiment(cfg);
                accepted +=
                    report.aggregate.accepted0 + report.aggregate.accepted1;
              }
              detail = std::to_string(accepted) + "/200 accepted";
              return accepted == 200;
            });

  // 7. generic attack, equal reduced states
  criterion("C7 generic attack, equal rho_B: overlap 1", 10.0,
            [&](std::string& detail) {
              Rng rng(70707);
              double worst = 1.0;
              for (int k = 0; k < 50; ++k) {
                const int wa = 1 + static_cast<int>(rng.below(3));
                const int wb = 1 + static_cast<int>(rng.below(3));
                const RegisterMap layout({{"a", wa}, {"b", wb}});
                const analysis::Bipartition bp{{"a"}, {"b"}};
                const std::vector<std::string> all{"a", "b"};
                const std::size_t da = std::size_t{1} << wa;
                const std::size_t db = std::size_t{1} << wb;
                const StateVector psi = random_state(layout, rng);
                const qstate::UnitaryOp u0(random_unitary(da * db, rng));
                const CMat va = random_unitary(da, rng);
                CMat v = CMat::Zero(static_cast<Eigen::Index>(da * db),
                                    static_cast<Eigen::Index>(da * db));
                for (std::size_t i = 0; i < da; ++i) {
                  for (std::size_t j = 0; j < da; ++j) {
                    v.block(static_cast<Eigen::Index>(i * db),
                            static_cast<Eigen::Index>(j * db),
                            static_cast<Eigen::Index>(db),
                            static_cast<Eigen::Index>(db)) =
                        va(static_cast<Eigen::Index>(i),
                           static_cast<Eigen::Index>(j)) *
                        CMat::Identity(static_cast<Eigen::Index>(db),
                                       static_cast<Eigen::Index>(db));
                  }
                }
                const attacks::PurifiedProtocol proto{
                    psi, u0, qstate::UnitaryOp(v * u0.matrix()), bp};
                const auto plan = attacks::generic_attack(proto);
                for (int b = 0; b < 2; ++b) {
                  const StateVector target = qstate::apply_unitary(
                      psi, b == 0 ? proto.commit0 : proto.commit1, all);
                  const StateVector moved = analysis::apply_on_side_a(
                      plan.prepared, plan.open_map[static_cast<std::size_t>(b)],
                      bp);
                  worst = std::min(worst, std::abs(qstate::inner_product(
                                              target, moved)));
                }
              }
              detail = "worst opening overlap " + std::to_string(worst);
              return worst >= 1.0 - 1e-7;
            });

  // 8. generic attack, unequal reduced states
  criterion("C8 generic attack, unequal rho_B: overlap = fidelity", 60.0,
            [&](std::string& detail) {
              Rng rng(80808);
              double worst_gap = 0.0;
              double worst_excess = 0.0;
              for (int k = 0; k < 50; ++k) {
                const int wa = 1 + static_cast<int>(rng.below(2));
                const int wb = 1 + static_cast<int>(rng.below(2));
                const RegisterMap layout({{"a", wa}, {"b", wb}});
                const analysis::Bipartition bp{{"a"}, {"b"}};
                const std::vector<std::string> all{"a", "b"};
                const std::vector<std::string> keep_b{"b"};
                const std::size_t dim = layout.dim();
                const StateVector psi = random_state(layout, rng);
                const attacks::PurifiedProtocol proto{
                    psi, qstate::UnitaryOp(random_unitary(dim, rng)),
                    qstate::UnitaryOp(random_unitary(dim, rng)), bp};
                const auto plan = attacks::generic_attack(proto);
                const StateVector phi1 =
                    qstate::apply_unitary(psi, proto.commit1, all);
                const StateVector moved = analysis::apply_on_side_a(
                    plan.prepared, plan.open_map[1], bp);
                const double achieved =
                    std::abs(qstate::inner_product(phi1, moved));
                const double fid = qstate::fidelity(
                    qstate::partial_trace(plan.prepared, keep_b),
                    qstate::partial_trace(phi1, keep_b));
                worst_gap = std::max(worst_gap, std::abs(achieved - fid));
                worst_excess = std::max(worst_excess, achieved - fid);
              }
              // dim-2 instances against the brute-force oracle
              double worst_oracle = 0.0;
              for (int k = 0; k < 12; ++k) {
                const RegisterMap layout({{"a", 1}, {"b", 1}});
                const analysis::Bipartition bp{{"a"}, {"b"}};
                const StateVector psi0 = random_state(layout, rng);
                const StateVector phi1 = random_state(layout, rng);
                const auto res = analysis::uhlmann_unitary(psi0, phi1, bp);
                const double oracle =
                    max_overlap_oracle_qubit_a(psi0, phi1, bp);
                worst_oracle = std::max(
                    worst_oracle, std::abs(res.achieved_overlap - oracle));
              }
              detail = "worst |achieved - fidelity| " +
                       std::to_string(worst_gap) + ", worst excess " +
                       std::to_string(worst_excess) + ", worst oracle gap " +
                       std::to_string(worst_oracle);
              return worst_gap <= 1e-6 && worst_excess <= 1e-7 &&
                     worst_oracle <= 1e-4;
            });

  // 9. Helstrom error against brute force and closed forms
  criterion("C9 minimum-error discrimination", 30.0, [](std::string& detail) {
    Rng rng(90909);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const analysis::DiscriminationInstance inst{
          random_density(2, rng), random_density(2, rng),
          0.1 + 0.8 * rng.next_double()};
      const double pe = analysis::distinguishing_error(inst);
      worst = std::max(worst, std::abs(pe - helstrom_oracle_qubit(inst)));
    }
    const DensityMatrix zero = DensityMatrix::pure(qstate::bb84_state(0, 0));
    const DensityMatrix one = DensityMatrix::pure(qstate::bb84_state(0, 1));
    const DensityMatrix plus = DensityMatrix::pure(qstate::bb84_state(1, 0));
    const bool closed_forms =
        std::abs(analysis::distinguishing_error({zero, zero, 0.3}) - 0.3) <
            1e-9 &&
        std::abs(analysis::distinguishing_error({zero, one, 0.5})) < 1e-9 &&
        std::abs(analysis::distinguishing_error({zero, plus, 0.5}) -
                 0.5 * (1.0 - 1.0 / std::sqrt(2.0))) < 1e-9;
    detail = "worst oracle gap " + std::to_string(worst) +
             (closed_forms ? ", closed forms exact" : ", closed forms WRONG");
    return worst <= 1e-4 && closed_forms;
  });

  // 10. linear-algebra invariant suite
  criterion("C10 Schmidt / spectrum / Fuchs-van de Graaf suite", 60.0,
            [](std::string& detail) {
              Rng rng(101010);
              double worst_rec = 0.0;
              double worst_spec = 0.0;
              for (int k = 0; k < 500; ++k) {
                const int wa = 1 + static_cast<int>(rng.below(3));
                const int wb = 1 + static_cast<int>(rng.below(4));
                const RegisterMap layout({{"a", wa}, {"b", wb}});
                const StateVector s = random_state(layout, rng);
                const auto sd =
                    analysis::schmidt_decompose(s, {{"a"}, {"b"}});
                worst_rec =
                    std::max(worst_rec, schmidt_reconstruction_error(sd, s));
                // coefficients against the A-side reduced spectrum
                Eigen::SelfAdjointEigenSolver<CMat> es(
                    qstate::partial_trace(s, names({"a"})).matrix(),
                    Eigen::EigenvaluesOnly);
                std::vector<double> spec;
                for (Eigen::Index i = es.eigenvalues().size(); i-- > 0;) {
                  if (es.eigenvalues()[i] > analysis::kSchmidtCutoff) {
                    spec.push_back(es.eigenvalues()[i]);
                  }
                }
                if (spec.size() != sd.coefficients.size()) {
                  worst_spec = 1.0;
                } else {
                  for (std::size_t i = 0; i < spec.size(); ++i) {
                    worst_spec = std::max(
                        worst_spec, std::abs(spec[i] - sd.coefficients[i]));
                  }
                }
              }
              double fvdg_violation = 0.0;
              for (const std::size_t dim : {std::size_t{2}, std::size_t{4}}) {
                for (int k = 0; k < 250; ++k) {
                  const DensityMatrix r0 = random_density(dim, rng);
                  const DensityMatrix r1 = random_density(dim, rng);
                  const double td = qstate::trace_distance(r0, r1);
                  const double f = qstate::fidelity(r0, r1);
                  fvdg_violation = std::max(fvdg_violation, (1.0 - f) - td);
                  fvdg_violation = std::max(
                      fvdg_violation,
                      td - std::sqrt(std::max(0.0, 1.0 - f * f)));
                }
              }
              detail = "worst reconstruction " + std::to_string(worst_rec) +
                       ", spectrum gap " + std::to_string(worst_spec) +
                       ", FvdG violation " + std::to_string(fvdg_violation);
              return worst_rec <= 1e-9 && worst_spec <= 1e-9 &&
                     fvdg_violation <= 1e-7;
            });

  // 11. transcript indistinguishability, exhaustive at N_B = 3, n = 2
  criterion("C11 attack transcripts distribute exactly as honest ones", 60.0,
            [](std::string& detail) {
              const auto fam = oneway::PermutationFamily::generate(2, 111);
              double worst = 0.0;
              for (int b = 0; b < 2; ++b) {
                const Dist honest = joint_run_dist(
                    honest_tested_dist(fam), honest_retained_dist(fam, b), 2);
                const Dist attack = joint_run_dist(
                    attack_tested_dist(fam), attack_retained_dist(fam, b), 2);
                worst = std::max(worst, statistical_distance(honest, attack));
              }
              detail = "statistical distance " + std::to_string(worst);
              return worst <= 1e-12;
            });

  std::printf("%d of 11 criteria failed\n", g_failures);
  return g_failures;
}
