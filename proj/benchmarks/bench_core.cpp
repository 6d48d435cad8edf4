// SPDX-License-Identifier: MIT

#include <benchmark/benchmark.h>

#include "qbc/analysis.hpp"
#include "qbc/attacks.hpp"
#include "qbc/density.hpp"
#include "qbc/harness.hpp"
#include "qbc/protocols.hpp"

namespace {

using namespace qbc;

void BM_PrepareGamma(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto fam = oneway::PermutationFamily::generate(n, 7);
  for (auto _ : state) {
    auto sys = attacks::prepare_gamma(fam, qstate::Basis::Diagonal);
    benchmark::DoNotOptimize(sys.state.amplitudes().data());
  }
  state.SetComplexityN(std::int64_t{1} << (2 * n + 2));
}
BENCHMARK(BM_PrepareGamma)->DenseRange(1, 6)->Complexity();

void BM_PartialTraceBobRegister(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto fam = oneway::PermutationFamily::generate(n, 7);
  const auto sys = attacks::prepare_gamma(fam, qstate::Basis::Rectilinear);
  const std::vector<std::string> keep{"rBz"};
  for (auto _ : state) {
    auto rho = qstate::partial_trace(sys.state, keep);
    benchmark::DoNotOptimize(rho.matrix().data());
  }
}
BENCHMARK(BM_PartialTraceBobRegister)->DenseRange(1, 6);

void BM_SchmidtDecompose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto fam = oneway::PermutationFamily::generate(n, 7);
  const auto sys = attacks::prepare_gamma(fam, qstate::Basis::Diagonal);
  const analysis::Bipartition bp{{"rw", "rf", "rAz"}, {"rBz"}};
  for (auto _ : state) {
    auto sd = analysis::schmidt_decompose(sys.state, bp);
    benchmark::DoNotOptimize(sd.coefficients.data());
  }
}
BENCHMARK(BM_SchmidtDecompose)->DenseRange(1, 5);

void BM_KentAttackTrial(benchmark::State& state) {
  const protocols::KentParams params{20, 10, 3, 42};
  const auto fam = oneway::PermutationFamily::generate(params.width, params.seed);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(derive_seed(1, seed++));
    attacks::KentAttackAlice alice(fam);
    protocols::KentBob bob;
    auto run = protocols::kent_commit_phase(alice, bob, params, fam, rng);
    protocols::kent_test_phase(run, alice, bob, rng);
    protocols::kent_mask_announce(run, alice, 0, rng);
    auto outcome = protocols::kent_open_phase(run, alice, bob, 1, rng);
    benchmark::DoNotOptimize(outcome.accepted);
  }
}
BENCHMARK(BM_KentAttackTrial);

void BM_ConcealmentProbe(benchmark::State& state) {
  harness::ExperimentConfig cfg;
  cfg.protocol = harness::ProtocolChoice::Kent;
  cfg.kent = protocols::KentParams{3, 2, static_cast<int>(state.range(0)), 5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(harness::concealment_probe(cfg));
  }
}
BENCHMARK(BM_ConcealmentProbe)->DenseRange(1, 4);

}  // namespace

BENCHMARK_MAIN();
