// SPDX-License-Identifier: MIT

#include "qbc/attacks.hpp"

#include <cmath>
#include <stdexcept>

#include "qbc/density.hpp"

namespace qbc::attacks {

namespace {

using qstate::Basis;
using qstate::CMat;
using qstate::CVec;
using qstate::StateVector;

const std::vector<std::string> kRfTargets{kRegF};
const std::vector<std::string> kAzTargets{kRegAz};
const std::vector<std::string> kUnveilTargets{kRegW, kRegAz};
const std::vector<std::string> kEraseTargets{kRegW, kRegAz};

CMat hadamard_matrix() {
  CMat h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

void require_phase(const GammaSystem& sys, GammaPhase expected,
                   const char* op) {
  if (sys.phase != expected) {
    throw std::logic_error(std::string(op) + ": wrong system phase");
  }
}

}  // namespace

GammaSystem prepare_gamma(const oneway::PermutationFamily& fam, Basis theta) {
  const int n = fam.n();
  const qstate::RegisterMap layout(
      {{kRegW, n}, {kRegF, n}, {kRegAz, 1}, {kRegBz, 1}});
  StateVector s = StateVector::computational(layout, 0);
  const CMat h = hadamard_matrix();

  // uniform superposition over w
  for (int q = 0; q < n; ++q) s = qstate::apply_single_qubit(s, h, kRegW, q);

  // uniform superposition over z in the theta basis on r^A_z:
  // (|0>_th + |1>_th)/sqrt(2) is H|0> rectilinear and plain |0> diagonal.
  if (theta == Basis::Rectilinear) {
    s = qstate::apply_single_qubit(s, h, kRegAz);
  }

  // reversible table evaluation into r_f, controlled on r^A_z in the theta
  // basis (conjugate by H for the diagonal case)
  const int x = qstate::basis_bit(theta);
  if (theta == Basis::Diagonal) s = qstate::apply_single_qubit(s, h, kRegAz);
  const std::vector<std::string> eval_targets{kRegW, kRegF, kRegAz};
  s = qstate::apply_basis_permutation(
      s, eval_targets, [&](std::uint64_t t) -> std::uint64_t {
        const std::uint64_t z = t & 1;
        const std::uint64_t f = (t >> 1) & ((std::uint64_t{1} << n) - 1);
        const std::uint64_t w = t >> (n + 1);
        const std::uint64_t f2 = f ^ fam.eval(x, static_cast<int>(z), w);
        return (w << (n + 1)) | (f2 << 1) | z;
      });
  if (theta == Basis::Diagonal) s = qstate::apply_single_qubit(s, h, kRegAz);

  // copy r^A_z into r^B_z in the theta basis: prepare |0>_th, then a CNOT
  // conjugated into the theta frame
  if (theta == Basis::Diagonal) s = qstate::apply_single_qubit(s, h, kRegBz);
  if (theta == Basis::Diagonal) {
    s = qstate::apply_single_qubit(s, h, kRegAz);
    s = qstate::apply_single_qubit(s, h, kRegBz);
  }
  const std::vector<std::string> copy_targets{kRegAz, kRegBz};
  s = qstate::apply_basis_permutation(
      s, copy_targets, [](std::uint64_t t) -> std::uint64_t {
        const std::uint64_t za = t >> 1;
        return (za << 1) | ((t ^ za) & 1);
      });
  if (theta == Basis::Diagonal) {
    s = qstate::apply_single_qubit(s, h, kRegAz);
    s = qstate::apply_single_qubit(s, h, kRegBz);
  }

  return GammaSystem{std::move(s), theta, std::nullopt, GammaPhase::Prepared};
}

std::uint64_t kent_commit(GammaSystem& sys, Rng& rng) {
  require_phase(sys, GammaPhase::Prepared, "kent_commit");
  const int n = sys.state.layout().reg(kRegF).width;
  const std::vector<Basis> bases(static_cast<std::size_t>(n),
                                 Basis::Rectilinear);
  auto res = qstate::measure(sys.state, kRfTargets, bases, rng);
  sys.state = std::move(res.post_state);
  sys.y = qstate::pack_bits(res.outcome);
  sys.phase = GammaPhase::Committed;
  return *sys.y;
}

protocols::TestUnveil kent_unveil_for_test(GammaSystem& sys, Rng& rng) {
  require_phase(sys, GammaPhase::Committed, "kent_unveil_for_test");
  const int n = sys.state.layout().reg(kRegW).width;
  std::vector<Basis> bases(static_cast<std::size_t>(n), Basis::Rectilinear);
  bases.push_back(sys.theta);  // r^A_z measured in theta
  auto res = qstate::measure(sys.state, kUnveilTargets, bases, rng);
  sys.state = std::move(res.post_state);
  const std::uint64_t outcome = qstate::pack_bits(res.outcome);
  sys.phase = GammaPhase::Tested;
  return {qstate::basis_bit(sys.theta), static_cast<int>(outcome & 1),
          outcome >> 1};
}

void erase_rw(GammaSystem& sys, const oneway::PermutationFamily& fam) {
  require_phase(sys, GammaPhase::Committed, "erase_rw");
  if (!sys.y) {
    throw std::logic_error("erase_rw: commitment not yet announced");
  }
  const int x = qstate::basis_bit(sys.theta);
  // breaking the computational assumption, permitted at this stage
  const std::uint64_t w_for_z0 = fam.invert(x, 0, *sys.y);
  const std::uint64_t w_for_z1 = fam.invert(x, 1, *sys.y);

  const CMat h = hadamard_matrix();
  if (sys.theta == Basis::Diagonal) {
    sys.state = qstate::apply_single_qubit(sys.state, h, kRegAz);
  }
  sys.state = qstate::apply_basis_permutation(
      sys.state, kEraseTargets, [&](std::uint64_t t) -> std::uint64_t {
        const std::uint64_t z = t & 1;
        const std::uint64_t w = t >> 1;
        return ((w ^ (z ? w_for_z1 : w_for_z0)) << 1) | z;
      });
  if (sys.theta == Basis::Diagonal) {
    sys.state = qstate::apply_single_qubit(sys.state, h, kRegAz);
  }
  sys.phase = GammaPhase::Erased;
}

protocols::OpenUnveil kent_open_as(GammaSystem& sys,
                                   const oneway::PermutationFamily& fam, int b,
                                   int claimed_mask, Rng& rng) {
  require_phase(sys, GammaPhase::Erased, "kent_open_as");
  const int claimed_x = claimed_mask ^ b;
  const std::vector<Basis> bases{qstate::basis_from_bit(claimed_x)};
  auto res = qstate::measure(sys.state, kAzTargets, bases, rng);
  sys.state = std::move(res.post_state);
  const int z = res.outcome[0];
  sys.phase = GammaPhase::Opened;
  return {claimed_x, z, fam.invert(claimed_x, z, *sys.y)};
}

qstate::StateVector prepare_gamma_superposed(
    const oneway::PermutationFamily& fam) {
  const StateVector plus = prepare_gamma(fam, Basis::Rectilinear).state;
  const StateVector times = prepare_gamma(fam, Basis::Diagonal).state;
  const qstate::RegisterMap layout = qstate::concat(
      qstate::RegisterMap::single(kRegTheta, 1), plus.layout());
  const Eigen::Index d = plus.amplitudes().size();
  CVec amps(2 * d);
  amps.head(d) = plus.amplitudes() / std::sqrt(2.0);
  amps.tail(d) = times.amplitudes() / std::sqrt(2.0);
  return StateVector(layout, std::move(amps));
}

KentAttackAlice::KentAttackAlice(const oneway::PermutationFamily& family,
                                 ThetaMode theta_mode)
    : family_(&family), theta_mode_(theta_mode) {}

std::uint64_t KentAttackAlice::commit_photon(std::size_t i, Rng& rng) {
  if (i != systems_.size()) {
    throw std::logic_error("KentAttackAlice: commits must arrive in order");
  }
  if (theta_mode_ == ThetaMode::Classical) {
    const Basis theta = rng.next_bit() ? Basis::Diagonal : Basis::Rectilinear;
    systems_.push_back(prepare_gamma(*family_, theta));
    theta_fixed_.push_back(true);
  } else {
    // theta itself stays quantum until something forces an announcement;
    // the stored theta is meaningless until then
    systems_.push_back(GammaSystem{prepare_gamma_superposed(*family_),
                                   Basis::Rectilinear, std::nullopt,
                                   GammaPhase::Prepared});
    theta_fixed_.push_back(false);
  }
  return kent_commit(systems_.back(), rng);
}

void KentAttackAlice::collapse_theta(std::size_t i, Rng& rng) {
  if (theta_fixed_.at(i)) return;
  GammaSystem& sys = systems_.at(i);
  const std::vector<std::string> target{kRegTheta};
  const std::vector<Basis> basis{Basis::Rectilinear};
  auto res = qstate::measure(sys.state, target, basis, rng);
  sys.state = std::move(res.post_state);
  sys.theta = qstate::basis_from_bit(res.outcome[0]);
  theta_fixed_[i] = true;
}

qstate::StateVector& KentAttackAlice::system(std::size_t i) {
  return systems_.at(i).state;
}

protocols::TestUnveil KentAttackAlice::unveil_for_test(std::size_t i,
                                                       Rng& rng) {
  collapse_theta(i, rng);  // unveiling announces x_i = theta_i
  return kent_unveil_for_test(systems_.at(i), rng);
}

int KentAttackAlice::mask_bit(std::size_t i, int b, Rng& rng) {
  collapse_theta(i, rng);  // announcing x_i XOR b collapses the basis branch
  return qstate::basis_bit(systems_.at(i).theta) ^ b;
}

protocols::OpenUnveil KentAttackAlice::open_photon(std::size_t i, int mask_bit,
                                                   int b, Rng& rng) {
  GammaSystem& sys = systems_.at(i);
  if (sys.phase == GammaPhase::Committed) erase_rw(sys, *family_);
  return kent_open_as(sys, *family_, b, mask_bit, rng);
}

void EprAttackBb84Alice::prepare(std::size_t count, int /*commit_bit*/,
                                 Rng& /*rng*/) {
  systems_.clear();
  const qstate::RegisterMap layout({{"rA", 1}, {kRegBz, 1}});
  CVec amps = CVec::Zero(4);
  amps[0] = amps[3] = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < count; ++i) {
    systems_.emplace_back(layout, amps);
  }
}

qstate::StateVector& EprAttackBb84Alice::system(std::size_t i) {
  return systems_.at(i);
}

int EprAttackBb84Alice::open_photon(std::size_t i, int b, Rng& rng) {
  const std::vector<std::string> targets{"rA"};
  const std::vector<Basis> bases{qstate::basis_from_bit(b)};
  auto res = qstate::measure(systems_.at(i), targets, bases, rng);
  systems_.at(i) = std::move(res.post_state);
  return res.outcome[0];
}

CoherentEvalResult coherent_message_eval(
    const qstate::StateVector& s, std::span<const std::string> inputs,
    const std::function<std::uint64_t(std::uint64_t)>& f, int out_width,
    Rng& rng, const std::string& out_register) {
  if (out_width < 1) {
    throw std::invalid_argument("coherent_message_eval: out_width must be >= 1");
  }
  StateVector extended = qstate::append_register(s, out_register, out_width);
  std::vector<std::string> targets(inputs.begin(), inputs.end());
  targets.push_back(out_register);
  const std::uint64_t out_mask = (std::uint64_t{1} << out_width) - 1;
  extended = qstate::apply_basis_permutation(
      extended, targets, [&](std::uint64_t t) -> std::uint64_t {
        const std::uint64_t u = t >> out_width;
        const std::uint64_t r = t & out_mask;
        const std::uint64_t fu = f(u);
        if (fu > out_mask) {
          throw std::invalid_argument(
              "coherent_message_eval: f image wider than out register");
        }
        return (u << out_width) | (r ^ fu);
      });
  const std::vector<std::string> out_targets{out_register};
  const std::vector<Basis> bases(static_cast<std::size_t>(out_width),
                                 Basis::Rectilinear);
  auto res = qstate::measure(extended, out_targets, bases, rng);
  return CoherentEvalResult{res.outcome, qstate::pack_bits(res.outcome),
                            std::move(res.post_state)};
}

GenericAttackPlan generic_attack(const PurifiedProtocol& p) {
  std::vector<std::string> all_registers;
  for (const auto& r : p.initial.layout().registers()) {
    all_registers.push_back(r.name);
  }
  const StateVector phi0 = qstate::apply_unitary(p.initial, p.commit0, all_registers);
  const StateVector phi1 = qstate::apply_unitary(p.initial, p.commit1, all_registers);
  const qstate::DensityMatrix rho_b0 =
      qstate::partial_trace(phi0, p.bipartition.side_b);
  const qstate::DensityMatrix rho_b1 =
      qstate::partial_trace(phi1, p.bipartition.side_b);

  const qstate::SubsetIndexer idx_a(p.initial.layout(), p.bipartition.side_a);
  qstate::UnitaryOp open0 = qstate::UnitaryOp::identity(idx_a.sub_dim());

  if (qstate::trace_distance(rho_b0, rho_b1) <= qstate::kSpectralTol) {
    qstate::UnitaryOp open1 = analysis::cheat_unitary(phi0, phi1, p.bipartition);
    return GenericAttackPlan{phi0,
                             {std::move(open0), std::move(open1)},
                             {1.0, 1.0}};
  }
  analysis::UhlmannResult best = analysis::uhlmann_unitary(phi0, phi1, p.bipartition);
  const double fid = qstate::fidelity(rho_b0, rho_b1);
  return GenericAttackPlan{phi0,
                           {std::move(open0), std::move(best.rotation)},
                           {1.0, fid}};
}

}  // namespace qbc::attacks
