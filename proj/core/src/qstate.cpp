// SPDX-License-Identifier: MIT

#include "qbc/qstate.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qbc::qstate {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_norm(const CVec& amplitudes) {
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > kStructuralTol) {
    throw std::invalid_argument("StateVector: norm deviates from 1 by " +
                                std::to_string(std::abs(norm - 1.0)));
  }
}

// In-place single-qubit gate at a global bit shift; the workhorse behind
// basis rotations in measurement.
void apply_single_qubit_inplace(CVec& amps, int global_shift, const CMat& g) {
  const std::uint64_t bit = std::uint64_t{1} << global_shift;
  const std::uint64_t dim = static_cast<std::uint64_t>(amps.size());
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    const Complex a0 = amps[static_cast<Eigen::Index>(i)];
    const Complex a1 = amps[static_cast<Eigen::Index>(i | bit)];
    amps[static_cast<Eigen::Index>(i)] = g(0, 0) * a0 + g(0, 1) * a1;
    amps[static_cast<Eigen::Index>(i | bit)] = g(1, 0) * a0 + g(1, 1) * a1;
  }
}

// Rotates every Diagonal-basis target qubit with H so that the requested
// measurement becomes computational. H is self-inverse, so the same call
// rotates back.
CVec to_measurement_frame(const StateVector& s, const SubsetIndexer& idx,
                          std::span<const Basis> bases) {
  CVec amps = s.amplitudes();
  CMat h(2, 2);
  h << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
  for (int q = 0; q < idx.sub_width(); ++q) {
    if (bases[static_cast<std::size_t>(q)] == Basis::Diagonal) {
      apply_single_qubit_inplace(amps, idx.global_shift_of_sub_qubit(q), h);
    }
  }
  return amps;
}

std::vector<double> distribution_in_frame(const CVec& amps,
                                          const SubsetIndexer& idx) {
  std::vector<double> probs(idx.sub_dim(), 0.0);
  const std::uint64_t dim = static_cast<std::uint64_t>(amps.size());
  for (std::uint64_t g = 0; g < dim; ++g) {
    probs[idx.sub_of(g)] += std::norm(amps[static_cast<Eigen::Index>(g)]);
  }
  return probs;
}

}  // namespace

StateVector::StateVector(RegisterMap layout, CVec amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != layout_.dim()) {
    throw std::invalid_argument("StateVector: amplitude count " +
                                std::to_string(amplitudes_.size()) +
                                " does not match layout dimension " +
                                std::to_string(layout_.dim()));
  }
  check_norm(amplitudes_);
}

StateVector StateVector::computational(RegisterMap layout,
                                       std::uint64_t basis_index) {
  if (basis_index >= layout.dim()) {
    throw std::invalid_argument("StateVector: basis index out of range");
  }
  CVec amps = CVec::Zero(static_cast<Eigen::Index>(layout.dim()));
  amps[static_cast<Eigen::Index>(basis_index)] = 1.0;
  return StateVector(std::move(layout), std::move(amps));
}

UnitaryOp::UnitaryOp(CMat entries, std::optional<std::vector<std::string>> target)
    : entries_(std::move(entries)), target_(std::move(target)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw std::invalid_argument("UnitaryOp: matrix must be square");
  }
  const CMat gram = entries_.adjoint() * entries_;
  const double dev =
      (gram - CMat::Identity(entries_.rows(), entries_.cols())).cwiseAbs().maxCoeff();
  if (dev > kStructuralTol) {
    throw std::invalid_argument("UnitaryOp: not unitary (max deviation " +
                                std::to_string(dev) + ")");
  }
}

UnitaryOp UnitaryOp::identity(std::size_t dim) {
  return UnitaryOp(CMat::Identity(static_cast<Eigen::Index>(dim),
                                  static_cast<Eigen::Index>(dim)));
}

UnitaryOp UnitaryOp::hadamard() {
  CMat h(2, 2);
  h << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
  return UnitaryOp(std::move(h));
}

UnitaryOp UnitaryOp::pauli_x() {
  CMat x(2, 2);
  x << 0, 1, 1, 0;
  return UnitaryOp(std::move(x));
}

UnitaryOp UnitaryOp::pauli_z() {
  CMat z(2, 2);
  z << 1, 0, 0, -1;
  return UnitaryOp(std::move(z));
}

CVec basis_ket(Basis basis, int z) {
  if (z != 0 && z != 1) throw std::invalid_argument("basis_ket: z must be 0 or 1");
  CVec v(2);
  if (basis == Basis::Rectilinear) {
    v << (z == 0 ? 1.0 : 0.0), (z == 0 ? 0.0 : 1.0);
  } else {
    v << kInvSqrt2, (z == 0 ? kInvSqrt2 : -kInvSqrt2);
  }
  return v;
}

StateVector bb84_state(int x, int z, std::string register_name) {
  if ((x != 0 && x != 1) || (z != 0 && z != 1)) {
    throw std::invalid_argument("bb84_state: x and z must be bits");
  }
  return StateVector(RegisterMap::single(std::move(register_name), 1),
                     basis_ket(basis_from_bit(x), z));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  RegisterMap layout = concat(a.layout(), b.layout());  // rejects duplicates
  const Eigen::Index bd = b.amplitudes().size();
  CVec amps(static_cast<Eigen::Index>(layout.dim()));
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) {
    amps.segment(i * bd, bd) = a.amplitudes()[i] * b.amplitudes();
  }
  return StateVector(std::move(layout), std::move(amps));
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (!(a.layout() == b.layout())) {
    throw std::invalid_argument("inner_product: layouts differ");
  }
  return a.amplitudes().dot(b.amplitudes());  // Eigen dot conjugates the lhs
}

StateVector apply_unitary(const StateVector& s, const UnitaryOp& u,
                          std::span<const std::string> targets) {
  std::vector<std::string> fallback;
  if (targets.empty()) {
    if (!u.target()) {
      throw std::invalid_argument("apply_unitary: no targets given");
    }
    fallback = *u.target();
    targets = fallback;
  }
  const SubsetIndexer idx(s.layout(), targets);
  if (u.dim() != idx.sub_dim()) {
    throw std::invalid_argument("apply_unitary: operator dimension " +
                                std::to_string(u.dim()) +
                                " does not match target dimension " +
                                std::to_string(idx.sub_dim()));
  }
  const std::uint64_t sd = idx.sub_dim();
  const std::uint64_t rd = idx.rest_dim();
  CVec out = CVec::Zero(s.amplitudes().size());
  CVec in_block(static_cast<Eigen::Index>(sd));
  for (std::uint64_t r = 0; r < rd; ++r) {
    for (std::uint64_t t = 0; t < sd; ++t) {
      in_block[static_cast<Eigen::Index>(t)] =
          s.amplitudes()[static_cast<Eigen::Index>(idx.global_of(t, r))];
    }
    const CVec out_block = u.matrix() * in_block;
    for (std::uint64_t t = 0; t < sd; ++t) {
      out[static_cast<Eigen::Index>(idx.global_of(t, r))] =
          out_block[static_cast<Eigen::Index>(t)];
    }
  }
  return StateVector(s.layout(), std::move(out));
}

StateVector apply_single_qubit(const StateVector& s, const CMat& gate,
                               std::string_view register_name, int qubit) {
  if (gate.rows() != 2 || gate.cols() != 2) {
    throw std::invalid_argument("apply_single_qubit: gate must be 2x2");
  }
  const Register& r = s.layout().reg(register_name);
  if (qubit < 0 || qubit >= r.width) {
    throw std::invalid_argument("apply_single_qubit: qubit index out of range");
  }
  CVec amps = s.amplitudes();
  apply_single_qubit_inplace(
      amps, s.layout().shift(register_name) + (r.width - 1 - qubit), gate);
  return StateVector(s.layout(), std::move(amps));
}

StateVector apply_basis_permutation(
    const StateVector& s, std::span<const std::string> targets,
    const std::function<std::uint64_t(std::uint64_t)>& perm) {
  const SubsetIndexer idx(s.layout(), targets);
  const std::uint64_t dim = static_cast<std::uint64_t>(s.amplitudes().size());
  CVec out = CVec::Zero(s.amplitudes().size());
  for (std::uint64_t g = 0; g < dim; ++g) {
    const std::uint64_t t = perm(idx.sub_of(g));
    if (t >= idx.sub_dim()) {
      throw std::invalid_argument("apply_basis_permutation: image out of range");
    }
    // += so that a non-bijective perm perturbs the norm and is caught by the
    // StateVector constructor.
    out[static_cast<Eigen::Index>(idx.global_of(t, idx.rest_of(g)))] +=
        s.amplitudes()[static_cast<Eigen::Index>(g)];
  }
  return StateVector(s.layout(), std::move(out));
}

StateVector reorder_registers(const StateVector& s,
                              std::span<const std::string> new_order) {
  const SubsetIndexer idx(s.layout(), new_order);
  if (idx.rest_width() != 0) {
    throw std::invalid_argument(
        "reorder_registers: new order must name every register");
  }
  const std::uint64_t dim = static_cast<std::uint64_t>(s.amplitudes().size());
  CVec out(s.amplitudes().size());
  for (std::uint64_t g = 0; g < dim; ++g) {
    out[static_cast<Eigen::Index>(idx.sub_of(g))] =
        s.amplitudes()[static_cast<Eigen::Index>(g)];
  }
  return StateVector(idx.sub_layout(), std::move(out));
}

StateVector append_register(const StateVector& s, std::string name, int width) {
  return tensor(s, StateVector::computational(
                       RegisterMap::single(std::move(name), width), 0));
}

std::vector<double> outcome_distribution(const StateVector& s,
                                         std::span<const std::string> targets,
                                         std::span<const Basis> basis_per_qubit) {
  const SubsetIndexer idx(s.layout(), targets);
  if (static_cast<int>(basis_per_qubit.size()) != idx.sub_width()) {
    throw std::invalid_argument(
        "outcome_distribution: need one basis per target qubit");
  }
  const CVec rotated = to_measurement_frame(s, idx, basis_per_qubit);
  return distribution_in_frame(rotated, idx);
}

namespace {

MeasureResult project_in_frame(const StateVector& s, const SubsetIndexer& idx,
                               std::span<const Basis> bases,
                               std::uint64_t outcome, double probability) {
  if (probability <= 0.0) {
    throw std::logic_error("measurement: zero-probability renormalization");
  }
  CVec rotated = to_measurement_frame(s, idx, bases);
  const double scale = 1.0 / std::sqrt(probability);
  const std::uint64_t dim = static_cast<std::uint64_t>(rotated.size());
  for (std::uint64_t g = 0; g < dim; ++g) {
    if (idx.sub_of(g) == outcome) {
      rotated[static_cast<Eigen::Index>(g)] *= scale;
    } else {
      rotated[static_cast<Eigen::Index>(g)] = 0.0;
    }
  }
  // rotate back to the original frame
  CMat h(2, 2);
  h << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
  for (int q = 0; q < idx.sub_width(); ++q) {
    if (bases[static_cast<std::size_t>(q)] == Basis::Diagonal) {
      apply_single_qubit_inplace(rotated, idx.global_shift_of_sub_qubit(q), h);
    }
  }
  return MeasureResult{unpack_bits(outcome, idx.sub_width()),
                       StateVector(s.layout(), std::move(rotated)), probability};
}

}  // namespace

MeasureResult project_outcome(const StateVector& s,
                              std::span<const std::string> targets,
                              std::span<const Basis> basis_per_qubit,
                              std::uint64_t outcome) {
  const SubsetIndexer idx(s.layout(), targets);
  if (static_cast<int>(basis_per_qubit.size()) != idx.sub_width()) {
    throw std::invalid_argument("project_outcome: need one basis per target qubit");
  }
  if (outcome >= idx.sub_dim()) {
    throw std::invalid_argument("project_outcome: outcome out of range");
  }
  const CVec rotated = to_measurement_frame(s, idx, basis_per_qubit);
  const std::vector<double> probs = distribution_in_frame(rotated, idx);
  const double p = probs[outcome];
  if (p < 1e-15) {
    throw std::invalid_argument("project_outcome: outcome has zero probability");
  }
  return project_in_frame(s, idx, basis_per_qubit, outcome, p);
}

MeasureResult measure(const StateVector& s, std::span<const std::string> targets,
                      std::span<const Basis> basis_per_qubit, Rng& rng) {
  const SubsetIndexer idx(s.layout(), targets);
  if (static_cast<int>(basis_per_qubit.size()) != idx.sub_width()) {
    throw std::invalid_argument("measure: need one basis per target qubit");
  }
  const CVec rotated = to_measurement_frame(s, idx, basis_per_qubit);
  const std::vector<double> probs = distribution_in_frame(rotated, idx);
  const double u = rng.next_double();
  double acc = 0.0;
  std::uint64_t outcome = 0;
  bool found = false;
  for (std::uint64_t o = 0; o < probs.size(); ++o) {
    acc += probs[o];
    if (u < acc) {
      outcome = o;
      found = true;
      break;
    }
  }
  if (!found) {
    // u landed in the floating-point slack above the cumulative sum; take the
    // last outcome with nonzero weight.
    for (std::uint64_t o = probs.size(); o-- > 0;) {
      if (probs[o] > 0.0) {
        outcome = o;
        break;
      }
    }
  }
  return project_in_frame(s, idx, basis_per_qubit, outcome, probs[outcome]);
}

std::uint64_t pack_bits(std::span<const int> bits) {
  std::uint64_t v = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("pack_bits: non-bit value");
    v = (v << 1) | static_cast<std::uint64_t>(b);
  }
  return v;
}

std::vector<int> unpack_bits(std::uint64_t value, int width) {
  std::vector<int> bits(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) {
    bits[static_cast<std::size_t>(i)] =
        static_cast<int>((value >> (width - 1 - i)) & 1);
  }
  return bits;
}

}  // namespace qbc::qstate
