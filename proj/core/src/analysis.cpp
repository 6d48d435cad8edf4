// SPDX-License-Identifier: MIT

#include "qbc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qbc::analysis {

namespace {

void validate_bipartition(const qstate::RegisterMap& layout,
                          const Bipartition& bp) {
  if (bp.side_a.empty() || bp.side_b.empty()) {
    throw std::invalid_argument("bipartition: both sides must be nonempty");
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : bp.side_a) {
    layout.reg(name);
    if (!seen.insert(name).second) {
      throw std::invalid_argument("bipartition: register '" + name +
                                  "' listed twice");
    }
  }
  for (const auto& name : bp.side_b) {
    layout.reg(name);
    if (!seen.insert(name).second) {
      throw std::invalid_argument("bipartition: register '" + name +
                                  "' listed twice");
    }
  }
  if (seen.size() != layout.registers().size()) {
    throw std::invalid_argument("bipartition: must cover every register");
  }
}

// Extends `columns` (orthonormal) to a full orthonormal basis of dim by
// Gram-Schmidt over the canonical basis, in index order. Deterministic.
std::vector<CVec> complete_orthonormal(std::vector<CVec> columns,
                                       Eigen::Index dim) {
  for (Eigen::Index cand = 0;
       cand < dim && static_cast<Eigen::Index>(columns.size()) < dim; ++cand) {
    CVec v = CVec::Zero(dim);
    v[cand] = 1.0;
    for (const auto& c : columns) v -= c.dot(v) * c;
    const double norm = v.norm();
    if (norm > 1e-6) columns.push_back(v / norm);
  }
  if (static_cast<Eigen::Index>(columns.size()) != dim) {
    throw std::logic_error("complete_orthonormal: completion failed");
  }
  return columns;
}

// Nearest unitary (polar factor); stabilizes bases assembled from
// near-orthonormal vectors before the UnitaryOp validity check.
CMat polar_unitary(const CMat& m) {
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Schmidt data against a caller-fixed B-side eigenbasis: back-solves the
// side-A vectors of `s` from the given (lambda_i, b_i) pairs.
std::vector<CVec> back_solve_a_vectors(const StateVector& s,
                                       const Bipartition& bp,
                                       const std::vector<double>& lambdas,
                                       const std::vector<CVec>& b_vectors) {
  const qstate::SubsetIndexer idx_a(s.layout(), bp.side_a);
  const qstate::SubsetIndexer idx_b(s.layout(), bp.side_b);
  const std::uint64_t dim = static_cast<std::uint64_t>(s.amplitudes().size());
  std::vector<CVec> a_vectors;
  a_vectors.reserve(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    CVec a = CVec::Zero(static_cast<Eigen::Index>(idx_a.sub_dim()));
    for (std::uint64_t g = 0; g < dim; ++g) {
      const qstate::Complex amp = s.amplitudes()[static_cast<Eigen::Index>(g)];
      if (amp == qstate::Complex{0.0, 0.0}) continue;
      a[static_cast<Eigen::Index>(idx_a.sub_of(g))] +=
          std::conj(b_vectors[i][static_cast<Eigen::Index>(idx_b.sub_of(g))]) *
          amp;
    }
    a /= std::sqrt(lambdas[i]);
    a_vectors.push_back(std::move(a));
  }
  return a_vectors;
}

struct BSpectrum {
  std::vector<double> lambdas;  // descending, > cutoff
  std::vector<CVec> b_vectors;
};

BSpectrum b_spectrum(const CMat& rho_b) {
  Eigen::SelfAdjointEigenSolver<CMat> es(rho_b);
  BSpectrum out;
  // Eigen returns ascending eigenvalues; walk backwards for descending.
  for (Eigen::Index k = es.eigenvalues().size(); k-- > 0;) {
    const double lambda = es.eigenvalues()[k];
    if (lambda > kSchmidtCutoff) {
      out.lambdas.push_back(lambda);
      out.b_vectors.push_back(es.eigenvectors().col(k));
    }
  }
  return out;
}

}  // namespace

SchmidtDecomposition schmidt_decompose(const StateVector& s,
                                       const Bipartition& bipartition) {
  validate_bipartition(s.layout(), bipartition);
  const DensityMatrix rho_b = qstate::partial_trace(s, bipartition.side_b);
  BSpectrum spec = b_spectrum(rho_b.matrix());
  SchmidtDecomposition sd;
  sd.coefficients = std::move(spec.lambdas);
  sd.b_vectors = std::move(spec.b_vectors);
  sd.a_vectors = back_solve_a_vectors(s, bipartition, sd.coefficients, sd.b_vectors);
  sd.bipartition = bipartition;
  return sd;
}

UnitaryOp cheat_unitary(const StateVector& phi0, const StateVector& phi1,
                        const Bipartition& bipartition) {
  if (!(phi0.layout() == phi1.layout())) {
    throw std::invalid_argument("cheat_unitary: layouts differ");
  }
  validate_bipartition(phi0.layout(), bipartition);
  const DensityMatrix rho_b0 = qstate::partial_trace(phi0, bipartition.side_b);
  const DensityMatrix rho_b1 = qstate::partial_trace(phi1, bipartition.side_b);
  const double mismatch = qstate::trace_distance(rho_b0, rho_b1);
  if (mismatch > qstate::kSpectralTol) {
    throw std::invalid_argument(
        "cheat_unitary: reduced B-states differ (trace distance " +
        std::to_string(mismatch) + "); use uhlmann_unitary");
  }
  // One shared B eigenbasis for both states, so degenerate coefficients stay
  // paired; the symmetrized average keeps the construction even-handed.
  const CMat rho_avg = 0.5 * (rho_b0.matrix() + rho_b1.matrix());
  const BSpectrum spec = b_spectrum(rho_avg);
  const auto a0 =
      back_solve_a_vectors(phi0, bipartition, spec.lambdas, spec.b_vectors);
  const auto a1 =
      back_solve_a_vectors(phi1, bipartition, spec.lambdas, spec.b_vectors);

  const qstate::SubsetIndexer idx_a(phi0.layout(), bipartition.side_a);
  const auto dim_a = static_cast<Eigen::Index>(idx_a.sub_dim());
  const auto src = complete_orthonormal(a0, dim_a);
  const auto dst = complete_orthonormal(a1, dim_a);
  CMat u = CMat::Zero(dim_a, dim_a);
  for (Eigen::Index k = 0; k < dim_a; ++k) {
    u += dst[static_cast<std::size_t>(k)] *
         src[static_cast<std::size_t>(k)].adjoint();
  }
  return UnitaryOp(polar_unitary(u), bipartition.side_a);
}

UhlmannResult uhlmann_unitary(const StateVector& psi0, const StateVector& phi1,
                              const Bipartition& bipartition) {
  if (!(psi0.layout() == phi1.layout())) {
    throw std::invalid_argument("uhlmann_unitary: layouts differ");
  }
  validate_bipartition(psi0.layout(), bipartition);
  const SchmidtDecomposition sd0 = schmidt_decompose(psi0, bipartition);
  const SchmidtDecomposition sd1 = schmidt_decompose(phi1, bipartition);
  const auto k0 = static_cast<Eigen::Index>(sd0.coefficients.size());
  const auto k1 = static_cast<Eigen::Index>(sd1.coefficients.size());

  // Cross-Gram of the B-side decompositions, weighted by the Schmidt
  // coefficients: G(j, i) = sqrt(mu_j lambda_i) <d_j|b_i>.
  CMat gram(k1, k0);
  for (Eigen::Index j = 0; j < k1; ++j) {
    for (Eigen::Index i = 0; i < k0; ++i) {
      gram(j, i) = std::sqrt(sd1.coefficients[static_cast<std::size_t>(j)] *
                             sd0.coefficients[static_cast<std::size_t>(i)]) *
                   sd1.b_vectors[static_cast<std::size_t>(j)].dot(
                       sd0.b_vectors[static_cast<std::size_t>(i)]);
    }
  }
  // The polar part of the (plain) transpose pairs psi0's Schmidt A-basis
  // with phi1's so that the achieved overlap is the sum of G's singular
  // values, i.e. the reduced-state fidelity.
  Eigen::JacobiSVD<CMat> svd(gram.transpose(),
                             Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CMat& p = svd.matrixU();  // k0 x k0
  const CMat& q = svd.matrixV();  // k1 x k1

  const qstate::SubsetIndexer idx_a(psi0.layout(), bipartition.side_a);
  const auto dim_a = static_cast<Eigen::Index>(idx_a.sub_dim());
  CMat a_mat(dim_a, k0);
  for (Eigen::Index i = 0; i < k0; ++i) {
    a_mat.col(i) = sd0.a_vectors[static_cast<std::size_t>(i)];
  }
  CMat c_mat(dim_a, k1);
  for (Eigen::Index j = 0; j < k1; ++j) {
    c_mat.col(j) = sd1.a_vectors[static_cast<std::size_t>(j)];
  }
  const CMat rotated_src = a_mat * p;  // dim_a x k0
  const CMat rotated_dst = c_mat * q;  // dim_a x k1

  std::vector<CVec> src, dst;
  for (Eigen::Index i = 0; i < k0; ++i) src.push_back(rotated_src.col(i));
  for (Eigen::Index j = 0; j < k1; ++j) dst.push_back(rotated_dst.col(j));
  const auto src_full = complete_orthonormal(std::move(src), dim_a);
  const auto dst_full = complete_orthonormal(std::move(dst), dim_a);
  CMat u = CMat::Zero(dim_a, dim_a);
  for (Eigen::Index k = 0; k < dim_a; ++k) {
    u += dst_full[static_cast<std::size_t>(k)] *
         src_full[static_cast<std::size_t>(k)].adjoint();
  }
  UnitaryOp rotation(polar_unitary(u), bipartition.side_a);
  const StateVector moved = apply_on_side_a(psi0, rotation, bipartition);
  const double achieved = std::abs(qstate::inner_product(phi1, moved));
  return UhlmannResult{std::move(rotation), achieved};
}

double distinguishing_error(const DiscriminationInstance& inst) {
  if (inst.rho0.dim() != inst.rho1.dim()) {
    throw std::invalid_argument("distinguishing_error: dimension mismatch");
  }
  if (inst.prior0 < 0.0 || inst.prior0 > 1.0) {
    throw std::invalid_argument("distinguishing_error: prior out of [0, 1]");
  }
  const double prior1 = 1.0 - inst.prior0;
  Eigen::SelfAdjointEigenSolver<CMat> es(
      inst.prior0 * inst.rho0.matrix() - prior1 * inst.rho1.matrix(),
      Eigen::EigenvaluesOnly);
  const double helstrom_norm = es.eigenvalues().cwiseAbs().sum();
  return std::clamp(0.5 * (1.0 - helstrom_norm), 0.0, 0.5);
}

bool check_concealment_bound(const DiscriminationInstance& inst,
                             const AnalysisConfig& cfg) {
  if (cfg.alpha <= 0.0 || cfg.n_photons < 1) {
    throw std::invalid_argument("check_concealment_bound: need alpha > 0, n >= 1");
  }
  const double bound = std::exp2(-cfg.alpha * cfg.n_photons);
  return std::abs(0.5 - distinguishing_error(inst)) <= bound;
}

StateVector apply_on_side_a(const StateVector& s, const UnitaryOp& u,
                            const Bipartition& bipartition) {
  return qstate::apply_unitary(s, u, bipartition.side_a);
}

}  // namespace qbc::analysis
