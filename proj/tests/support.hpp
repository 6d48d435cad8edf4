// SPDX-License-Identifier: MIT

#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "qbc/analysis.hpp"
#include "qbc/density.hpp"
#include "qbc/oneway.hpp"
#include "qbc/qstate.hpp"
#include "qbc/rng.hpp"

namespace qbc::test {

using qstate::Basis;
using qstate::CMat;
using qstate::Complex;
using qstate::CVec;
using qstate::DensityMatrix;
using qstate::RegisterMap;
using qstate::StateVector;

inline double gaussian(Rng& rng) {
  double u1 = rng.next_double();
  while (u1 <= 1e-300) u1 = rng.next_double();
  const double u2 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline CVec random_state_vec(std::size_t dim, Rng& rng) {
  CVec v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = Complex(gaussian(rng), gaussian(rng));
  }
  v /= v.norm();
  return v;
}

inline StateVector random_state(RegisterMap layout, Rng& rng) {
  const std::size_t dim = layout.dim();
  return StateVector(std::move(layout), random_state_vec(dim, rng));
}

// Haar-distributed unitary via QR of a Ginibre matrix with phase fixing.
inline CMat random_unitary(std::size_t dim, Rng& rng) {
  CMat g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      g(i, j) = Complex(gaussian(rng), gaussian(rng));
    }
  }
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const Complex d = r(i, i);
    q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1, 0);
  }
  return q;
}

// Full-rank random density matrix (Ginibre G G^dag, normalized).
inline DensityMatrix random_density(std::size_t dim, Rng& rng) {
  CMat g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      g(i, j) = Complex(gaussian(rng), gaussian(rng));
    }
  }
  CMat m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

// Max amplitude error of the Schmidt reconstruction sum sqrt(l) a_i (x) b_i
// against the original state.
inline double schmidt_reconstruction_error(
    const analysis::SchmidtDecomposition& sd, const StateVector& s) {
  const qstate::SubsetIndexer idx_a(s.layout(), sd.bipartition.side_a);
  const qstate::SubsetIndexer idx_b(s.layout(), sd.bipartition.side_b);
  double worst = 0.0;
  for (std::uint64_t g = 0; g < s.dim(); ++g) {
    Complex expected{0.0, 0.0};
    for (std::size_t i = 0; i < sd.coefficients.size(); ++i) {
      expected += std::sqrt(sd.coefficients[i]) *
                  sd.a_vectors[i][static_cast<Eigen::Index>(idx_a.sub_of(g))] *
                  sd.b_vectors[i][static_cast<Eigen::Index>(idx_b.sub_of(g))];
    }
    worst = std::max(worst,
                     std::abs(expected - s.amplitudes()[static_cast<Eigen::Index>(g)]));
  }
  return worst;
}

// Direct amplitude assembly of the entangled commitment state: the test
// oracle against which the circuit construction is checked.
inline StateVector gamma_oracle(const oneway::PermutationFamily& fam,
                                Basis theta) {
  const int n = fam.n();
  const RegisterMap layout({{"rw", n}, {"rf", n}, {"rAz", 1}, {"rBz", 1}});
  CVec amp = CVec::Zero(static_cast<Eigen::Index>(layout.dim()));
  const double coef = 1.0 / std::sqrt(std::exp2(n + 1));
  const int x = qstate::basis_bit(theta);
  for (std::uint64_t w = 0; w < fam.domain_size(); ++w) {
    for (int z = 0; z < 2; ++z) {
      const std::uint64_t f = fam.eval(x, z, w);
      const CVec ket = qstate::basis_ket(theta, z);
      for (int za = 0; za < 2; ++za) {
        for (int zb = 0; zb < 2; ++zb) {
          const std::uint64_t idx =
              ((((w << n) | f) << 1 | static_cast<std::uint64_t>(za)) << 1) |
              static_cast<std::uint64_t>(zb);
          amp[static_cast<Eigen::Index>(idx)] += coef * ket[za] * ket[zb];
        }
      }
    }
  }
  return StateVector(layout, std::move(amp));
}

// --- exact transcript-distribution enumeration (tiny parameter scale) ---

using Dist = std::map<std::string, double>;

inline Dist product(const Dist& a, const Dist& b) {
  Dist out;
  for (const auto& [ka, pa] : a) {
    for (const auto& [kb, pb] : b) {
      out[ka + "|" + kb] += pa * pb;
    }
  }
  return out;
}

inline double statistical_distance(const Dist& p, const Dist& q) {
  double total = 0.0;
  for (const auto& [k, v] : p) {
    const auto it = q.find(k);
    total += std::abs(v - (it == q.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : q) {
    if (!p.contains(k)) total += v;
  }
  return 0.5 * total;
}

}  // namespace qbc::test
