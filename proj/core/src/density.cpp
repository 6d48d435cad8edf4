// SPDX-License-Identifier: MIT

#include "qbc/density.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qbc::qstate {

DensityMatrix::DensityMatrix(CMat entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw std::invalid_argument("DensityMatrix: matrix must be square");
  }
  const double herm_dev = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > kStructuralTol) {
    throw std::invalid_argument("DensityMatrix: not Hermitian (deviation " +
                                std::to_string(herm_dev) + ")");
  }
  const double trace_dev = std::abs(entries_.trace().real() - 1.0) +
                           std::abs(entries_.trace().imag());
  if (trace_dev > kStructuralTol) {
    throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " +
                                std::to_string(trace_dev));
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(entries_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kStructuralTol) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
  }
}

DensityMatrix DensityMatrix::pure(const CVec& amplitudes) {
  return DensityMatrix(amplitudes * amplitudes.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return DensityMatrix(CMat::Identity(d, d) / static_cast<double>(dim));
}

DensityMatrix partial_trace(const StateVector& s,
                            std::span<const std::string> keep) {
  if (keep.empty()) {
    throw std::invalid_argument("partial_trace: empty keep set");
  }
  const SubsetIndexer idx(s.layout(), keep);
  const std::uint64_t kd = idx.sub_dim();
  const std::uint64_t rd = idx.rest_dim();
  CMat rho = CMat::Zero(static_cast<Eigen::Index>(kd),
                        static_cast<Eigen::Index>(kd));
  for (std::uint64_t r = 0; r < rd; ++r) {
    for (std::uint64_t i = 0; i < kd; ++i) {
      const Complex ai =
          s.amplitudes()[static_cast<Eigen::Index>(idx.global_of(i, r))];
      if (ai == Complex{0.0, 0.0}) continue;
      for (std::uint64_t j = 0; j < kd; ++j) {
        const Complex aj =
            s.amplitudes()[static_cast<Eigen::Index>(idx.global_of(j, r))];
        rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
            ai * std::conj(aj);
      }
    }
  }
  // symmetrize away accumulation roundoff before validation
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(rho));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const RegisterMap& layout,
                            std::span<const std::string> keep) {
  if (keep.empty()) {
    throw std::invalid_argument("partial_trace: empty keep set");
  }
  if (rho.dim() != layout.dim()) {
    throw std::invalid_argument("partial_trace: layout does not match matrix");
  }
  const SubsetIndexer idx(layout, keep);
  const std::uint64_t kd = idx.sub_dim();
  const std::uint64_t rd = idx.rest_dim();
  CMat out = CMat::Zero(static_cast<Eigen::Index>(kd),
                        static_cast<Eigen::Index>(kd));
  for (std::uint64_t r = 0; r < rd; ++r) {
    for (std::uint64_t i = 0; i < kd; ++i) {
      for (std::uint64_t j = 0; j < kd; ++j) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
            rho.matrix()(static_cast<Eigen::Index>(idx.global_of(i, r)),
                         static_cast<Eigen::Index>(idx.global_of(j, r)));
      }
    }
  }
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out));
}

double trace_distance(const DensityMatrix& r0, const DensityMatrix& r1) {
  if (r0.dim() != r1.dim()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(r0.matrix() - r1.matrix(),
                                         Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

CMat matrix_sqrt_psd(const CMat& hermitian_psd) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_psd);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < 0.0) {
      if (ev[i] < -kStructuralTol) {
        std::cerr << "matrix_sqrt_psd: clamping eigenvalue " << ev[i]
                  << " to 0\n";
      }
      ev[i] = 0.0;
    }
  }
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

double fidelity(const DensityMatrix& r0, const DensityMatrix& r1) {
  if (r0.dim() != r1.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  const CMat sqrt_r0 = matrix_sqrt_psd(r0.matrix());
  const CMat inner = sqrt_r0 * r1.matrix() * sqrt_r0;
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (inner + inner.adjoint()),
                                         Eigen::EigenvaluesOnly);
  // Eigenvalues at the double-precision noise floor would each contribute
  // sqrt(noise) ~ 1e-8 to the sum; they carry no signal and are dropped.
  constexpr double kNoiseFloor = 1e-13;
  double f = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lambda = es.eigenvalues()[i];
    if (lambda > kNoiseFloor) f += std::sqrt(lambda);
  }
  return std::min(f, 1.0);
}

}  // namespace qbc::qstate
