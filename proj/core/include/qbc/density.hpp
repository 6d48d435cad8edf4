// SPDX-License-Identifier: MIT

#pragma once

#include <span>
#include <string>

#include "qbc/qstate.hpp"

namespace qbc::qstate {

// Hermitian, trace-1, positive semidefinite matrix. All three structural
// properties are validated at construction (hermiticity and trace within
// 1e-9, eigenvalues >= -1e-9).
class DensityMatrix {
 public:
  explicit DensityMatrix(CMat entries);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const CMat& matrix() const { return entries_; }

  static DensityMatrix pure(const CVec& amplitudes);
  static DensityMatrix pure(const StateVector& s) { return pure(s.amplitudes()); }
  static DensityMatrix maximally_mixed(std::size_t dim);

 private:
  CMat entries_;
};

// Reduced state over the kept registers (in the order given; first name =
// most significant index bits of the result).
DensityMatrix partial_trace(const StateVector& s,
                            std::span<const std::string> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const RegisterMap& layout,
                            std::span<const std::string> keep);

// (1/2) * sum of |eigenvalues| of r0 - r1. In [0, 1]; 0 iff equal.
double trace_distance(const DensityMatrix& r0, const DensityMatrix& r1);

// Uhlmann fidelity tr sqrt(sqrt(r0) r1 sqrt(r0)). In [0, 1]; 1 iff equal;
// |<psi|phi>| for pure states.
double fidelity(const DensityMatrix& r0, const DensityMatrix& r1);

// Principal square root of an (approximately) PSD Hermitian matrix via
// eigendecomposition. Negative eigenvalues are clamped to 0; clamps larger
// than 1e-9 are logged to stderr.
CMat matrix_sqrt_psd(const CMat& hermitian_psd);

}  // namespace qbc::qstate
