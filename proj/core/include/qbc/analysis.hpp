// SPDX-License-Identifier: MIT

#pragma once

#include <string>
#include <vector>

#include "qbc/density.hpp"
#include "qbc/qstate.hpp"

namespace qbc::analysis {

using qstate::CMat;
using qstate::CVec;
using qstate::DensityMatrix;
using qstate::StateVector;
using qstate::UnitaryOp;

// A bipartition of a state's registers into Alice's side (A) and Bob's
// side (B). Both sides must be nonempty and together name every register.
struct Bipartition {
  std::vector<std::string> side_a;
  std::vector<std::string> side_b;
};

// |s> = sum_i sqrt(lambda_i) |a_i> (x) |b_i>, coefficients descending,
// sum lambda_i = 1, factors orthonormal. a/b vectors live in the sub-index
// spaces of their side's registers (in bipartition order).
struct SchmidtDecomposition {
  std::vector<double> coefficients;
  std::vector<CVec> a_vectors;
  std::vector<CVec> b_vectors;
  Bipartition bipartition;
};

// Coefficients below this are treated as numerically zero.
inline constexpr double kSchmidtCutoff = 1e-12;

// Spectral decomposition of the reduced state on side B, with side-A vectors
// back-solved from the state: a_i = (<b_i| applied to s) / sqrt(lambda_i).
// Back-solving (rather than decomposing both sides independently) keeps
// degenerate coefficients correctly paired, which the cheating unitary
// construction relies on.
SchmidtDecomposition schmidt_decompose(const StateVector& s,
                                       const Bipartition& bipartition);

// The side-A unitary that maps |phi0> onto |phi1> when both states have the
// same reduced state on side B: it sends phi0's Schmidt A-vectors (in the
// shared B eigenbasis) to phi1's, completed canonically off the support.
// Throws if the reduced B-states differ by more than 1e-7 trace distance;
// callers must then use uhlmann_unitary.
UnitaryOp cheat_unitary(const StateVector& phi0, const StateVector& phi1,
                        const Bipartition& bipartition);

struct UhlmannResult {
  UnitaryOp rotation;       // on side A
  double achieved_overlap;  // |<phi1| (U (x) I) |psi0>|
};

// The side-A rotation maximizing |<phi1|(U (x) I)|psi0>|. By Uhlmann's
// theorem the maximum equals fidelity(rho_B of psi0, rho_B of phi1); the
// constructive form takes the SVD of the cross-Gram matrix of the two
// states' B-side Schmidt decompositions and pairs the resulting polar bases.
UhlmannResult uhlmann_unitary(const StateVector& psi0, const StateVector& phi1,
                              const Bipartition& bipartition);

// Binary state-discrimination instance: which of rho0 / rho1 was sent, with
// prior Pr[B=0] = prior0.
struct DiscriminationInstance {
  DensityMatrix rho0;
  DensityMatrix rho1;
  double prior0 = 0.5;
};

// Minimal error probability over all binary measurements (Helstrom):
// PE = 1/2 (1 - || prior0 rho0 - prior1 rho1 ||_1). In [0, 1/2].
double distinguishing_error(const DiscriminationInstance& inst);

// Security exponent for the concealment constraint |1/2 - PE| <= 2^{-alpha n}.
struct AnalysisConfig {
  double alpha = 1.0;
  int n_photons = 1;
};

bool check_concealment_bound(const DiscriminationInstance& inst,
                             const AnalysisConfig& cfg);

// Convenience: applies a side-A operator to the full state.
StateVector apply_on_side_a(const StateVector& s, const UnitaryOp& u,
                            const Bipartition& bipartition);

}  // namespace qbc::analysis
