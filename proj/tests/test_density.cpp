// SPDX-License-Identifier: MIT

#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace qbc;
using namespace qbc::test;

namespace {
std::vector<std::string> names(std::initializer_list<const char*> list) {
  return {list.begin(), list.end()};
}
}  // namespace

TEST_CASE("density matrix validation") {
  CMat bad_herm(2, 2);
  bad_herm << 0.5, Complex(0.1, 0.2), Complex(0.1, 0.3), 0.5;
  CHECK_THROWS_AS(DensityMatrix{bad_herm}, std::invalid_argument);

  CMat bad_trace = CMat::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix{bad_trace}, std::invalid_argument);

  CMat indefinite(2, 2);
  indefinite << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityMatrix{indefinite}, std::invalid_argument);
}

TEST_CASE("partial trace of product and Bell states") {
  Rng rng(17);
  for (int k = 0; k < 30; ++k) {
    const StateVector a = random_state(RegisterMap::single("a", 2), rng);
    const StateVector b = random_state(RegisterMap::single("b", 2), rng);
    const StateVector ab = qstate::tensor(a, b);
    const DensityMatrix ra = qstate::partial_trace(ab, names({"a"}));
    const CMat expected = a.amplitudes() * a.amplitudes().adjoint();
    CHECK((ra.matrix() - expected).cwiseAbs().maxCoeff() < 1e-9);
  }

  CVec bell = CVec::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  const StateVector pair(RegisterMap({{"a", 1}, {"b", 1}}), bell);
  const DensityMatrix half = qstate::partial_trace(pair, names({"b"}));
  CHECK((half.matrix() - 0.5 * CMat::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-9);

  CHECK_THROWS_AS(qstate::partial_trace(pair, std::vector<std::string>{}),
                  std::invalid_argument);
}

TEST_CASE("partial trace of a density matrix input") {
  Rng rng(23);
  const RegisterMap layout({{"a", 1}, {"b", 2}});
  const StateVector s = random_state(layout, rng);
  const DensityMatrix rho = DensityMatrix::pure(s);
  const DensityMatrix via_state = qstate::partial_trace(s, names({"b"}));
  const DensityMatrix via_matrix =
      qstate::partial_trace(rho, layout, names({"b"}));
  CHECK((via_state.matrix() - via_matrix.matrix()).cwiseAbs().maxCoeff() <
        1e-9);
}

TEST_CASE("trace distance basics") {
  const DensityMatrix zero = DensityMatrix::pure(qstate::bb84_state(0, 0));
  const DensityMatrix one = DensityMatrix::pure(qstate::bb84_state(0, 1));
  CHECK(qstate::trace_distance(zero, zero) < 1e-12);
  CHECK(qstate::trace_distance(zero, one) == doctest::Approx(1.0).epsilon(1e-12));

  // the concealment identity: rho_+ equals rho_x
  const CMat rho_plus =
      0.5 * (DensityMatrix::pure(qstate::bb84_state(0, 0)).matrix() +
             DensityMatrix::pure(qstate::bb84_state(0, 1)).matrix());
  const CMat rho_times =
      0.5 * (DensityMatrix::pure(qstate::bb84_state(1, 0)).matrix() +
             DensityMatrix::pure(qstate::bb84_state(1, 1)).matrix());
  CHECK(qstate::trace_distance(DensityMatrix(rho_plus),
                               DensityMatrix(rho_times)) <= 1e-12);

  CHECK_THROWS_AS(
      qstate::trace_distance(zero, DensityMatrix::maximally_mixed(4)),
      std::invalid_argument);
}

TEST_CASE("fidelity basics and pure-state oracle") {
  Rng rng(31);
  for (int k = 0; k < 30; ++k) {
    const DensityMatrix rho = random_density(4, rng);
    CHECK(qstate::fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-9));
  }
  const DensityMatrix zero = DensityMatrix::pure(qstate::bb84_state(0, 0));
  const DensityMatrix one = DensityMatrix::pure(qstate::bb84_state(0, 1));
  CHECK(qstate::fidelity(zero, one) < 1e-9);

  // two pure states: fidelity equals |<psi|phi>| computed directly
  for (int k = 0; k < 100; ++k) {
    const CVec psi = random_state_vec(4, rng);
    const CVec phi = random_state_vec(4, rng);
    const double direct = std::abs(psi.dot(phi));
    const double via_fid =
        qstate::fidelity(DensityMatrix::pure(psi), DensityMatrix::pure(phi));
    CHECK(std::abs(direct - via_fid) < 1e-9);
  }
}

TEST_CASE("Fuchs-van de Graaf inequalities") {
  Rng rng(41);
  for (const std::size_t dim : {std::size_t{2}, std::size_t{4}}) {
    for (int k = 0; k < 200; ++k) {
      const DensityMatrix r0 = random_density(dim, rng);
      const DensityMatrix r1 = random_density(dim, rng);
      const double td = qstate::trace_distance(r0, r1);
      const double f = qstate::fidelity(r0, r1);
      CHECK(1.0 - f <= td + 1e-7);
      CHECK(td <= std::sqrt(std::max(0.0, 1.0 - f * f)) + 1e-7);
    }
  }
}

TEST_CASE("reduced states of a bipartite pure state share their spectrum") {
  Rng rng(53);
  for (int k = 0; k < 50; ++k) {
    const RegisterMap layout({{"a", 2}, {"b", 3}});
    const StateVector s = random_state(layout, rng);
    const DensityMatrix ra = qstate::partial_trace(s, names({"a"}));
    const DensityMatrix rb = qstate::partial_trace(s, names({"b"}));
    Eigen::SelfAdjointEigenSolver<CMat> ea(ra.matrix(), Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<CMat> eb(rb.matrix(), Eigen::EigenvaluesOnly);
    // compare the nonzero tails (descending)
    std::vector<double> va, vb;
    for (Eigen::Index i = ea.eigenvalues().size(); i-- > 0;) {
      if (ea.eigenvalues()[i] > 1e-12) va.push_back(ea.eigenvalues()[i]);
    }
    for (Eigen::Index i = eb.eigenvalues().size(); i-- > 0;) {
      if (eb.eigenvalues()[i] > 1e-12) vb.push_back(eb.eigenvalues()[i]);
    }
    REQUIRE(va.size() == vb.size());
    for (std::size_t i = 0; i < va.size(); ++i) {
      CHECK(std::abs(va[i] - vb[i]) < 1e-9);
    }
  }
}

TEST_CASE("psd matrix square root squares back") {
  Rng rng(61);
  for (int k = 0; k < 20; ++k) {
    const DensityMatrix rho = random_density(4, rng);
    const CMat root = qstate::matrix_sqrt_psd(rho.matrix());
    CHECK((root * root - rho.matrix()).cwiseAbs().maxCoeff() < 1e-9);
  }
}
