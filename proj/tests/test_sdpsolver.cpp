// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "irssec/phaseopt.hpp"
#include "irssec/sdpsolver.hpp"
#include "oracles.hpp"

using namespace irssec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

void check_feasible(const SdpSolution& s) {
  for (Eigen::Index i = 0; i < s.v.rows(); ++i)
    CHECK_THAT(s.v(i, i).real(), WithinAbs(1.0, 1e-6));
  CHECK(jacobi_eigensystem(s.v).values.minCoeff() >= -1e-7);
  CHECK(is_hermitian(s.v));
}

}  // namespace

TEST_CASE("identity objective is the dimension", "[sdpsolver]") {
  const SdpSolution s = solve_unit_diag_sdp(ComplexMatrix::Identity(4, 4));
  CHECK(s.converged);
  CHECK_THAT(s.objective, WithinAbs(4.0, 1e-9));
  check_feasible(s);
}

TEST_CASE("rank-one A is tight", "[sdpsolver]") {
  Rng rng(1);
  for (int n : {3, 6}) {
    const ComplexVector c = sample_cn(n, 1.0, rng);
    const SdpSolution s = solve_unit_diag_sdp(c * c.adjoint());
    CHECK(s.converged);
    check_feasible(s);
    const double target = std::pow(c.cwiseAbs().sum(), 2);
    CHECK_THAT(s.objective, WithinRel(target, 1e-5));
    if (n == 3) CHECK_THAT(oracle::grid_max(c * c.adjoint(), 128).value, WithinRel(target, 1e-3));
  }
}

TEST_CASE("relaxation dominates the unimodular optimum", "[sdpsolver]") {
  Rng rng(2);
  std::vector<double> gaps;
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix a = oracle::random_hermitian(3, rng);
    const SdpSolution s = solve_unit_diag_sdp(a);
    CHECK(s.converged);
    check_feasible(s);
    const auto grid = oracle::grid_max(a, 128);
    const double polished = brute_force_phase({a}, 128, true).objective;
    CHECK(s.objective + 1e-6 >= polished);
    CHECK(s.dual_bound + 1e-6 >= s.objective);
    gaps.push_back((s.objective - grid.value) / std::abs(grid.value));
  }
  std::nth_element(gaps.begin(), gaps.begin() + 25, gaps.end());
  CHECK(gaps[25] < 0.05);
}

TEST_CASE("N = 4 relaxation bound", "[sdpsolver]") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a = oracle::random_hermitian(4, rng);
    const SdpSolution s = solve_unit_diag_sdp(a);
    CHECK(s.objective + 1e-6 >= oracle::grid_max(a, 48).value);
  }
}

TEST_CASE("scale equivariance", "[sdpsolver]") {
  Rng rng(4);
  const ComplexMatrix a = oracle::random_hermitian(5, rng);
  const SdpSolution s1 = solve_unit_diag_sdp(a);
  const SdpSolution s2 = solve_unit_diag_sdp(2.0 * a);
  CHECK_THAT(s2.objective, WithinRel(2.0 * s1.objective, 1e-6));
  CHECK((s1.v - s2.v).norm() < 1e-6);
}

TEST_CASE("warm start reproduces the cold answer", "[sdpsolver]") {
  Rng rng(5);
  const ComplexMatrix a = oracle::random_hermitian(6, rng);
  SdpWarmStart warm;
  const SdpSolution first = solve_unit_diag_sdp(a, {}, &warm);
  CHECK(warm.matches(6));
  const ComplexMatrix b = a + 1e-3 * oracle::random_hermitian(6, rng);
  const SdpSolution cold = solve_unit_diag_sdp(b);
  const SdpSolution hot = solve_unit_diag_sdp(b, {}, &warm);
  CHECK(hot.converged);
  CHECK_THAT(hot.objective, WithinRel(cold.objective, 1e-5));
  CHECK(hot.iterations < cold.iterations);
  CHECK(first.converged);
}

TEST_CASE("sdp_residuals", "[sdpsolver]") {
  Rng rng(6);
  const ComplexMatrix z = oracle::random_hermitian(4, rng);
  const SdpResiduals fixed = sdp_residuals(z, z, z, 1.0);
  CHECK(fixed.primal == 0.0);
  CHECK(fixed.dual == 0.0);

  const ComplexMatrix a = oracle::random_hermitian(4, rng) / 4.0;
  ComplexMatrix v = ComplexMatrix::Identity(4, 4) + a;
  for (Eigen::Index i = 0; i < 4; ++i) v(i, i) = 1.0;
  const ComplexMatrix z1 = psd_project(v);
  const SdpResiduals first = sdp_residuals(v, z1, ComplexMatrix::Identity(4, 4), 1.0);
  CHECK(first.dual > 0.0);
  CHECK(first.primal >= 0.0);

  const SdpSolution s = solve_unit_diag_sdp(oracle::random_hermitian(4, rng));
  CHECK(s.primal_residual < 1e-6);
  CHECK(s.dual_residual < 1e-6);
}

TEST_CASE("iteration cap reports non-convergence", "[sdpsolver]") {
  Rng rng(7);
  const ComplexMatrix a = oracle::random_hermitian(8, rng);
  const SdpSolution s = solve_unit_diag_sdp(a, 1e-12, 5);
  CHECK_FALSE(s.converged);
  CHECK(s.iterations == 5);
  // the returned iterate is still rescaled onto the feasible set
  check_feasible(s);
}

TEST_CASE("sdp input checks", "[sdpsolver]") {
  ComplexMatrix skew = ComplexMatrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  CHECK_THROWS_AS(solve_unit_diag_sdp(skew), NonHermitianInput);
  CHECK_THROWS_AS(solve_unit_diag_sdp(ComplexMatrix::Zero(2, 3)), NonHermitianInput);
  CHECK_THROWS_AS(solve_unit_diag_sdp(ComplexMatrix::Identity(65, 65)), TooLarge);
  CHECK_THROWS_AS(solve_unit_diag_sdp(ComplexMatrix::Identity(2, 2), 0.0, 10), PreconditionError);
  const SdpSolution zero = solve_unit_diag_sdp(ComplexMatrix::Zero(3, 3));
  CHECK(zero.converged);
  CHECK(zero.objective == 0.0);
}
