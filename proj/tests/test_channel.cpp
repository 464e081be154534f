// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>

#include <Eigen/SVD>

#include "irssec/channel.hpp"
#include "oracles.hpp"

using namespace irssec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("steering_vector", "[channel]") {
  const ComplexVector v = steering_vector(2, 0.5, kPi / 2, kPi / 2);
  CHECK(std::abs(v(0) - cdouble(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(v(1) - cdouble(-1.0, 0.0)) < 1e-15);

  for (int n : {1, 3, 8}) {
    const ComplexVector ones = steering_vector(n, 0.5, 0.0, 1.3);
    CHECK((ones - ComplexVector::Ones(n)).norm() == 0.0);
  }

  // elementwise against the defining formula
  const double theta = std::atan(100.0 / 15.0);
  const ComplexVector s = steering_vector(8, 0.5, kPi / 2, theta);
  for (int m = 0; m < 8; ++m) {
    const double phase = 2.0 * kPi * 0.5 * m * std::sin(kPi / 2) * std::sin(theta);
    const cdouble ref(std::cos(phase), std::sin(phase));
    CHECK(std::abs(s(m) - ref) < 1e-14);
    CHECK_THAT(std::abs(s(m)), WithinAbs(1.0, 1e-15));
  }

  CHECK_THROWS_AS(steering_vector(0, 0.5, 0.1, 0.1), PreconditionError);
}

TEST_CASE("make_rank_one_g", "[channel]") {
  ScenarioConfig cfg;
  cfg.num_antennas = 1;
  cfg.num_elements = 1;
  {
    const auto [a, b] = make_rank_one_g(make_geometry(cfg));
    CHECK(a(0) == cdouble(1.0, 0.0));
    CHECK(b(0) == cdouble(1.0, 0.0));
  }

  const ScenarioConfig table;
  const auto link = make_rank_one_g(make_geometry(table));
  REQUIRE(link.a.size() == 8);
  REQUIRE(link.b.size() == 8);
  for (Eigen::Index i = 0; i < 8; ++i) {
    CHECK_THAT(std::abs(link.a(i)), WithinAbs(1.0, 1e-15));
    CHECK_THAT(std::abs(link.b(i)), WithinAbs(1.0, 1e-15));
  }

  // rank one: ||G||_F^2 = ||a||^2 ||b||^2 = |lambda_max(G G^H)|
  const ComplexMatrix g = link.a * link.b.adjoint();
  CHECK_THAT(g.squaredNorm(), WithinRel(link.a.squaredNorm() * link.b.squaredNorm(), 1e-14));
  const Eigen::JacobiSVD<ComplexMatrix> svd(g);
  CHECK(svd.singularValues()(1) < 1e-10 * svd.singularValues()(0));

  // |omega^H G| = |a^H omega| ||b||
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const ComplexVector w = oracle::random_unit(8, rng);
    const double lhs = (w.adjoint() * g).norm();
    CHECK_THAT(lhs, WithinRel(std::abs(link.a.dot(w)) * link.b.norm(), 1e-12));
  }
}

TEST_CASE("los_azimuths follow the AP-IRS line", "[channel]") {
  const auto [t, i] = los_azimuths({0, 0, 25}, {0, 100, 40});
  CHECK_THAT(t, WithinAbs(std::atan(100.0 / 15.0), 1e-15));
  CHECK_THAT(i, WithinAbs(kPi - t, 1e-15));

  ScenarioConfig cfg;
  cfg.ap_azimuth = 0.25;
  CHECK(make_geometry(cfg).ap_azimuth == 0.25);
}

TEST_CASE("make_rician_g", "[channel]") {
  const ScenarioConfig cfg;
  const Geometry geom = make_geometry(cfg);
  const auto link = make_rank_one_g(geom);
  const ComplexMatrix los = link.a * link.b.adjoint();

  SECTION("large K approaches the LoS product") {
    Rng rng(5);
    const ComplexMatrix g = make_rician_g(geom, 1e12, rng);
    CHECK((g - los).cwiseAbs().maxCoeff() < 1e-5);
    Rng rng2(5);
    const ComplexMatrix inf = make_rician_g(geom, std::numeric_limits<double>::infinity(), rng2);
    CHECK((inf - los).norm() < 1e-12);
  }

  for (double k : {0.0, 2.0}) {
    Rng rng(6);
    double acc = 0.0;
    const int draws = 10000;
    for (int d = 0; d < draws; ++d) acc += make_rician_g(geom, k, rng).squaredNorm();
    INFO("K = " << k);
    CHECK_THAT(acc / draws, WithinRel(64.0, 0.02));
  }

  SECTION("K = 0 entries are CN(0,1)") {
    Rng rng(7);
    double acc = 0.0;
    cdouble mean = 0.0;
    for (int d = 0; d < 2000; ++d) {
      const ComplexMatrix g = make_rician_g(geom, 0.0, rng);
      acc += std::norm(g(2, 5));
      mean += g(2, 5);
    }
    CHECK_THAT(acc / 2000, WithinAbs(1.0, 0.1));
    CHECK(std::abs(mean / 2000.0) < 0.1);
  }

  SECTION("continuous in K for matched seeds") {
    double prev = 1e300;
    for (double delta : {1e-1, 1e-3, 1e-5, 1e-7}) {
      Rng r1(8);
      Rng r2(8);
      const double gap =
          (make_rician_g(geom, 2.0, r1) - make_rician_g(geom, 2.0 + delta, r2)).norm();
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev < 1e-6);
  }

  Rng rng(9);
  CHECK_THROWS_AS(make_rician_g(geom, -1.0, rng), PreconditionError);
}

TEST_CASE("path_gain", "[channel]") {
  const PathLossModel m;
  CHECK_THAT(path_gain(m, 1.0), WithinRel(1e-3, 1e-14));
  CHECK_THAT(path_gain(m, 10.0), WithinRel(1e-6, 1e-14));
  const PathLossModel sq{-30.0, 2.0};
  CHECK_THAT(path_gain(sq, 2.0) * 4.0, WithinRel(path_gain(sq, 1.0), 1e-14));
  CHECK_THROWS_AS(path_gain(m, 0.5), DomainError);
  double prev = path_gain(m, 1.0);
  for (double d = 1.5; d < 500.0; d *= 1.3) {
    const double g = path_gain(m, d);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("sample_channels", "[channel]") {
  ScenarioConfig cfg;
  Rng r1(42);
  Rng r2(42);
  const ChannelSet a = sample_channels(cfg, r1);
  const ChannelSet b = sample_channels(cfg, r2);
  CHECK(a.h_r == b.h_r);
  CHECK(a.h_e == b.h_e);
  CHECK(a.g() == b.g());
  CHECK(a.alpha_r == b.alpha_r);
  CHECK_FALSE(a.is_rank_one());
  CHECK(a.antennas() == 8);
  CHECK(a.elements() == 8);
  CHECK_NOTHROW(a.check_dimensions());

  CHECK_THAT(a.alpha_r, WithinRel(path_gain(cfg.path_loss_user,
                                             distance(cfg.irs_position, cfg.user_position)),
                                   1e-15));
  CHECK_THAT(a.alpha_e, WithinRel(path_gain(cfg.path_loss_eve,
                                             distance(cfg.irs_position, cfg.eve_position)),
                                   1e-15));

  cfg.channel_model = ChannelModel::RankOne;
  Rng r3(42);
  CHECK(sample_channels(cfg, r3).is_rank_one());

  Rng rng(43);
  double acc = 0.0;
  for (int d = 0; d < 10000; ++d) acc += sample_channels(cfg, rng).h_r.squaredNorm();
  CHECK_THAT(acc / 10000, WithinRel(8.0, 0.02));

  cfg.user_position = cfg.irs_position;
  CHECK_THROWS_AS(sample_channels(cfg, rng), DomainError);
}

TEST_CASE("ChannelSet dimension checks", "[channel]") {
  ChannelSet ch;
  ch.ap_irs = ComplexMatrix::Ones(4, 3);
  ch.h_r = ComplexVector::Ones(3);
  ch.h_e = ComplexVector::Ones(2);
  CHECK_THROWS_AS(ch.check_dimensions(), DimensionMismatch);
  ch.h_e = ComplexVector::Ones(3);
  CHECK_NOTHROW(ch.check_dimensions());
  ch.alpha_e = -1.0;
  CHECK_THROWS_AS(ch.check_dimensions(), DimensionMismatch);
}
