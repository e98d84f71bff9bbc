// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mmtss/errors.hpp"
#include "mmtss/mask.hpp"
#include "support.hpp"

using namespace mmtss;

namespace {

Eigen::MatrixXcd random_spec(uint64_t seed, Eigen::Index t, Eigen::Index f) {
  Prng rng(seed);
  Eigen::MatrixXcd m(t, f);
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = 0; j < f; ++j) m(i, j) = {rng.normal(), rng.normal()};
  }
  return m;
}

}  // namespace

TEST_CASE("oracle irm") {
  SUBCASE("no interferers gives a mask of ones") {
    const auto target = random_spec(1, 4, 9);
    const auto mask = oracle_irm(target, {});
    CHECK(mask.minCoeff() >= 0.999);
    CHECK(mask.maxCoeff() <= 1.0);
  }

  SUBCASE("equal magnitudes give one half") {
    const auto target = random_spec(2, 4, 9);
    Eigen::MatrixXcd other = target * std::complex<double>(0.0, 1.0);  // same magnitude
    const auto mask = oracle_irm(target, {other});
    CHECK(mask.minCoeff() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(mask.maxCoeff() == doctest::Approx(0.5).epsilon(1e-6));
  }

  SUBCASE("range is always [0, 1]") {
    const auto mask = oracle_irm(random_spec(3, 6, 17), {random_spec(4, 6, 17),
                                                         random_spec(5, 6, 17)});
    CHECK(mask.minCoeff() >= 0.0);
    CHECK(mask.maxCoeff() <= 1.0);
  }

  SUBCASE("shape mismatch rejected") {
    CHECK_THROWS_AS(oracle_irm(random_spec(6, 4, 9), {random_spec(7, 4, 8)}),
                    ValidationError);
  }
}

TEST_CASE("apply mask") {
  const auto spec = random_spec(8, 5, 11);

  SUBCASE("ones mask is the identity") {
    CHECK(apply_mask(spec, Eigen::MatrixXd::Ones(5, 11)) == spec);
  }

  SUBCASE("zeros mask silences everything") {
    CHECK(apply_mask(spec, Eigen::MatrixXd::Zero(5, 11)).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("phase is preserved") {
    Eigen::MatrixXd mask = Eigen::MatrixXd::Constant(5, 11, 0.37);
    const auto out = apply_mask(spec, mask);
    for (Eigen::Index t = 0; t < 5; ++t) {
      for (Eigen::Index f = 0; f < 11; ++f) {
        CHECK(std::arg(out(t, f)) == doctest::Approx(std::arg(spec(t, f))).epsilon(1e-12));
      }
    }
  }

  SUBCASE("negative mask rejected") {
    Eigen::MatrixXd mask = Eigen::MatrixXd::Ones(5, 11);
    mask(2, 3) = -0.1;
    CHECK_THROWS_AS(apply_mask(spec, mask), ValidationError);
  }
}

TEST_CASE("mask head") {
  SUBCASE("zero weights give a zero mask") {
    const auto mask = mask_head(testing::random_matrix(9, 7, 12), Eigen::MatrixXd::Zero(12, 5));
    CHECK(mask.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("identity-like weights pass non-negative input through") {
    Eigen::MatrixXd fused = testing::random_matrix(10, 4, 6).cwiseAbs();
    const auto mask = mask_head(fused, Eigen::MatrixXd::Identity(6, 6));
    CHECK((mask - fused).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("output is never negative") {
    const auto mask =
        mask_head(testing::random_matrix(11, 9, 8, 2.0), testing::random_matrix(12, 8, 10, 2.0));
    CHECK(mask.minCoeff() >= 0.0);
  }
}
