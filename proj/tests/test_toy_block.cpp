// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mmtss/errors.hpp"
#include "mmtss/toy_block.hpp"
#include "support.hpp"

using namespace mmtss;

TEST_CASE("zero parameters reduce to the residual path") {
  const auto params = ToyBlockParams::zero(6, 8);
  const auto input = testing::random_matrix(1, 20, 6);
  CHECK(toy_block_forward(input, params, 4) == input);
}

TEST_CASE("shape is preserved for every dilation") {
  const auto params = ToyBlockParams::random(2, 5, 7);
  const auto input = testing::random_matrix(3, 33, 5);
  for (int dilation : {1, 2, 4, 8, 16, 32, 64, 128}) {
    const auto out = toy_block_forward(input, params, dilation);
    CHECK(out.rows() == 33);
    CHECK(out.cols() == 5);
    CHECK(out.allFinite());
  }
}

TEST_CASE("eight stacked blocks span a 511 frame receptive field") {
  // normalization couples all frames through the global statistics, so
  // the topology probe runs with it off
  std::vector<ToyBlockParams> blocks;
  for (uint64_t b = 0; b < 8; ++b) {
    auto p = ToyBlockParams::random(100 + b, 4, 6, 0.25);
    p.normalize = false;
    blocks.push_back(p);
  }

  const Eigen::Index T = 1200;
  const Eigen::Index probe = 600;
  const auto base = testing::random_matrix(10, T, 4);
  auto poked = base;
  poked.row(probe) += Eigen::RowVector4d(1.0, -0.5, 0.25, 0.75);

  const auto out_base = toy_block_stack_forward(base, blocks);
  const auto out_poked = toy_block_stack_forward(poked, blocks);
  const Eigen::MatrixXd diff = (out_poked - out_base).cwiseAbs();

  const Eigen::Index radius = 255;  // (511 - 1) / 2 per side
  double inside = 0.0, outside = 0.0;
  for (Eigen::Index t = 0; t < T; ++t) {
    const double row_max = diff.row(t).maxCoeff();
    if (std::abs(t - probe) <= radius) {
      inside = std::max(inside, row_max);
    } else {
      outside = std::max(outside, row_max);
    }
  }
  CHECK(inside > 0.0);
  CHECK(outside == 0.0);

  // the edge of the field is actually reached
  CHECK(diff.row(probe - radius).maxCoeff() > 0.0);
  CHECK(diff.row(probe + radius).maxCoeff() > 0.0);
}

TEST_CASE("parameter validation") {
  auto p = ToyBlockParams::random(4, 5, 7);
  SUBCASE("kernel width") {
    p.depthwise = Eigen::MatrixXd::Zero(7, 2);
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("projection shape") {
    p.out_proj = Eigen::MatrixXd::Zero(7, 6);
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("channel mismatch at call time") {
    const auto q = ToyBlockParams::random(5, 5, 7);
    CHECK_THROWS_AS(toy_block_forward(testing::random_matrix(6, 10, 4), q, 1),
                    ValidationError);
  }
  SUBCASE("dilation must be positive") {
    const auto q = ToyBlockParams::random(7, 5, 7);
    CHECK_THROWS_AS(toy_block_forward(testing::random_matrix(8, 10, 5), q, 0),
                    ValidationError);
  }
}
