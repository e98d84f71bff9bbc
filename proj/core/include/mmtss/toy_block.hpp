// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_TOY_BLOCK_HPP_
#define MMTSS_TOY_BLOCK_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace mmtss {

// Shape-preserving residual conv block: pointwise linear, PReLU,
// per-feature normalization over time, depthwise temporal convolution
// (kernel 3, zero padded), PReLU, normalization, pointwise linear, plus
// the input.
struct ToyBlockParams {
  Eigen::MatrixXd in_proj;    // [C x C_hidden]
  Eigen::MatrixXd depthwise;  // [C_hidden x 3] taps per hidden channel
  Eigen::MatrixXd out_proj;   // [C_hidden x C]
  double prelu1 = 0.25;       // negative-side slope
  double prelu2 = 0.25;
  bool normalize = true;      // normalization can be switched off to
                              // expose the pure conv topology

  void validate() const;
  static ToyBlockParams random(uint64_t seed, Eigen::Index channels,
                               Eigen::Index hidden, double scale = 0.3);
  static ToyBlockParams zero(Eigen::Index channels, Eigen::Index hidden);
};

Eigen::MatrixXd toy_block_forward(const Eigen::MatrixXd& emb, const ToyBlockParams& params,
                                  int dilation);

// A repeat of blocks with dilations 2^0 .. 2^(n-1); eight blocks span a
// receptive field of 1 + 2*(2^8 - 1) = 511 frames.
Eigen::MatrixXd toy_block_stack_forward(const Eigen::MatrixXd& emb,
                                        const std::vector<ToyBlockParams>& blocks);

}  // namespace mmtss

#endif  // MMTSS_TOY_BLOCK_HPP_
