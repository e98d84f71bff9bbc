// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/toy_block.hpp"

#include "mmtss/errors.hpp"
#include "mmtss/prng.hpp"

namespace mmtss {

namespace {

constexpr double kNormEpsilon = 1e-5;

Eigen::MatrixXd prelu(const Eigen::MatrixXd& x, double slope) {
  return x.unaryExpr([slope](double v) { return v >= 0.0 ? v : slope * v; });
}

// Per-feature (column) standardization over time.
Eigen::MatrixXd normalize_time(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out(x.rows(), x.cols());
  const double n = static_cast<double>(x.rows());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double mean = x.col(c).mean();
    const double var = (x.col(c).array() - mean).square().sum() / n;
    out.col(c) = (x.col(c).array() - mean) / std::sqrt(var + kNormEpsilon);
  }
  return out;
}

Eigen::MatrixXd depthwise_conv(const Eigen::MatrixXd& x, const Eigen::MatrixXd& taps,
                               int dilation) {
  // Kernel 3, symmetric zero padding of `dilation` frames keeps T fixed.
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  const Eigen::Index T = x.rows();
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index t = 0; t < T; ++t) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) {
        const Eigen::Index src = t + static_cast<Eigen::Index>((k - 1) * dilation);
        if (src >= 0 && src < T) acc += taps(c, k) * x(src, c);
      }
      out(t, c) = acc;
    }
  }
  return out;
}

}  // namespace

void ToyBlockParams::validate() const {
  if (in_proj.rows() < 1 || in_proj.cols() < 1) {
    throw ValidationError("toy block: empty input projection");
  }
  if (depthwise.rows() != in_proj.cols() || depthwise.cols() != 3) {
    throw ValidationError("toy block: depthwise kernel must be [hidden x 3]");
  }
  if (out_proj.rows() != in_proj.cols() || out_proj.cols() != in_proj.rows()) {
    throw ValidationError("toy block: output projection shape mismatch");
  }
  if (!in_proj.allFinite() || !depthwise.allFinite() || !out_proj.allFinite()) {
    throw ValidationError("toy block: non-finite parameters");
  }
}

ToyBlockParams ToyBlockParams::random(uint64_t seed, Eigen::Index channels,
                                      Eigen::Index hidden, double scale) {
  Prng rng(seed, 0x746f7962);  // "toyb"
  ToyBlockParams p;
  auto fill = [&rng, scale](Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = scale * rng.normal();
    }
  };
  p.in_proj.resize(channels, hidden);
  p.depthwise.resize(hidden, 3);
  p.out_proj.resize(hidden, channels);
  fill(p.in_proj);
  fill(p.depthwise);
  fill(p.out_proj);
  p.validate();
  return p;
}

ToyBlockParams ToyBlockParams::zero(Eigen::Index channels, Eigen::Index hidden) {
  ToyBlockParams p;
  p.in_proj = Eigen::MatrixXd::Zero(channels, hidden);
  p.depthwise = Eigen::MatrixXd::Zero(hidden, 3);
  p.out_proj = Eigen::MatrixXd::Zero(hidden, channels);
  return p;
}

Eigen::MatrixXd toy_block_forward(const Eigen::MatrixXd& emb, const ToyBlockParams& params,
                                  int dilation) {
  params.validate();
  if (dilation < 1) throw ValidationError("toy block: dilation must be >= 1");
  if (emb.cols() != params.in_proj.rows()) {
    throw ValidationError("toy block: channel count mismatch");
  }
  Eigen::MatrixXd h = emb * params.in_proj;
  h = prelu(h, params.prelu1);
  if (params.normalize) h = normalize_time(h);
  h = depthwise_conv(h, params.depthwise, dilation);
  h = prelu(h, params.prelu2);
  if (params.normalize) h = normalize_time(h);
  return emb + h * params.out_proj;
}

Eigen::MatrixXd toy_block_stack_forward(const Eigen::MatrixXd& emb,
                                        const std::vector<ToyBlockParams>& blocks) {
  Eigen::MatrixXd x = emb;
  int dilation = 1;
  for (const auto& block : blocks) {
    x = toy_block_forward(x, block, dilation);
    dilation *= 2;
  }
  return x;
}

}  // namespace mmtss
