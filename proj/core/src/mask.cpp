// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/mask.hpp"

#include "mmtss/errors.hpp"

namespace mmtss {

namespace {
constexpr double kMaskEpsilon = 1e-8;
}

Eigen::MatrixXd oracle_irm(const Eigen::MatrixXcd& target,
                           const std::vector<Eigen::MatrixXcd>& others) {
  Eigen::MatrixXd denom = target.cwiseAbs();
  const Eigen::MatrixXd numer = denom;
  for (const auto& o : others) {
    if (o.rows() != target.rows() || o.cols() != target.cols()) {
      throw ValidationError("oracle_irm: spectra shapes disagree");
    }
    denom += o.cwiseAbs();
  }
  return numer.array() / (denom.array() + kMaskEpsilon);
}

Eigen::MatrixXcd apply_mask(const Eigen::MatrixXcd& mixture_ref, const Eigen::MatrixXd& mask) {
  if (mask.rows() != mixture_ref.rows() || mask.cols() != mixture_ref.cols()) {
    throw ValidationError("apply_mask: shape mismatch");
  }
  if (!mask.allFinite()) throw ValidationError("apply_mask: non-finite mask");
  if ((mask.array() < 0.0).any()) throw ValidationError("apply_mask: negative mask value");
  return mixture_ref.cwiseProduct(mask.cast<std::complex<double>>());
}

Eigen::MatrixXd mask_head(const Eigen::MatrixXd& fused, const Eigen::MatrixXd& head_weights) {
  if (fused.cols() != head_weights.rows()) {
    throw ValidationError("mask_head: dimension mismatch");
  }
  if (!fused.allFinite() || !head_weights.allFinite()) {
    throw ValidationError("mask_head: non-finite inputs");
  }
  return (fused * head_weights).cwiseMax(0.0);
}

}  // namespace mmtss
