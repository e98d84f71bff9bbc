// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_MASK_HPP_
#define MMTSS_MASK_HPP_

#include <vector>

#include <Eigen/Core>

namespace mmtss {

// Ideal ratio mask from aligned reference spectra:
// |S_target| / (|S_target| + sum |S_other| + 1e-8). The oracle stand-in
// for a trained mask estimator.
Eigen::MatrixXd oracle_irm(const Eigen::MatrixXcd& target,
                           const std::vector<Eigen::MatrixXcd>& others);

// Elementwise product with a non-negative real mask; the mixture phase
// is preserved.
Eigen::MatrixXcd apply_mask(const Eigen::MatrixXcd& mixture_ref, const Eigen::MatrixXd& mask);

// mask = relu(fused * head_weights): the 1x1-conv + ReLU output layer.
Eigen::MatrixXd mask_head(const Eigen::MatrixXd& fused, const Eigen::MatrixXd& head_weights);

}  // namespace mmtss

#endif  // MMTSS_MASK_HPP_
