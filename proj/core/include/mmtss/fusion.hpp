// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_FUSION_HPP_
#define MMTSS_FUSION_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "mmtss/embedding.hpp"
#include "mmtss/spatial_features.hpp"

namespace mmtss {

// Subspace attention: the acoustic stream is projected into H subspaces
// and recombined with softmax weights predicted from another modality.
struct FactorizedAttentionParams {
  std::vector<Eigen::MatrixXd> subspace_weights;  // H matrices [E x P]
  Eigen::MatrixXd modality_projection;            // [D_mod x H]

  int subspace_count() const { return static_cast<int>(subspace_weights.size()); }
  Eigen::Index acoustic_dim() const {
    return subspace_weights.empty() ? 0 : subspace_weights.front().rows();
  }
  Eigen::Index subspace_dim() const {
    return subspace_weights.empty() ? 0 : subspace_weights.front().cols();
  }
  Eigen::Index modality_dim() const { return modality_projection.rows(); }
  void validate() const;

  static FactorizedAttentionParams random(uint64_t seed, Eigen::Index acoustic_dim,
                                          Eigen::Index modality_dim, int subspaces,
                                          Eigen::Index subspace_dim, double scale = 0.1);
};

struct FactorizedAttentionOutput {
  Eigen::MatrixXd fused;    // [T x P], sigmoid range (0, 1)
  Eigen::MatrixXd weights;  // [T x H], rows on the simplex
};

// fused_t = sigmoid(sum_h softmax(mod_t W_mod)_h * (A_t W_a^h)).
FactorizedAttentionOutput factorized_attention_forward(
    const Eigen::MatrixXd& acoustic, const Eigen::MatrixXd& modality,
    const FactorizedAttentionParams& params);

struct FactorizedAttentionGrads {
  Eigen::MatrixXd acoustic;                 // [T x E]
  Eigen::MatrixXd modality;                 // [T x D_mod]
  std::vector<Eigen::MatrixXd> subspace_weights;  // H x [E x P]
  Eigen::MatrixXd modality_projection;      // [D_mod x H]
};

// Analytic gradients of <upstream, fused> w.r.t. every input and
// parameter; verified against central finite differences.
FactorizedAttentionGrads factorized_attention_grad(const Eigen::MatrixXd& acoustic,
                                                   const Eigen::MatrixXd& modality,
                                                   const FactorizedAttentionParams& params,
                                                   const Eigen::MatrixXd& upstream);

// att(ad) = 2 * max(sigma(ad) - 0.5, 0), sigma(ad) = 1/(1+exp(-w(ad-b))).
struct RuleAttentionParams {
  double w = -0.5;
  double b = 10.0;  // degrees
};

// A missing angle difference (single-speaker scene) yields weight 1: no
// interferer means the spatial features are fully trusted.
double rule_attention_weight(std::optional<double> angle_difference_deg,
                             const RuleAttentionParams& params = {});

// Scales IPD and DF rows by `weight`; LPS is never touched. Accepts
// either a single feature map or the stacked [(2+M)*F x T] matrix.
FeatureMap apply_feature_gate(const FeatureMap& features, double weight);
Eigen::MatrixXd apply_feature_gate_stacked(const Eigen::MatrixXd& stacked, int freq_bins,
                                           double weight);

// Trimodal compositions. concat(A, V, S); concat(fac_att(A, S), V); and
// fac_att over the output of fac_att (the staged variant runs caller-
// provided frame transforms between the two stages).
Eigen::MatrixXd trimodal_concat(const Eigen::MatrixXd& acoustic, const Eigen::MatrixXd& lip,
                                const Eigen::MatrixXd& speaker);
Eigen::MatrixXd trimodal_facatt_concat(const Eigen::MatrixXd& acoustic,
                                       const Eigen::MatrixXd& lip,
                                       const Eigen::MatrixXd& speaker,
                                       const FactorizedAttentionParams& audio_speaker);
Eigen::MatrixXd trimodal_facatt_facatt(const Eigen::MatrixXd& acoustic,
                                       const Eigen::MatrixXd& lip,
                                       const Eigen::MatrixXd& speaker,
                                       const FactorizedAttentionParams& audio_speaker,
                                       const FactorizedAttentionParams& audio_visual,
                                       const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>&
                                           between_stages);

// MMTS tensors plus a JSON descriptor naming each weight.
void save_attention_params(const std::filesystem::path& dir,
                           const FactorizedAttentionParams& params);
FactorizedAttentionParams load_attention_params(const std::filesystem::path& dir);

}  // namespace mmtss

#endif  // MMTSS_FUSION_HPP_
