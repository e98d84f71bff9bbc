// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cstdio>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "mmtss/embedding.hpp"
#include "mmtss/fusion.hpp"
#include "mmtss/gradcheck.hpp"
#include "mmtss/prng.hpp"

namespace mmtss::cli {

namespace {

// Forward pass from serialized parameters with synthetic embeddings at
// the canonical stream dimensions.
nlohmann::json smoke_forward(const std::string& params_dir, uint64_t seed) {
  const auto params = load_attention_params(params_dir);
  const Eigen::Index T = 40;

  Prng rng(seed, 0x736d6f6b);
  Eigen::MatrixXd acoustic(T, params.acoustic_dim());
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index d = 0; d < acoustic.cols(); ++d) acoustic(t, d) = 0.5 * rng.normal();
  }

  Eigen::MatrixXd modality(T, params.modality_dim());
  if (params.modality_dim() == canonical_embedding_dim(EmbeddingKind::kSpeaker)) {
    EmbeddingSequence spk;
    spk.kind = EmbeddingKind::kSpeaker;
    spk.values.resize(1, params.modality_dim());
    for (Eigen::Index d = 0; d < spk.values.cols(); ++d) spk.values(0, d) = rng.normal();
    modality = tile_speaker(spk, T).values;
  } else {
    const auto lip = make_clustered_embeddings(seed, T / 2, params.modality_dim(), 6, 0.1, 25.0);
    modality = upsample_nearest(lip, T).values;
  }

  const auto out = factorized_attention_forward(acoustic, modality, params);
  nlohmann::json j;
  j["frames"] = T;
  j["fused_dim"] = out.fused.cols();
  j["fused_min"] = out.fused.minCoeff();
  j["fused_max"] = out.fused.maxCoeff();
  j["weight_row_sum_error"] =
      (out.weights.rowwise().sum().array() - 1.0).abs().maxCoeff();
  return j;
}

}  // namespace

int cmd_fusion_check(const FusionCheckArgs& args) {
  FusionCheckOptions options;
  options.seed = args.seed;
  options.instances = args.count;
  options.inject_fault = args.inject_fault;

  const FusionCheckResult result = run_fusion_checks(options);

  nlohmann::json smoke;
  if (!args.params_dir.empty()) smoke = smoke_forward(args.params_dir, args.seed);

  if (args.json) {
    nlohmann::json j;
    j["passed"] = result.passed;
    j["max_grad_rel_error"] = result.max_grad_rel_error;
    j["max_simplex_error"] = result.max_simplex_error;
    j["hand_example_error"] = result.hand_example_error;
    j["checks"] = result.check_lines;
    if (!smoke.is_null()) j["smoke_forward"] = smoke;
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    for (const auto& line : result.check_lines) std::printf("%s\n", line.c_str());
    std::printf("max gradient relative error: %.3e\n", result.max_grad_rel_error);
    if (!smoke.is_null()) std::printf("smoke forward: %s\n", smoke.dump().c_str());
    std::printf(result.passed ? "all fusion checks passed\n"
                              : "FUSION CHECKS FAILED\n");
  }
  return result.passed ? 0 : 1;
}

}  // namespace mmtss::cli
