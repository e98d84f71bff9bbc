// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/fusion.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mmtss/errors.hpp"
#include "mmtss/prng.hpp"
#include "mmtss/tensor_io.hpp"

namespace mmtss {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Eigen::VectorXd softmax_row(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - m).exp();
  return e / e.sum();
}

}  // namespace

void FactorizedAttentionParams::validate() const {
  if (subspace_weights.empty()) throw ValidationError("fac-att: needs H >= 1 subspaces");
  const Eigen::Index e = subspace_weights.front().rows();
  const Eigen::Index p = subspace_weights.front().cols();
  for (const auto& w : subspace_weights) {
    if (w.rows() != e || w.cols() != p) {
      throw ValidationError("fac-att: subspace weight shapes disagree");
    }
    if (!w.allFinite()) throw ValidationError("fac-att: non-finite subspace weight");
  }
  if (modality_projection.cols() != subspace_count()) {
    throw ValidationError("fac-att: modality projection must have H columns");
  }
  if (!modality_projection.allFinite()) {
    throw ValidationError("fac-att: non-finite modality projection");
  }
}

FactorizedAttentionParams FactorizedAttentionParams::random(uint64_t seed,
                                                            Eigen::Index acoustic_dim,
                                                            Eigen::Index modality_dim,
                                                            int subspaces,
                                                            Eigen::Index subspace_dim,
                                                            double scale) {
  Prng rng(seed, 0x66616374);  // "fact"
  FactorizedAttentionParams params;
  params.subspace_weights.reserve(static_cast<size_t>(subspaces));
  for (int h = 0; h < subspaces; ++h) {
    Eigen::MatrixXd w(acoustic_dim, subspace_dim);
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = scale * rng.normal();
    }
    params.subspace_weights.push_back(std::move(w));
  }
  params.modality_projection.resize(modality_dim, subspaces);
  for (Eigen::Index i = 0; i < modality_dim; ++i) {
    for (int h = 0; h < subspaces; ++h) params.modality_projection(i, h) = scale * rng.normal();
  }
  params.validate();
  return params;
}

FactorizedAttentionOutput factorized_attention_forward(
    const Eigen::MatrixXd& acoustic, const Eigen::MatrixXd& modality,
    const FactorizedAttentionParams& params) {
  params.validate();
  if (!acoustic.allFinite() || !modality.allFinite()) {
    throw ValidationError("fac-att: non-finite inputs");
  }
  const Eigen::Index T = acoustic.rows();
  if (modality.rows() != T) throw ValidationError("fac-att: frame counts differ");
  if (acoustic.cols() != params.acoustic_dim()) {
    throw ValidationError("fac-att: acoustic dimension mismatch");
  }
  if (modality.cols() != params.modality_dim()) {
    throw ValidationError("fac-att: modality dimension mismatch");
  }

  const int H = params.subspace_count();
  const Eigen::Index P = params.subspace_dim();

  FactorizedAttentionOutput out;
  out.weights.resize(T, H);
  const Eigen::MatrixXd logits = modality * params.modality_projection;  // [T x H]
  for (Eigen::Index t = 0; t < T; ++t) {
    out.weights.row(t) = softmax_row(logits.row(t).transpose()).transpose();
  }

  Eigen::MatrixXd pre = Eigen::MatrixXd::Zero(T, P);
  for (int h = 0; h < H; ++h) {
    const Eigen::MatrixXd sub = acoustic * params.subspace_weights[static_cast<size_t>(h)];
    pre.array() += sub.array().colwise() * out.weights.col(h).array();
  }
  out.fused = pre.unaryExpr([](double v) { return sigmoid(v); });
  return out;
}

FactorizedAttentionGrads factorized_attention_grad(const Eigen::MatrixXd& acoustic,
                                                   const Eigen::MatrixXd& modality,
                                                   const FactorizedAttentionParams& params,
                                                   const Eigen::MatrixXd& upstream) {
  const FactorizedAttentionOutput fwd =
      factorized_attention_forward(acoustic, modality, params);
  if (upstream.rows() != fwd.fused.rows() || upstream.cols() != fwd.fused.cols()) {
    throw ValidationError("fac-att grad: upstream shape mismatch");
  }

  const Eigen::Index T = acoustic.rows();
  const int H = params.subspace_count();

  // d loss / d pre-activation
  const Eigen::MatrixXd dz =
      upstream.array() * fwd.fused.array() * (1.0 - fwd.fused.array());

  FactorizedAttentionGrads grads;
  grads.acoustic = Eigen::MatrixXd::Zero(acoustic.rows(), acoustic.cols());
  grads.subspace_weights.assign(
      static_cast<size_t>(H),
      Eigen::MatrixXd::Zero(params.acoustic_dim(), params.subspace_dim()));

  // g(t, h) = <dz_t, a_t^h> feeds the softmax backward pass.
  Eigen::MatrixXd g(T, H);
  for (int h = 0; h < H; ++h) {
    const Eigen::MatrixXd& w = params.subspace_weights[static_cast<size_t>(h)];
    const Eigen::MatrixXd sub = acoustic * w;                        // [T x P]
    g.col(h) = (dz.array() * sub.array()).rowwise().sum();
    const Eigen::MatrixXd weighted_dz =
        dz.array().colwise() * fwd.weights.col(h).array();           // [T x P]
    grads.subspace_weights[static_cast<size_t>(h)] = acoustic.transpose() * weighted_dz;
    grads.acoustic += weighted_dz * w.transpose();
  }

  // Softmax Jacobian: dl(t,h) = v_th * (g_th - sum_h' v_th' g_th').
  const Eigen::VectorXd dot = (g.array() * fwd.weights.array()).rowwise().sum();
  const Eigen::MatrixXd dlogits =
      fwd.weights.array() * (g.array().colwise() - dot.array());

  grads.modality_projection = modality.transpose() * dlogits;
  grads.modality = dlogits * params.modality_projection.transpose();
  return grads;
}

double rule_attention_weight(std::optional<double> angle_difference_deg,
                             const RuleAttentionParams& params) {
  if (!std::isfinite(params.w) || !std::isfinite(params.b)) {
    throw ValidationError("rule gate: non-finite parameters");
  }
  if (!angle_difference_deg) return 1.0;
  const double ad = *angle_difference_deg;
  if (!std::isfinite(ad)) throw ValidationError("rule gate: non-finite angle difference");
  const double sig = 1.0 / (1.0 + std::exp(-params.w * (ad - params.b)));
  return 2.0 * std::max(sig - 0.5, 0.0);
}

FeatureMap apply_feature_gate(const FeatureMap& features, double weight) {
  features.validate();
  if (weight < 0.0 || weight > 1.0) throw ValidationError("gate: weight must be in [0, 1]");
  if (features.kind == FeatureKind::kLps) return features;
  FeatureMap out = features;
  for (auto& plane : out.planes) plane *= weight;
  return out;
}

Eigen::MatrixXd apply_feature_gate_stacked(const Eigen::MatrixXd& stacked, int freq_bins,
                                           double weight) {
  if (weight < 0.0 || weight > 1.0) throw ValidationError("gate: weight must be in [0, 1]");
  if (freq_bins < 1 || stacked.rows() % freq_bins != 0 || stacked.rows() / freq_bins < 2) {
    throw ValidationError("gate: stacked matrix rows must be a multiple of F, >= 2F");
  }
  Eigen::MatrixXd out = stacked;
  out.bottomRows(stacked.rows() - freq_bins) *= weight;  // all but the LPS block
  return out;
}

Eigen::MatrixXd trimodal_concat(const Eigen::MatrixXd& acoustic, const Eigen::MatrixXd& lip,
                                const Eigen::MatrixXd& speaker) {
  if (acoustic.rows() != lip.rows() || acoustic.rows() != speaker.rows()) {
    throw ValidationError("trimodal: frame counts differ");
  }
  Eigen::MatrixXd out(acoustic.rows(), acoustic.cols() + lip.cols() + speaker.cols());
  out << acoustic, lip, speaker;
  return out;
}

Eigen::MatrixXd trimodal_facatt_concat(const Eigen::MatrixXd& acoustic,
                                       const Eigen::MatrixXd& lip,
                                       const Eigen::MatrixXd& speaker,
                                       const FactorizedAttentionParams& audio_speaker) {
  const auto ase = factorized_attention_forward(acoustic, speaker, audio_speaker);
  if (lip.rows() != ase.fused.rows()) throw ValidationError("trimodal: frame counts differ");
  Eigen::MatrixXd out(ase.fused.rows(), ase.fused.cols() + lip.cols());
  out << ase.fused, lip;
  return out;
}

Eigen::MatrixXd trimodal_facatt_facatt(
    const Eigen::MatrixXd& acoustic, const Eigen::MatrixXd& lip,
    const Eigen::MatrixXd& speaker, const FactorizedAttentionParams& audio_speaker,
    const FactorizedAttentionParams& audio_visual,
    const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& between_stages) {
  const auto ase = factorized_attention_forward(acoustic, speaker, audio_speaker);
  const Eigen::MatrixXd mid = between_stages ? between_stages(ase.fused) : ase.fused;
  return factorized_attention_forward(mid, lip, audio_visual).fused;
}

void save_attention_params(const std::filesystem::path& dir,
                           const FactorizedAttentionParams& params) {
  params.validate();
  std::filesystem::create_directories(dir);
  nlohmann::json desc;
  desc["subspaces"] = params.subspace_count();
  desc["acoustic_dim"] = params.acoustic_dim();
  desc["subspace_dim"] = params.subspace_dim();
  desc["modality_dim"] = params.modality_dim();
  nlohmann::json weights = nlohmann::json::array();
  for (int h = 0; h < params.subspace_count(); ++h) {
    const std::string name = "subspace_weight_" + std::to_string(h) + ".mmts";
    write_tensor(dir / name, tensor_from_matrix(params.subspace_weights[static_cast<size_t>(h)]));
    weights.push_back(name);
  }
  desc["subspace_weights"] = weights;
  desc["modality_projection"] = "modality_projection.mmts";
  write_tensor(dir / "modality_projection.mmts",
               tensor_from_matrix(params.modality_projection));
  std::ofstream out(dir / "params.json", std::ios::trunc);
  if (!out) throw IoError("cannot write params descriptor in " + dir.string());
  out << desc.dump(2) << "\n";
}

FactorizedAttentionParams load_attention_params(const std::filesystem::path& dir) {
  std::ifstream in(dir / "params.json");
  if (!in) throw IoError("cannot read params descriptor in " + dir.string());
  nlohmann::json desc;
  try {
    in >> desc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("params descriptor: ") + e.what());
  }
  FactorizedAttentionParams params;
  for (const auto& name : desc.at("subspace_weights")) {
    params.subspace_weights.push_back(
        matrix_from_tensor(read_tensor(dir / name.get<std::string>())));
  }
  params.modality_projection = matrix_from_tensor(
      read_tensor(dir / desc.at("modality_projection").get<std::string>()));
  params.validate();
  return params;
}

}  // namespace mmtss
