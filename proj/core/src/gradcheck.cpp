// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/gradcheck.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Core>

#include "mmtss/errors.hpp"
#include "mmtss/fusion.hpp"
#include "mmtss/prng.hpp"

namespace mmtss {

GradCheckReport check_gradients(const std::function<double()>& loss,
                                const std::vector<GradSlot>& slots, double step) {
  if (step <= 0.0) throw ValidationError("gradcheck: step must be positive");
  GradCheckReport report;
  for (const auto& slot : slots) {
    for (size_t i = 0; i < slot.count; ++i) {
      const double orig = slot.values[i];
      slot.values[i] = orig + step;
      const double up = loss();
      slot.values[i] = orig - step;
      const double down = loss();
      slot.values[i] = orig;

      const double fd = (up - down) / (2.0 * step);
      const double an = slot.analytic[i];
      const double abs_err = std::abs(fd - an);
      const double rel_err = abs_err / std::max({std::abs(fd), std::abs(an), 1e-3});
      if (rel_err > report.max_rel_error) {
        report.max_rel_error = rel_err;
        report.worst_slot = slot.name;
        report.worst_index = i;
      }
      report.max_abs_error = std::max(report.max_abs_error, abs_err);
    }
  }
  return report;
}

namespace {

void fill_random(Eigen::MatrixXd& m, Prng& rng, double scale) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = scale * rng.normal();
  }
}

struct CheckContext {
  FusionCheckResult& result;
  double tolerance;

  void pass(const std::string& line) { result.check_lines.push_back("ok   " + line); }
  void fail(const std::string& line) {
    result.check_lines.push_back("FAIL " + line);
    result.failures.push_back(line);
  }
  void expect(bool ok, const std::string& line) { ok ? pass(line) : fail(line); }
};

void check_gradients_over_instances(const FusionCheckOptions& options, CheckContext& ctx) {
  double worst = 0.0;
  std::string worst_desc;
  for (int inst = 0; inst < options.instances; ++inst) {
    Prng rng(options.seed, static_cast<uint64_t>(inst) + 1);
    const auto T = static_cast<Eigen::Index>(1 + rng.uniform_int(4));
    const auto E = static_cast<Eigen::Index>(2 + rng.uniform_int(5));
    const int H = static_cast<int>(1 + rng.uniform_int(4));
    const auto P = static_cast<Eigen::Index>(1 + rng.uniform_int(4));
    const auto D = static_cast<Eigen::Index>(2 + rng.uniform_int(4));

    Eigen::MatrixXd acoustic(T, E), modality(T, D), upstream(T, P);
    fill_random(acoustic, rng, 0.8);
    fill_random(modality, rng, 0.8);
    fill_random(upstream, rng, 1.0);
    FactorizedAttentionParams params =
        FactorizedAttentionParams::random(rng.next_u64(), E, D, H, P, 0.5);

    FactorizedAttentionGrads grads =
        factorized_attention_grad(acoustic, modality, params, upstream);
    if (options.inject_fault && inst == 0) {
      grads.acoustic(0, 0) += 0.5;
    }

    const auto loss = [&]() {
      const auto out = factorized_attention_forward(acoustic, modality, params);
      return (upstream.array() * out.fused.array()).sum();
    };

    std::vector<GradSlot> slots;
    slots.push_back({"acoustic", acoustic.data(), grads.acoustic.data(),
                     static_cast<size_t>(acoustic.size())});
    slots.push_back({"modality", modality.data(), grads.modality.data(),
                     static_cast<size_t>(modality.size())});
    for (int h = 0; h < H; ++h) {
      slots.push_back({"subspace_weight_" + std::to_string(h),
                       params.subspace_weights[static_cast<size_t>(h)].data(),
                       grads.subspace_weights[static_cast<size_t>(h)].data(),
                       static_cast<size_t>(params.subspace_weights[static_cast<size_t>(h)].size())});
    }
    slots.push_back({"modality_projection", params.modality_projection.data(),
                     grads.modality_projection.data(),
                     static_cast<size_t>(params.modality_projection.size())});

    const GradCheckReport report = check_gradients(loss, slots, options.step);
    if (report.max_rel_error > worst) {
      worst = report.max_rel_error;
      worst_desc = "instance " + std::to_string(inst) + " slot " + report.worst_slot;
    }
  }
  ctx.result.max_grad_rel_error = worst;
  char line[160];
  std::snprintf(line, sizeof(line),
                "finite-difference gradients over %d instances: max rel error %.3e (%s)",
                options.instances, worst, worst_desc.c_str());
  ctx.expect(worst <= ctx.tolerance, line);
}

void check_simplex_and_range(const FusionCheckOptions& options, CheckContext& ctx) {
  double worst_simplex = 0.0;
  bool range_ok = true;
  for (int inst = 0; inst < 20; ++inst) {
    Prng rng(options.seed, 0x1000 + static_cast<uint64_t>(inst));
    const auto T = static_cast<Eigen::Index>(1 + rng.uniform_int(6));
    Eigen::MatrixXd acoustic(T, 5), modality(T, 3);
    fill_random(acoustic, rng, 2.0);
    fill_random(modality, rng, 2.0);
    const auto params = FactorizedAttentionParams::random(rng.next_u64(), 5, 3, 4, 3, 1.0);
    const auto out = factorized_attention_forward(acoustic, modality, params);
    for (Eigen::Index t = 0; t < T; ++t) {
      worst_simplex = std::max(worst_simplex, std::abs(out.weights.row(t).sum() - 1.0));
      if (out.weights.row(t).minCoeff() < 0.0) range_ok = false;
    }
    if (out.fused.minCoeff() <= 0.0 || out.fused.maxCoeff() >= 1.0) range_ok = false;
  }
  ctx.result.max_simplex_error = worst_simplex;
  char line[160];
  std::snprintf(line, sizeof(line),
                "softmax simplex and sigmoid range: max |row sum - 1| = %.3e", worst_simplex);
  ctx.expect(worst_simplex <= 1e-12 && range_ok, line);
}

void check_hand_example(CheckContext& ctx) {
  // T=1, E=2, H=2, P=1: subspace values [1, 0], logits [ln 3, 0] give
  // weights [0.75, 0.25] and fused sigmoid(0.75).
  FactorizedAttentionParams params;
  params.subspace_weights = {Eigen::MatrixXd(2, 1), Eigen::MatrixXd(2, 1)};
  params.subspace_weights[0] << 1.0, 0.0;
  params.subspace_weights[1] << 0.0, 1.0;
  params.modality_projection.resize(1, 2);
  params.modality_projection << std::log(3.0), 0.0;

  Eigen::MatrixXd acoustic(1, 2), modality(1, 1);
  acoustic << 1.0, 0.0;
  modality << 1.0;

  const auto out = factorized_attention_forward(acoustic, modality, params);
  const double expected = 1.0 / (1.0 + std::exp(-0.75));
  ctx.result.hand_example_error = std::abs(out.fused(0, 0) - expected);
  const double weight_err = std::max(std::abs(out.weights(0, 0) - 0.75),
                                     std::abs(out.weights(0, 1) - 0.25));
  char line[160];
  std::snprintf(line, sizeof(line),
                "hand example fused=%.10f (expected sigmoid(0.75), error %.3e)",
                out.fused(0, 0), ctx.result.hand_example_error);
  ctx.expect(ctx.result.hand_example_error <= 1e-9 && weight_err <= 1e-12, line);
}

void check_degenerate_configs(const FusionCheckOptions& options, CheckContext& ctx) {
  Prng rng(options.seed, 0x2000);
  Eigen::MatrixXd acoustic(3, 4), modality(3, 2);
  fill_random(acoustic, rng, 1.0);
  fill_random(modality, rng, 1.0);

  // H = 1 forces weight 1 regardless of the modality.
  auto single = FactorizedAttentionParams::random(rng.next_u64(), 4, 2, 1, 3, 0.7);
  const auto out1 = factorized_attention_forward(acoustic, modality, single);
  const Eigen::MatrixXd expected1 =
      (acoustic * single.subspace_weights[0]).unaryExpr([](double v) {
        return 1.0 / (1.0 + std::exp(-v));
      });
  const bool h1_ok = (out1.weights.array() - 1.0).abs().maxCoeff() <= 1e-15 &&
                     (out1.fused - expected1).cwiseAbs().maxCoeff() <= 1e-15;
  ctx.expect(h1_ok, "H=1 degenerates to a plain sigmoid projection");

  // Zero modality projection gives uniform weights 1/H.
  auto uniform = FactorizedAttentionParams::random(rng.next_u64(), 4, 2, 5, 3, 0.7);
  uniform.modality_projection.setZero();
  const auto out2 = factorized_attention_forward(acoustic, modality, uniform);
  ctx.expect((out2.weights.array() - 0.2).abs().maxCoeff() <= 1e-15,
             "zero modality projection yields uniform 1/H weights");

  // Permuting frames permutes outputs identically (no cross-time mixing).
  std::vector<Eigen::Index> perm = {2, 0, 1};
  Eigen::MatrixXd pa(3, 4), pm(3, 2);
  for (Eigen::Index i = 0; i < 3; ++i) {
    pa.row(i) = acoustic.row(perm[static_cast<size_t>(i)]);
    pm.row(i) = modality.row(perm[static_cast<size_t>(i)]);
  }
  const auto base = factorized_attention_forward(acoustic, modality, uniform);
  const auto permuted = factorized_attention_forward(pa, pm, uniform);
  bool perm_ok = true;
  for (Eigen::Index i = 0; i < 3; ++i) {
    perm_ok = perm_ok &&
              (permuted.fused.row(i) - base.fused.row(perm[static_cast<size_t>(i)])).norm() == 0.0;
  }
  ctx.expect(perm_ok, "time-permutation equivariance");
}

void check_rule_gate(CheckContext& ctx) {
  const RuleAttentionParams init;  // w = -0.5, b = 10
  const double at_b = rule_attention_weight(init.b, init);
  ctx.expect(at_b == 0.0, "rule gate is exactly 0 at ad = b");

  const double at_zero = rule_attention_weight(0.0, init);
  const double expected = 2.0 * (1.0 / (1.0 + std::exp(-5.0)) - 0.5);
  char line[160];
  std::snprintf(line, sizeof(line), "rule gate att(0) = %.9f (expected %.9f)", at_zero,
                expected);
  ctx.expect(std::abs(at_zero - expected) <= 1e-9, line);

  ctx.expect(rule_attention_weight(90.0, init) == 0.0,
             "rule gate saturates to 0 for ad = 90 under the default init");

  bool range_ok = true;
  for (int i = 0; i <= 180; ++i) {
    const double v = rule_attention_weight(static_cast<double>(i), init);
    if (v < 0.0 || v >= 1.0) range_ok = false;
    // sigma <= 0.5 region (ad >= b with negative slope) must be exactly 0
    if (i >= init.b && v != 0.0) range_ok = false;
  }
  ctx.expect(range_ok, "rule gate stays in [0, 1) and is 0 on the half-line ad >= b");

  ctx.expect(rule_attention_weight(std::nullopt, init) == 1.0,
             "missing angle difference (1 speaker) maps to weight 1");
}

}  // namespace

FusionCheckResult run_fusion_checks(const FusionCheckOptions& options) {
  FusionCheckResult result;
  CheckContext ctx{result, options.tolerance};
  check_gradients_over_instances(options, ctx);
  check_simplex_and_range(options, ctx);
  check_hand_example(ctx);
  check_degenerate_configs(options, ctx);
  check_rule_gate(ctx);
  result.passed = result.failures.empty();
  return result;
}

}  // namespace mmtss
