// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <CLI11.hpp>

#include "commands.hpp"
#include "mmtss/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "mmtss - multi-channel target speech separation toolkit\n"
      "Simulates spatialized speech mixtures, extracts spectral/spatial/\n"
      "directional features, runs oracle-mask separation and scores the\n"
      "results. Set MMTSS_LOG=debug|info|warn|error|quiet for verbosity."};
  app.require_subcommand(1);

  mmtss::cli::SimulateArgs sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Generate a mixture dataset from a JSON manifest (resumable)");
  simulate->add_option("--manifest", sim.manifest_path, "Manifest JSON path")->required();
  simulate->add_option("--out", sim.out_dir, "Output dataset directory")->required();
  uint64_t seed_value = 0;
  auto* seed_opt = simulate->add_option("--seed", seed_value, "Override the manifest base seed");
  int count_value = 0;
  auto* count_opt =
      simulate->add_option("--count", count_value, "Override the manifest example count");
  simulate->add_option("--threads", sim.threads, "Worker threads (default: all cores)");
  simulate->add_flag("--json", sim.json, "Machine-readable summary on stdout");

  mmtss::cli::FeaturizeArgs feat;
  auto* featurize = app.add_subcommand(
      "featurize", "Extract LPS/IPD/DF tensors and the stacked feature matrix");
  featurize->add_option("--dataset", feat.dataset_dir, "Dataset directory")->required();
  featurize->add_option("--out", feat.out_dir, "Feature output directory")->required();
  featurize->add_option("--premask", feat.premask,
                        "Zero DF values below the per-utterance median (default 1)");
  featurize->add_flag("--gate", feat.gate,
                      "Scale IPD/DF rows by the rule gate at the example's angle difference");
  featurize->add_option("--gate-w", feat.gate_w, "Rule gate slope (default -0.5)");
  featurize->add_option("--gate-b", feat.gate_b, "Rule gate offset in degrees (default 10)");
  featurize->add_option("--threads", feat.threads, "Worker threads");
  featurize->add_flag("--json", feat.json, "Machine-readable summary on stdout");

  mmtss::cli::OracleSeparateArgs oracle;
  auto* oracle_cmd = app.add_subcommand(
      "oracle-separate",
      "Ideal-ratio-mask separation against the stored references; scores are "
      "computed on the STFT interior region");
  oracle_cmd->add_option("--dataset", oracle.dataset_dir, "Dataset directory")->required();
  oracle_cmd->add_option("--out", oracle.out_dir, "Estimate output directory")->required();
  oracle_cmd->add_option("--threads", oracle.threads, "Worker threads");
  oracle_cmd->add_flag("--json", oracle.json, "Machine-readable summary on stdout");

  mmtss::cli::EvaluateArgs eval;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Score estimates against references and bucket by speaker count "
                  "and angle difference");
  evaluate->add_option("--estimates", eval.estimates_dir, "Directory of <id>.wav estimates")
      ->required();
  evaluate->add_option("--dataset", eval.dataset_dir, "Dataset directory")->required();
  evaluate->add_option("--report", eval.report_path, "Write the JSON report here");
  evaluate->add_flag("--json", eval.json, "JSON report on stdout instead of the table");

  mmtss::cli::FusionCheckArgs fusion;
  auto* fusion_cmd = app.add_subcommand(
      "fusion-check", "Verify attention gradients and gate invariants");
  fusion_cmd->add_option("--seed", fusion.seed, "Base seed for the random instances");
  fusion_cmd->add_option("--count", fusion.count, "Number of gradient-check instances");
  fusion_cmd->add_flag("--inject-fault", fusion.inject_fault,
                       "Corrupt one analytic gradient to prove the harness detects it");
  fusion_cmd->add_option("--params", fusion.params_dir,
                         "Attention parameter directory for a smoke forward pass");
  fusion_cmd->add_flag("--json", fusion.json, "Machine-readable report on stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      if (*seed_opt) sim.seed_override = seed_value;
      if (*count_opt) sim.count_override = count_value;
      return mmtss::cli::cmd_simulate(sim);
    }
    if (featurize->parsed()) return mmtss::cli::cmd_featurize(feat);
    if (oracle_cmd->parsed()) return mmtss::cli::cmd_oracle_separate(oracle);
    if (evaluate->parsed()) return mmtss::cli::cmd_evaluate(eval);
    if (fusion_cmd->parsed()) return mmtss::cli::cmd_fusion_check(fusion);
  } catch (const mmtss::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
  return 0;
}
