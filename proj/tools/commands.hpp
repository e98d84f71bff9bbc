// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_TOOLS_COMMANDS_HPP_
#define MMTSS_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <string>

namespace mmtss::cli {

struct SimulateArgs {
  std::string manifest_path;
  std::string out_dir;
  std::optional<uint64_t> seed_override;
  std::optional<int> count_override;
  int threads = 0;  // 0 = hardware concurrency
  bool json = false;
};
int cmd_simulate(const SimulateArgs& args);

struct FeaturizeArgs {
  std::string dataset_dir;
  std::string out_dir;
  bool premask = true;
  bool gate = false;
  double gate_w = -0.5;
  double gate_b = 10.0;
  int threads = 0;
  bool json = false;
};
int cmd_featurize(const FeaturizeArgs& args);

struct OracleSeparateArgs {
  std::string dataset_dir;
  std::string out_dir;
  int threads = 0;
  bool json = false;
};
int cmd_oracle_separate(const OracleSeparateArgs& args);

struct EvaluateArgs {
  std::string estimates_dir;
  std::string dataset_dir;
  std::string report_path;  // empty = stdout only
  bool json = false;
};
int cmd_evaluate(const EvaluateArgs& args);

struct FusionCheckArgs {
  uint64_t seed = 20260;
  int count = 100;
  bool inject_fault = false;
  std::string params_dir;  // optional smoke-forward input
  bool json = false;
};
int cmd_fusion_check(const FusionCheckArgs& args);

}  // namespace mmtss::cli

#endif  // MMTSS_TOOLS_COMMANDS_HPP_
