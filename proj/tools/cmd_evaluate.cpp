// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "mmtss/errors.hpp"
#include "mmtss/pipeline.hpp"
#include "mmtss/wav_io.hpp"

namespace mmtss::cli {

int cmd_evaluate(const EvaluateArgs& args) {
  const std::filesystem::path dataset(args.dataset_dir);
  const std::filesystem::path estimates(args.estimates_dir);
  const DatasetIndex index = read_dataset_index(dataset);

  // per-example RTFs from a previous separation run, when present
  std::map<std::string, double> rtf_by_id;
  if (std::filesystem::exists(estimates / "scores.json")) {
    std::ifstream in(estimates / "scores.json");
    const std::string text((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    for (const auto& r : score_records_from_json(text)) {
      if (r.rtf) rtf_by_id[r.id] = *r.rtf;
    }
  }

  const StftConfig config;
  const int margin = config.window_length - config.hop;

  std::vector<ScoreRecord> records;
  std::vector<std::string> unmatched;
  for (const auto& id : index.ids) {
    const auto est_path = estimates / (id + ".wav");
    if (!std::filesystem::exists(est_path)) {
      unmatched.push_back(id);
      continue;
    }
    const auto meta = read_example_metadata(dataset / id);
    const auto est = read_wav(est_path);
    const auto ref = read_wav(dataset / id /
                              ("source_" + std::to_string(meta.target_index) + ".wav"));
    ScoreRecord record = score_estimate(id, est.samples.row(0).transpose(),
                                        ref.samples.row(0).transpose(), margin, meta);
    if (const auto it = rtf_by_id.find(id); it != rtf_by_id.end()) record.rtf = it->second;
    records.push_back(std::move(record));
  }

  for (const auto& id : unmatched) {
    std::fprintf(stderr, "evaluate: no estimate for %s (excluded)\n", id.c_str());
  }
  if (records.empty()) {
    std::fprintf(stderr, "evaluate: no overlapping ids between estimates and dataset\n");
    return 1;
  }

  const BucketReport report = bucket_report(records);
  if (!args.report_path.empty()) {
    std::ofstream out(args.report_path, std::ios::trunc);
    if (!out) throw IoError("cannot write report: " + args.report_path);
    out << report.to_json() << "\n";
  }
  if (args.json) {
    std::printf("%s\n", report.to_json().c_str());
  } else {
    std::printf("%s", report.to_table().c_str());
  }
  return unmatched.empty() ? 0 : 1;
}

}  // namespace mmtss::cli
