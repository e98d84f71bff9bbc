// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cstdio>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "mmtss/errors.hpp"
#include "mmtss/parallel.hpp"
#include "mmtss/pipeline.hpp"
#include "mmtss/wav_io.hpp"

namespace mmtss::cli {

int cmd_featurize(const FeaturizeArgs& args) {
  const std::filesystem::path dataset(args.dataset_dir);
  const DatasetIndex index = read_dataset_index(dataset);
  const std::filesystem::path out(args.out_dir);
  std::filesystem::create_directories(out);

  FeaturizeOptions options;
  options.premask = args.premask;
  options.gate = args.gate;
  options.gate_params = {args.gate_w, args.gate_b};

  const auto failures = parallel_for_indexed(
      index.ids.size(), args.threads, [&](uint64_t i) {
        const auto& id = index.ids[i];
        const auto meta = read_example_metadata(dataset / id);
        if (meta.directions_deg.empty() ||
            meta.target_index >= static_cast<int>(meta.directions_deg.size())) {
          throw ValidationError(id + ": metadata lacks the target direction");
        }
        const double theta = meta.directions_deg[static_cast<size_t>(meta.target_index)];
        const auto mixture = read_wav(dataset / id / "mixture.wav");
        const auto geom = default_array_geometry(mixture.sample_rate);
        const auto features =
            featurize_mixture(mixture, theta, meta.angle_difference_deg, geom, options);
        write_example_features(out, id, features, options, theta);
      });

  for (const auto& [i, message] : failures) {
    std::fprintf(stderr, "featurize %s failed: %s\n",
                 i < index.ids.size() ? index.ids[i].c_str() : "?", message.c_str());
  }
  if (args.json) {
    nlohmann::json j;
    j["examples"] = index.ids.size();
    j["failed"] = failures.size();
    j["premask"] = args.premask;
    j["gate"] = args.gate;
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("featurized %zu examples into %s (%zu failures)\n",
                index.ids.size() - failures.size(), args.out_dir.c_str(), failures.size());
  }
  return failures.empty() ? 0 : 1;
}

}  // namespace mmtss::cli
