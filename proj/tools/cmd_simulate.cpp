// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <atomic>
#include <cstdio>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "mmtss/logging.hpp"
#include "mmtss/parallel.hpp"
#include "mmtss/pipeline.hpp"

namespace mmtss::cli {

int cmd_simulate(const SimulateArgs& args) {
  SimulationManifest manifest = load_manifest(args.manifest_path);
  if (args.seed_override) manifest.base_seed = *args.seed_override;
  if (args.count_override) manifest.count = *args.count_override;
  manifest.validate();

  const std::filesystem::path out(args.out_dir);
  std::filesystem::create_directories(out);

  std::atomic<uint64_t> skipped{0};
  const auto failures = parallel_for_indexed(
      static_cast<uint64_t>(manifest.count), args.threads, [&](uint64_t index) {
        const auto dir = out / example_id(index);
        if (example_complete(dir)) {
          skipped.fetch_add(1);
          return;
        }
        const MixtureExample ex = simulate_mixture(manifest, index);
        write_example(dir, ex);
        log::info("simulated " + example_id(index));
      });

  std::vector<std::string> ids;
  for (int i = 0; i < manifest.count; ++i) {
    const auto id = example_id(static_cast<uint64_t>(i));
    if (example_complete(out / id)) ids.push_back(id);
  }
  write_dataset_index(out, manifest, ids);

  for (const auto& [index, message] : failures) {
    std::fprintf(stderr, "simulate %s failed: %s\n", example_id(index).c_str(),
                 message.c_str());
  }
  if (args.json) {
    nlohmann::json j;
    j["requested"] = manifest.count;
    j["completed"] = ids.size();
    j["skipped_existing"] = skipped.load();
    j["failed"] = failures.size();
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("simulated %zu/%d examples into %s (%zu failures)\n", ids.size(),
                manifest.count, args.out_dir.c_str(), failures.size());
  }
  return failures.empty() ? 0 : 1;
}

}  // namespace mmtss::cli
