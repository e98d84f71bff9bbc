// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_PARALLEL_HPP_
#define MMTSS_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace mmtss {

// Runs fn(i) for i in [0, count) on a pool of workers. Work items must
// be independent; results may not depend on the schedule. Returns the
// failures as (index, message) pairs sorted by index.
inline std::vector<std::pair<uint64_t, std::string>> parallel_for_indexed(
    uint64_t count, int threads, const std::function<void(uint64_t)>& fn) {
  if (threads <= 0) {
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  threads = static_cast<int>(std::min<uint64_t>(static_cast<uint64_t>(threads),
                                                std::max<uint64_t>(count, 1)));

  std::atomic<uint64_t> next{0};
  std::mutex mu;
  std::vector<std::pair<uint64_t, std::string>> failures;

  auto worker = [&]() {
    for (;;) {
      const uint64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        failures.emplace_back(i, e.what());
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::sort(failures.begin(), failures.end());
  return failures;
}

}  // namespace mmtss

#endif  // MMTSS_PARALLEL_HPP_
