// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_GRADCHECK_HPP_
#define MMTSS_GRADCHECK_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mmtss {

// One parameter buffer to verify: `values` is perturbed in place while
// `loss` is re-evaluated; `analytic` holds the gradient under test in
// the same memory order.
struct GradSlot {
  std::string name;
  double* values = nullptr;
  const double* analytic = nullptr;
  size_t count = 0;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::string worst_slot;
  size_t worst_index = 0;
};

// Central finite differences with the given step. The relative error of
// one entry is |fd - analytic| / max(|fd|, |analytic|, 1e-3).
GradCheckReport check_gradients(const std::function<double()>& loss,
                                const std::vector<GradSlot>& slots, double step = 1e-5);

struct FusionCheckOptions {
  uint64_t seed = 20260;
  int instances = 100;
  double step = 1e-5;
  double tolerance = 1e-5;
  // Corrupts one analytic gradient entry to demonstrate that the
  // harness actually detects broken gradients.
  bool inject_fault = false;
};

struct FusionCheckResult {
  bool passed = false;
  double max_grad_rel_error = 0.0;
  double max_simplex_error = 0.0;
  double hand_example_error = 0.0;
  std::vector<std::string> check_lines;  // one human-readable line per check
  std::vector<std::string> failures;
};

// Verifies the factorized-attention operator (finite-difference
// gradients over seeded random instances, simplex weights, degenerate
// configurations, the hand-computed single-frame example, permutation
// equivariance) and the rule-based gate (zero point, saturation, range).
FusionCheckResult run_fusion_checks(const FusionCheckOptions& options);

}  // namespace mmtss

#endif  // MMTSS_GRADCHECK_HPP_
