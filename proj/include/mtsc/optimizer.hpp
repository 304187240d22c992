#pragma once

// Heuristic search for small Berger-Tung inner-bound sum rates. W and T are
// trivial; each encoder kernel row is a softmax of bounded logits and the
// decoder is the Bayes-optimal deterministic map for the current encoders.
// Results are upper estimates of the true optimum.

#include <cstdint>
#include <optional>
#include <vector>

#include "mtsc/model.hpp"
#include "mtsc/regions.hpp"

namespace mtsc {

struct OptimizerOptions {
  /// Encoder output alphabet sizes; empty selects |Y_l| + 2^L + K - 1.
  std::vector<std::size_t> cardinalities;
  /// Total objective evaluations, split evenly over the restarts.
  std::size_t budget = 10000;
  /// Restart 0 starts near the identity map, the others at random maps.
  std::size_t restarts = 2;
  std::uint64_t seed = 1;
};

struct OptimizerResult {
  bool feasible = false;
  Nats best_sum_rate = 0.0;  // I(Y; U | Y{L+1}) of the best feasible system
  std::optional<AuxSystem> gamma;
  std::optional<RegionConstraints> constraints;
  std::size_t evaluations = 0;
  std::size_t best_restart = 0;
};

/// Searches for the smallest full-set Berger-Tung inner bound among systems
/// with E[d_k] <= caps[k] + 1e-9. Restarts run concurrently with
/// independent generators seeded from `seed`; the merge keeps the smallest
/// (sum rate, restart index), so results do not depend on thread count.
OptimizerResult optimize_bt_inner_sum_rate(const SourceModel& model,
                                           const std::vector<double>& caps,
                                           const OptimizerOptions& options = {});

/// |Y_l| + 2^L + K - 1 for every encoder.
std::vector<std::size_t> default_cardinalities(const SourceModel& model);

}  // namespace mtsc
