#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "synthratings/distributions.hpp"
#include "synthratings/interaction_set.hpp"
#include "synthratings/random.hpp"

namespace synthratings {

enum class GenerationMode { Clustered, Baseline };

struct GenerationConfig {
  std::size_t users = 0;
  std::uint64_t seed = 0;
  GenerationMode mode = GenerationMode::Clustered;
  /// Exact total number of ratings; required in baseline mode.
  std::optional<std::uint64_t> target_ratings;
  /// Derive one RNG stream per synthetic user from the seed so users can be
  /// drawn concurrently. The output is deterministic but differs from the
  /// sequential single-stream mode. Clustered mode only.
  bool per_user_streams = false;
};

struct GenerationResult {
  InteractionSet dataset;
  /// Users whose drawn rating count exceeded their cluster's item support
  /// and was clamped to it.
  std::size_t clamped_draws = 0;
};

/// Synthetic users `synth-0 ...`: each draws a cluster, then a rating count
/// from that cluster, then that many distinct items from the cluster's item
/// distribution. Items keep the reference identifiers.
/// Baseline mode dispatches to generate_baseline on the collapsed model.
GenerationResult generate(const BehaviorModel& model, const GenerationConfig& cfg);

/// Sequential clustered generation from a caller-owned stream.
GenerationResult generate(const BehaviorModel& model, const GenerationConfig& cfg, Rng& rng);

/// Single-community generation whose total rating count is exactly
/// cfg.target_ratings: users are drawn until the total is reached and the
/// last user's rating count is truncated. The user count is whatever that
/// takes, so cfg.users is ignored.
GenerationResult generate_baseline(const BehaviorModel& model, const GenerationConfig& cfg, Rng& rng);
GenerationResult generate_baseline(const InteractionSet& reference, const GenerationConfig& cfg, Rng& rng);

}  // namespace synthratings
