#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ecds/bitword.hpp"
#include "ecds/random.hpp"

namespace ecds {

enum class CorruptStrategy { uniform_random, targeted_block, targeted_query_neighborhood, worst_of_k };

CorruptStrategy corrupt_strategy_from_name(const std::string& name);
std::string corrupt_strategy_name(CorruptStrategy s);

/// Adversary description: at most `budget` distinct flipped positions,
/// deterministic given `seed`. worst_of_k draws k seeded candidates and keeps
/// the one that maximizes measured decoder failure on the structure's probe
/// set.
struct CorruptionSpec {
    uint64_t budget = 0;
    CorruptStrategy strategy = CorruptStrategy::uniform_random;
    uint64_t seed = 0;
    unsigned k = 8;                 // candidates for worst_of_k
    uint64_t target_query = 0;      // for targeted_query_neighborhood
    bool has_target_query = false;
};

/// Structure-specific hooks the strategies may need. All optional; strategies
/// that lack their hook fall back to uniform flips.
struct CorruptionContext {
    /// Width of one inner-code block, for targeted_block.
    uint64_t block_bits = 0;
    /// Candidate positions the decoder may probe for a query.
    std::function<std::vector<uint64_t>(uint64_t query)> probe_pool;
    /// Number of decode failures over a fixed seeded probe set; used to rank
    /// worst_of_k candidates.
    std::function<uint64_t(const BitWord&)> failure_eval;
    /// Query universe size, for picking a target query from the seed.
    uint64_t query_count = 0;
};

/// Flips at most spec.budget distinct positions of w per the strategy.
/// budget == 0 returns w unchanged.
BitWord corrupt(const BitWord& w, const CorruptionSpec& spec, const CorruptionContext& ctx = {});

}  // namespace ecds
