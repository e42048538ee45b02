#include "ecds/corrupt.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace ecds {

CorruptStrategy corrupt_strategy_from_name(const std::string& name) {
    if (name == "uniform-random" || name == "uniform") return CorruptStrategy::uniform_random;
    if (name == "targeted-block" || name == "block") return CorruptStrategy::targeted_block;
    if (name == "targeted-query-neighborhood" || name == "neighborhood")
        return CorruptStrategy::targeted_query_neighborhood;
    if (name == "worst-of-k" || name == "worst") return CorruptStrategy::worst_of_k;
    throw std::invalid_argument("unknown corruption strategy: " + name);
}

std::string corrupt_strategy_name(CorruptStrategy s) {
    switch (s) {
        case CorruptStrategy::uniform_random: return "uniform-random";
        case CorruptStrategy::targeted_block: return "targeted-block";
        case CorruptStrategy::targeted_query_neighborhood: return "targeted-query-neighborhood";
        case CorruptStrategy::worst_of_k: return "worst-of-k";
    }
    return "?";
}

namespace {

// Flips `budget` distinct positions drawn from [0, n).
void flip_uniform(BitWord& w, uint64_t budget, RandomSource& rng) {
    const uint64_t n = w.size();
    std::unordered_set<uint64_t> picked;
    picked.reserve(std::size_t(budget) * 2);
    while (picked.size() < budget) {
        uint64_t p = rng.uniform(n);
        if (picked.insert(p).second) w.flip(p);
    }
}

// Flips `budget` distinct positions from the pool; spills to uniform when the
// pool is smaller than the budget.
void flip_from_pool(BitWord& w, uint64_t budget, std::vector<uint64_t> pool, RandomSource& rng) {
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    std::unordered_set<uint64_t> picked;
    if (pool.size() <= budget) {
        for (uint64_t p : pool) {
            w.flip(p);
            picked.insert(p);
        }
    } else {
        // partial Fisher-Yates over the pool
        for (uint64_t i = 0; i < budget; ++i) {
            uint64_t j = i + rng.uniform(pool.size() - i);
            std::swap(pool[i], pool[j]);
            w.flip(pool[i]);
            picked.insert(pool[i]);
        }
    }
    while (picked.size() < budget) {
        uint64_t p = rng.uniform(w.size());
        if (picked.insert(p).second) w.flip(p);
    }
}

BitWord corrupt_once(const BitWord& w, const CorruptionSpec& spec, const CorruptionContext& ctx,
                     uint64_t seed) {
    BitWord out = w;
    RandomSource rng(seed);
    switch (spec.strategy) {
        case CorruptStrategy::uniform_random:
        case CorruptStrategy::worst_of_k:
            flip_uniform(out, spec.budget, rng);
            break;
        case CorruptStrategy::targeted_block: {
            if (ctx.block_bits == 0) {
                flip_uniform(out, spec.budget, rng);
                break;
            }
            uint64_t nblocks = (w.size() + ctx.block_bits - 1) / ctx.block_bits;
            uint64_t blk = rng.uniform(nblocks);
            uint64_t lo = blk * ctx.block_bits;
            uint64_t hi = std::min<uint64_t>(lo + ctx.block_bits, w.size());
            std::vector<uint64_t> pool;
            for (uint64_t p = lo; p < hi; ++p) pool.push_back(p);
            flip_from_pool(out, std::min<uint64_t>(spec.budget, pool.size()), std::move(pool), rng);
            break;
        }
        case CorruptStrategy::targeted_query_neighborhood: {
            if (!ctx.probe_pool) {
                flip_uniform(out, spec.budget, rng);
                break;
            }
            uint64_t q = spec.has_target_query
                             ? spec.target_query
                             : (ctx.query_count ? rng.uniform(ctx.query_count) : 0);
            flip_from_pool(out, spec.budget, ctx.probe_pool(q), rng);
            break;
        }
    }
    return out;
}

}  // namespace

BitWord corrupt(const BitWord& w, const CorruptionSpec& spec, const CorruptionContext& ctx) {
    if (spec.budget > w.size()) throw std::invalid_argument("corrupt: budget exceeds word length");
    if (spec.budget == 0) return w;

    if (spec.strategy != CorruptStrategy::worst_of_k) return corrupt_once(w, spec, ctx, spec.seed);

    if (!ctx.failure_eval)
        throw std::invalid_argument("corrupt: worst-of-k needs a failure evaluator");
    if (spec.k == 0) throw std::invalid_argument("corrupt: worst-of-k with k = 0");

    BitWord best;
    uint64_t best_failures = 0;
    bool first = true;
    for (unsigned c = 0; c < spec.k; ++c) {
        BitWord cand = corrupt_once(w, spec, ctx, splitmix64(spec.seed + c));
        uint64_t fails = ctx.failure_eval(cand);
        if (first || fails > best_failures) {
            best = std::move(cand);
            best_failures = fails;
            first = false;
        }
    }
    return best;
}

}  // namespace ecds
