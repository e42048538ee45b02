#pragma once

#include <cstdint>
#include <vector>

#include "ecds/bitword.hpp"
#include "ecds/corrupt.hpp"
#include "ecds/outcome.hpp"
#include "ecds/probe.hpp"
#include "ecds/random.hpp"

namespace ecds {

/// Anything the measurement engine can exercise: a fixed encoded word, a
/// randomized decoder, and ground truth per query. Encoded words and decode
/// state are immutable; decode calls are safe to run concurrently as long as
/// each call owns its RandomSource.
class Structure {
  public:
    virtual ~Structure() = default;

    virtual DsContract contract() const = 0;
    virtual const BitWord& encoded() const = 0;
    virtual uint64_t query_count() const = 0;
    virtual Outcome<uint64_t> decode(ProbeView& view, uint64_t query, RandomSource& rng) const = 0;
    virtual uint64_t truth(uint64_t query) const = 0;

    /// Hooks for the corruption strategies. Default: no block structure, no
    /// probe pools.
    virtual CorruptionContext corruption_context() const;
};

struct QueryStats {
    uint64_t query = 0;
    double success_rate = 0.0;   // Pr[out = truth]
    double ok_rate = 0.0;        // Pr[out in {truth, bottom}]
    double bottom_rate = 0.0;
};

struct ContractReport {
    std::vector<QueryStats> per_query;
    double good_fraction = 0.0;      // queries with success_rate >= 1 - epsilon
    double min_success = 1.0;
    double min_ok = 1.0;
    uint64_t max_probes = 0;
    double mean_probes = 0.0;
    uint64_t trials = 0;
    uint64_t flipped_bits = 0;       // distance between clean and measured word
};

/// Builds a worst-of-k failure evaluator: failures of `structure` over
/// `probe_queries` x `trials_per_query` seeded decodes (failure = output
/// differs from the truth).
std::function<uint64_t(const BitWord&)> make_failure_eval(const Structure& structure,
                                                          std::vector<uint64_t> probe_queries,
                                                          unsigned trials_per_query, uint64_t seed);

/// Corrupts the structure's word per `spec`, then runs `trials` decodes per
/// query and reports empirical per-query rates, the good-set fraction at the
/// structure's declared epsilon, and the probe audit.
ContractReport measure_contract(const Structure& structure, const std::vector<uint64_t>& queries,
                                const CorruptionSpec& spec, uint64_t trials, RandomSource& rng);

/// Same but against an already-corrupted word.
ContractReport measure_on_word(const Structure& structure, const BitWord& word,
                               const std::vector<uint64_t>& queries, uint64_t trials,
                               RandomSource& rng);

}  // namespace ecds
