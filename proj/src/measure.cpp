#include "ecds/measure.hpp"

#include <stdexcept>

namespace ecds {

CorruptionContext Structure::corruption_context() const { return {}; }

std::function<uint64_t(const BitWord&)> make_failure_eval(const Structure& structure,
                                                          std::vector<uint64_t> probe_queries,
                                                          unsigned trials_per_query, uint64_t seed) {
    return [&structure, probe_queries = std::move(probe_queries), trials_per_query,
            seed](const BitWord& word) -> uint64_t {
        ProbeSession session(word);
        uint64_t failures = 0;
        for (uint64_t q : probe_queries) {
            uint64_t want = structure.truth(q);
            for (unsigned t = 0; t < trials_per_query; ++t) {
                RandomSource trial_rng(splitmix64(seed ^ splitmix64(q * 0x10001 + t)));
                session.begin_call();
                ProbeView view(session);
                auto out = structure.decode(view, q, trial_rng);
                if (!(out.is_answer() && out.value() == want)) ++failures;
            }
        }
        return failures;
    };
}

ContractReport measure_on_word(const Structure& structure, const BitWord& word,
                               const std::vector<uint64_t>& queries, uint64_t trials,
                               RandomSource& rng) {
    if (trials < 1) throw std::invalid_argument("measure: trials must be >= 1");
    DsContract c = structure.contract();
    c.validate();

    ContractReport rep;
    rep.trials = trials;
    rep.flipped_bits = hamming_distance(word, structure.encoded());
    rep.per_query.reserve(queries.size());

    ProbeSession session(word);
    uint64_t total_probes = 0, total_calls = 0, good = 0;

    for (uint64_t q : queries) {
        const uint64_t want = structure.truth(q);
        uint64_t n_ok = 0, n_success = 0, n_bottom = 0;
        for (uint64_t t = 0; t < trials; ++t) {
            RandomSource trial_rng = rng.child((q << 24) ^ t);
            session.begin_call();
            ProbeView view(session);
            auto out = structure.decode(view, q, trial_rng);
            total_probes += session.distinct_probes();
            ++total_calls;
            if (session.distinct_probes() > rep.max_probes) rep.max_probes = session.distinct_probes();
            if (out.is_bottom()) {
                ++n_bottom;
                ++n_ok;
            } else if (out.value() == want) {
                ++n_success;
                ++n_ok;
            }
        }
        QueryStats qs;
        qs.query = q;
        qs.success_rate = double(n_success) / double(trials);
        qs.ok_rate = double(n_ok) / double(trials);
        qs.bottom_rate = double(n_bottom) / double(trials);
        if (qs.success_rate >= 1.0 - c.epsilon) ++good;
        if (qs.success_rate < rep.min_success) rep.min_success = qs.success_rate;
        if (qs.ok_rate < rep.min_ok) rep.min_ok = qs.ok_rate;
        rep.per_query.push_back(qs);
    }
    rep.good_fraction = queries.empty() ? 1.0 : double(good) / double(queries.size());
    rep.mean_probes = total_calls ? double(total_probes) / double(total_calls) : 0.0;
    return rep;
}

ContractReport measure_contract(const Structure& structure, const std::vector<uint64_t>& queries,
                                const CorruptionSpec& spec, uint64_t trials, RandomSource& rng) {
    CorruptionContext ctx = structure.corruption_context();
    if (spec.strategy == CorruptStrategy::worst_of_k && !ctx.failure_eval) {
        // default probe set: the measured queries, a couple of trials each
        ctx.failure_eval = make_failure_eval(structure, queries, 2, spec.seed ^ 0x77);
    }
    BitWord word = corrupt(structure.encoded(), spec, ctx);
    return measure_on_word(structure, word, queries, trials, rng);
}

}  // namespace ecds
