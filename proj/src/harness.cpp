#include "ecds/harness.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace ecds::harness {

std::vector<uint64_t> sample_queries(const Structure& structure, uint64_t query_sample,
                                     uint64_t seed) {
    const uint64_t q = structure.query_count();
    if (query_sample == 0 || query_sample >= q) {
        std::vector<uint64_t> all(q);
        std::iota(all.begin(), all.end(), 0ull);
        return all;
    }
    RandomSource rng(seed);
    std::vector<uint64_t> picked;
    picked.reserve(query_sample);
    std::vector<uint64_t> pool(q);
    std::iota(pool.begin(), pool.end(), 0ull);
    for (uint64_t i = 0; i < query_sample; ++i) {
        uint64_t j = i + rng.uniform(q - i);
        std::swap(pool[i], pool[j]);
        picked.push_back(pool[i]);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

std::vector<BenchRow> bench(const Structure& structure, const ExperimentConfig& config,
                            uint64_t length_predicted) {
    auto queries = sample_queries(structure, config.query_sample, config.master_seed ^ 0x5eedULL);
    const uint64_t n_bits = structure.encoded().size();
    const double eps = structure.contract().epsilon;

    std::vector<BenchRow> rows;
    for (double delta : config.deltas) {
        for (CorruptStrategy strat : config.strategies) {
            CorruptionSpec spec;
            spec.budget = uint64_t(delta * double(n_bits));
            spec.strategy = strat;
            spec.seed = splitmix64(config.master_seed ^ uint64_t(delta * 1e12) ^ uint64_t(strat));
            spec.k = config.worst_k;
            RandomSource rng(splitmix64(spec.seed + 0x9e37));
            auto rep = measure_contract(structure, queries, spec, config.trials, rng);

            BenchRow row;
            row.delta = delta;
            row.budget = spec.budget;
            row.strategy = corrupt_strategy_name(strat);
            row.queries = queries.size();
            row.trials = config.trials;
            row.length = n_bits;
            row.length_predicted = length_predicted;
            row.max_probes = rep.max_probes;
            row.mean_probes = rep.mean_probes;
            double worst_fail = 0.0, bottoms = 0.0;
            uint64_t lost = 0;
            for (const auto& qs : rep.per_query) {
                worst_fail = std::max(worst_fail, 1.0 - qs.ok_rate);
                bottoms += qs.bottom_rate;
                if (qs.success_rate < 1.0 - eps) ++lost;
            }
            row.eps_hat = worst_fail;
            row.bottom_rate = rep.per_query.empty() ? 0.0 : bottoms / double(rep.per_query.size());
            row.lambda_hat = rep.per_query.empty() ? 0.0 : double(lost) / double(rep.per_query.size());
            rows.push_back(row);
        }
    }
    return rows;
}

std::string render_table(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-10s %-28s %8s %9s %9s %9s %10s %9s %12s %12s\n", "delta",
                  "strategy", "budget", "eps_hat", "lambda^", "bot_rate", "meanprobe", "maxprobe",
                  "N", "N_pred");
    out << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf,
                      "%-10.3g %-28s %8" PRIu64 " %9.4f %9.4f %9.4f %10.1f %9" PRIu64 " %12" PRIu64
                      " %12" PRIu64 "\n",
                      r.delta, r.strategy.c_str(), r.budget, r.eps_hat, r.lambda_hat, r.bottom_rate,
                      r.mean_probes, r.max_probes, r.length, r.length_predicted);
        out << buf;
    }
    return out.str();
}

std::string render_machine(const std::vector<BenchRow>& rows, const ExperimentConfig& config) {
    std::ostringstream out;
    out << "record=bench\n";
    out << "master_seed=" << config.master_seed << "\n";
    out << "trials=" << config.trials << "\n";
    out << "query_sample=" << config.query_sample << "\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.9g", r.delta);
        out << "row delta=" << buf << " strategy=" << r.strategy << " budget=" << r.budget;
        std::snprintf(buf, sizeof buf, "%.6f", r.eps_hat);
        out << " eps_hat=" << buf;
        std::snprintf(buf, sizeof buf, "%.6f", r.lambda_hat);
        out << " lambda_hat=" << buf;
        std::snprintf(buf, sizeof buf, "%.6f", r.bottom_rate);
        out << " bottom_rate=" << buf;
        std::snprintf(buf, sizeof buf, "%.3f", r.mean_probes);
        out << " mean_probes=" << buf << " max_probes=" << r.max_probes << " N=" << r.length
            << " N_pred=" << r.length_predicted << " queries=" << r.queries << " trials=" << r.trials
            << "\n";
    }
    return out.str();
}

}  // namespace ecds::harness
