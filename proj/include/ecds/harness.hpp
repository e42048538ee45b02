#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecds/measure.hpp"

namespace ecds::harness {

/// One grid cell of a bench run.
struct BenchRow {
    double delta = 0.0;
    uint64_t budget = 0;
    std::string strategy;
    double eps_hat = 0.0;      // max over queries of failure rate (1 - ok_rate)
    double lambda_hat = 0.0;   // fraction of queries with success < 1 - eps
    double bottom_rate = 0.0;  // mean bottom rate
    double mean_probes = 0.0;
    uint64_t max_probes = 0;
    uint64_t length = 0;
    uint64_t length_predicted = 0;
    uint64_t queries = 0;
    uint64_t trials = 0;
};

struct ExperimentConfig {
    std::vector<double> deltas;
    std::vector<CorruptStrategy> strategies;
    uint64_t trials = 100;
    uint64_t query_sample = 0;  // 0 = all queries, else random-k with recorded seed
    uint64_t master_seed = 1;
    unsigned worst_k = 8;
};

/// Sampled (or full) query list; random-k defaults to 4096 for large query
/// spaces.
std::vector<uint64_t> sample_queries(const Structure& structure, uint64_t query_sample,
                                     uint64_t seed);

std::vector<BenchRow> bench(const Structure& structure, const ExperimentConfig& config,
                            uint64_t length_predicted);

/// Human table plus line-delimited key=value records; byte-identical for
/// identical inputs.
std::string render_table(const std::vector<BenchRow>& rows);
std::string render_machine(const std::vector<BenchRow>& rows, const ExperimentConfig& config);

}  // namespace ecds::harness
