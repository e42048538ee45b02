#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ecds/bitword.hpp"
#include "ecds/container.hpp"
#include "ecds/measure.hpp"
#include "ecds/rldc.hpp"

namespace ecds::mem {

/// Membership structure parameters. The universe is padded to 20n; with
/// error parameter eps (default 1/10) and paper constants (scale = 1):
/// degree d = ceil(log2(20n)/eps), vote-word length ceil((100/eps^2) s log2(20n)),
/// bins b = ceil(10 log2(20n)) of size 1000 s. scale > 1 divides the
/// 10^3/10^4/10^5 constants for fast, non-conforming unit-test instances.
struct MemParams {
    uint64_t n = 0;
    uint64_t s = 0;
    unsigned eps_num = 1, eps_den = 10;
    unsigned scale = 1;

    uint64_t universe() const { return 20 * n; }
    long double log2_universe() const;
    uint64_t degree() const;
    uint64_t bins() const;
    uint64_t bin_size() const;
    uint64_t vote_bits() const;        // before padding
    uint64_t padded_vote_bits() const; // bins() * bin_size()
    double bin_noise_factor() const { return 1e5 / double(scale); }

    void validate() const;
};

/// Left-regular bipartite graph: universe() left vertices, vote_bits() right
/// vertices, degree() distinct right neighbors per left vertex.
struct ExpanderGraph {
    uint64_t left = 0, right = 0, degree = 0;
    uint64_t seed = 0;
    std::vector<uint32_t> adj;  // flat, left-major

    const uint32_t* neighbors(uint64_t i) const { return adj.data() + i * degree; }
};

ExpanderGraph build_expander(const MemParams& params, uint64_t seed);

/// Equal-size partition of the padded right vertices into bins; per-bin order
/// is ascending vertex index. Accepted only when every query i < n sees at
/// least bins()/4 bins containing exactly one of its neighbors.
struct Partition {
    uint64_t bins = 0, bin_size = 0;
    uint64_t seed = 0;
    std::vector<uint32_t> bin_of;       // padded right vertex -> bin
    std::vector<uint32_t> pos_in_bin;   // padded right vertex -> index inside its bin
};

/// Returns the per-query count of singleton bins, for gate checks.
std::vector<uint32_t> singleton_bin_counts(const ExpanderGraph& g, const Partition& p, uint64_t n);

Partition build_partition(const ExpanderGraph& g, const MemParams& params, uint64_t seed,
                          unsigned max_attempts = 64);

/// Vote assignment: y over the right vertices such that every left vertex
/// agrees with at least (1-eps) of its neighborhood. Starts from per-vertex
/// majority and repairs greedily; the returned word is verification-gated.
/// Empty result when the pass budget runs out.
std::optional<BitWord> vote_assignment(const std::vector<uint64_t>& set, const ExpanderGraph& g,
                                       const MemParams& params, uint64_t pass_budget = 1u << 22);

struct MemDiagnostics {
    std::vector<double> beta;              // per query: fraction of singleton bins
    std::vector<uint32_t> bad_indices;     // right vertices whose block decodes wrongly (A)
    std::vector<uint32_t> heavy_queries;   // queries with |Gamma_i ∩ A| >= d/10 (B(A))
    uint64_t good_count = 0;               // n - |B(A)|
    std::vector<double> bin_error_rate;    // per bin relative corruption
    std::vector<uint32_t> noisy_bins;      // bins above bin_noise_factor * delta
    double delta = 0.0;                    // word corruption fraction
    bool heavy_below_half_s = false;       // |B(A)| < s/2
};

class MembershipStructure final : public Structure {
  public:
    /// Builds everything from seeds: expander (retrying until the vote
    /// assignment and partition gates hold), vote word, per-bin RLDC
    /// encodings.
    static std::shared_ptr<MembershipStructure> build(std::vector<uint64_t> set, MemParams params,
                                                      uint64_t seed);

    static std::shared_ptr<MembershipStructure> from_container(const Container& c);
    Container to_container() const;

    // Structure interface (single-shot decoder unless repetitions() > 1)
    DsContract contract() const override;
    const BitWord& encoded() const override { return encoded_; }
    uint64_t query_count() const override { return params_.n; }
    Outcome<uint64_t> decode(ProbeView& view, uint64_t query, RandomSource& rng) const override;
    uint64_t truth(uint64_t query) const override;
    CorruptionContext corruption_context() const override;

    /// Majority over R independent decodes, unique-intersection branches
    /// only; bottom without a strict majority.
    void set_repetitions(unsigned reps) { reps_ = reps == 0 ? 1 : reps; }
    unsigned repetitions() const { return reps_; }

    /// Largest noise fraction keeping the worst-case bad-index count below
    /// s*d/40 for the per-block reference decoder.
    double measured_tau() const;

    MemDiagnostics diagnose(const BitWord& word) const;

    /// |B(A)| for an explicit bad-index set.
    uint64_t heavy_query_count(const std::vector<uint32_t>& bad_set) const;

    const MemParams& params() const { return params_; }
    const ExpanderGraph& graph() const { return graph_; }
    const Partition& partition() const { return part_; }
    const RldcScheme& rldc() const { return rldc_; }
    const BitWord& vote_word() const { return votes_; }
    const std::vector<uint64_t>& set() const { return set_; }
    uint64_t bin_codeword_bits() const { return bin_code_bits_; }

    /// Positions the decoder may probe for query i (its singleton blocks).
    std::vector<uint64_t> probe_pool(uint64_t i) const;

  private:
    MembershipStructure() = default;
    void index_neighbors();
    Outcome<uint64_t> decode_once(ProbeView& view, uint64_t query, RandomSource& rng) const;

    MemParams params_;
    std::vector<uint64_t> set_;
    ExpanderGraph graph_;
    Partition part_;
    RldcScheme rldc_;
    BitWord votes_;
    BitWord encoded_;
    uint64_t bin_code_bits_ = 0;
    unsigned reps_ = 1;
    uint64_t seed_ = 0;
    // per query, sorted (bin, position-in-bin) pairs of its neighbors
    std::vector<std::pair<uint32_t, uint32_t>> probe_index_;
    std::vector<uint64_t> probe_offset_;
};

}  // namespace ecds::mem
