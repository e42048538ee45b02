#include "ecds/membership.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ecds::mem {

long double MemParams::log2_universe() const { return std::log2((long double)universe()); }

uint64_t MemParams::degree() const {
    return uint64_t(std::ceil(log2_universe() * eps_den / eps_num));
}

uint64_t MemParams::bins() const { return uint64_t(std::ceil(10.0L * log2_universe())); }

uint64_t MemParams::bin_size() const { return (1000ull * s) / scale; }

uint64_t MemParams::vote_bits() const {
    long double c = 100.0L * eps_den * eps_den / ((long double)eps_num * eps_num * scale);
    return uint64_t(std::ceil(c * (long double)s * log2_universe()));
}

uint64_t MemParams::padded_vote_bits() const { return bins() * bin_size(); }

void MemParams::validate() const {
    if (n == 0 || s == 0 || s > n) throw std::invalid_argument("mem: need 1 <= s <= n");
    if (eps_num == 0 || eps_den == 0 || 2 * eps_num >= eps_den)
        throw std::invalid_argument("mem: eps must be in (0, 1/2)");
    if (scale == 0 || 1000 % scale != 0) throw std::invalid_argument("mem: scale must divide 1000");
    if (degree() > vote_bits()) throw std::invalid_argument("mem: degree exceeds vote word");
    if (padded_vote_bits() < vote_bits()) throw std::logic_error("mem: padding underflow");
}

ExpanderGraph build_expander(const MemParams& params, uint64_t seed) {
    params.validate();
    ExpanderGraph g;
    g.left = params.universe();
    g.right = params.vote_bits();
    g.degree = params.degree();
    g.seed = seed;
    if (g.degree > g.right) throw std::invalid_argument("expander: degree exceeds right side");
    g.adj.resize(g.left * g.degree);
    RandomSource rng(seed);
    std::vector<uint32_t> scratch;
    for (uint64_t i = 0; i < g.left; ++i) {
        scratch.clear();
        while (scratch.size() < g.degree) {
            uint32_t cand = uint32_t(rng.uniform(g.right));
            if (std::find(scratch.begin(), scratch.end(), cand) == scratch.end())
                scratch.push_back(cand);
        }
        std::copy(scratch.begin(), scratch.end(), g.adj.begin() + i * g.degree);
    }
    return g;
}

std::vector<uint32_t> singleton_bin_counts(const ExpanderGraph& g, const Partition& p, uint64_t n) {
    std::vector<uint32_t> counts(n, 0);
    std::vector<uint16_t> per_bin(p.bins, 0);
    std::vector<uint32_t> touched;
    for (uint64_t i = 0; i < n; ++i) {
        touched.clear();
        const uint32_t* nb = g.neighbors(i);
        for (uint64_t j = 0; j < g.degree; ++j) {
            uint32_t bin = p.bin_of[nb[j]];
            if (per_bin[bin]++ == 0) touched.push_back(bin);
        }
        uint32_t singles = 0;
        for (uint32_t bin : touched) {
            if (per_bin[bin] == 1) ++singles;
            per_bin[bin] = 0;
        }
        counts[i] = singles;
    }
    return counts;
}

Partition build_partition(const ExpanderGraph& g, const MemParams& params, uint64_t seed,
                          unsigned max_attempts) {
    const uint64_t m = params.padded_vote_bits();
    const uint64_t b = params.bins();
    const uint64_t bs = params.bin_size();
    uint64_t worst_query = 0;
    uint32_t worst_count = 0;
    for (unsigned attempt = 0; attempt < max_attempts; ++attempt) {
        Partition p;
        p.bins = b;
        p.bin_size = bs;
        p.seed = seed + attempt;
        std::vector<uint32_t> perm(m);
        std::iota(perm.begin(), perm.end(), 0u);
        RandomSource rng(p.seed);
        for (uint64_t i = m - 1; i > 0; --i) {
            uint64_t j = rng.uniform(i + 1);
            std::swap(perm[i], perm[j]);
        }
        p.bin_of.resize(m);
        for (uint64_t v = 0; v < m; ++v) p.bin_of[perm[v]] = uint32_t(v / bs);
        p.pos_in_bin.resize(m);
        std::vector<uint32_t> fill(b, 0);
        for (uint64_t v = 0; v < m; ++v) p.pos_in_bin[v] = fill[p.bin_of[v]]++;

        auto counts = singleton_bin_counts(g, p, params.n);
        bool ok = true;
        for (uint64_t i = 0; i < params.n; ++i) {
            if (4 * uint64_t(counts[i]) < b) {
                ok = false;
                if (counts[i] >= worst_count) {
                    worst_count = counts[i];
                    worst_query = i;
                }
                break;
            }
        }
        if (ok) return p;
    }
    std::ostringstream msg;
    msg << "partition: retries exhausted; worst query " << worst_query << " had " << worst_count
        << " singleton bins, needed ceil(b/4) of b=" << b;
    throw std::runtime_error(msg.str());
}

std::optional<BitWord> vote_assignment(const std::vector<uint64_t>& set, const ExpanderGraph& g,
                                       const MemParams& params, uint64_t pass_budget) {
    const uint64_t m = g.right;
    const uint64_t d = g.degree;
    const uint64_t left = g.left;

    std::vector<uint8_t> x(left, 0);
    for (uint64_t v : set) {
        if (v >= params.n) throw std::invalid_argument("vote_assignment: set member outside universe");
        x[v] = 1;
    }

    // reverse adjacency
    std::vector<uint32_t> rev_off(m + 1, 0);
    for (uint32_t v : g.adj) ++rev_off[v + 1];
    for (uint64_t j = 0; j < m; ++j) rev_off[j + 1] += rev_off[j];
    std::vector<uint32_t> rev(g.adj.size());
    {
        std::vector<uint32_t> cursor(rev_off.begin(), rev_off.end() - 1);
        for (uint64_t i = 0; i < left; ++i)
            for (uint64_t jj = 0; jj < d; ++jj) rev[cursor[g.adj[i * d + jj]]++] = uint32_t(i);
    }

    // majority init (ties to 0)
    BitWord y(m);
    for (uint64_t j = 0; j < m; ++j) {
        uint32_t deg = rev_off[j + 1] - rev_off[j];
        uint32_t ones = 0;
        for (uint32_t t = rev_off[j]; t < rev_off[j + 1]; ++t) ones += x[rev[t]];
        if (2 * ones > deg) y.set(j, true);
    }

    // agreement bookkeeping: need agree(i) >= (1-eps)*d, integer-exact
    const uint64_t need_num = uint64_t(params.eps_den - params.eps_num) * d;  // agree*den >= need_num
    auto meets = [&](uint64_t agree) { return agree * params.eps_den >= need_num; };

    std::vector<uint32_t> agree(left, 0);
    for (uint64_t i = 0; i < left; ++i) {
        uint32_t a = 0;
        for (uint64_t jj = 0; jj < d; ++jj) a += (y.get(g.adj[i * d + jj]) == (x[i] != 0));
        agree[i] = a;
    }

    std::vector<uint64_t> violating;
    for (uint64_t i = 0; i < left; ++i)
        if (!meets(agree[i])) violating.push_back(i);

    auto deficit = [&](uint64_t i) -> int64_t {
        // smallest integer a with meets(a), minus current agreement
        uint64_t need = (need_num + params.eps_den - 1) / params.eps_den;
        return int64_t(need) - int64_t(agree[i]);
    };

    uint64_t flips = 0;
    while (!violating.empty()) {
        uint64_t i = violating.back();
        if (meets(agree[i])) {
            violating.pop_back();
            continue;
        }
        if (++flips > pass_budget) return std::nullopt;

        // choose the disagreeing neighbor whose flip reduces total deficit most
        int64_t best_delta = INT64_MAX;
        uint32_t best_j = UINT32_MAX;
        for (uint64_t jj = 0; jj < d; ++jj) {
            uint32_t j = g.adj[i * d + jj];
            if (y.get(j) == (x[i] != 0)) continue;
            int64_t delta = 0;
            for (uint32_t t = rev_off[j]; t < rev_off[j + 1]; ++t) {
                uint32_t iv = rev[t];
                bool now_agrees = (y.get(j) == (x[iv] != 0));
                int64_t before = std::max<int64_t>(0, deficit(iv));
                int64_t after_agree = int64_t(agree[iv]) + (now_agrees ? -1 : +1);
                uint64_t need = (need_num + params.eps_den - 1) / params.eps_den;
                int64_t after = std::max<int64_t>(0, int64_t(need) - after_agree);
                delta += after - before;
            }
            if (delta < best_delta) {
                best_delta = delta;
                best_j = j;
            }
        }
        if (best_j == UINT32_MAX) return std::nullopt;  // no disagreeing neighbor; unrepairable

        bool newv = !y.get(best_j);
        y.set(best_j, newv);
        for (uint32_t t = rev_off[best_j]; t < rev_off[best_j + 1]; ++t) {
            uint32_t iv = rev[t];
            bool agrees_now = (newv == (x[iv] != 0));
            if (agrees_now)
                ++agree[iv];
            else {
                --agree[iv];
                if (!meets(agree[iv])) violating.push_back(iv);
            }
        }
    }

    // acceptance gate: exhaustive re-check
    for (uint64_t i = 0; i < left; ++i) {
        uint32_t a = 0;
        for (uint64_t jj = 0; jj < d; ++jj) a += (y.get(g.adj[i * d + jj]) == (x[i] != 0));
        if (!meets(a)) return std::nullopt;
    }
    return y;
}

std::shared_ptr<MembershipStructure> MembershipStructure::build(std::vector<uint64_t> set,
                                                                MemParams params, uint64_t seed) {
    params.validate();
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (set.size() > params.s) throw std::invalid_argument("mem build: |S| exceeds s");
    for (uint64_t v : set)
        if (v >= params.n) throw std::invalid_argument("mem build: set member outside universe");

    constexpr unsigned kExpanderAttempts = 16;
    for (unsigned attempt = 0; attempt < kExpanderAttempts; ++attempt) {
        uint64_t eseed = splitmix64(seed ^ (uint64_t(attempt) << 32));
        ExpanderGraph g = build_expander(params, eseed);
        auto votes = vote_assignment(set, g, params);
        if (!votes) continue;
        Partition part;
        try {
            part = build_partition(g, params, splitmix64(eseed + 1));
        } catch (const std::runtime_error&) {
            continue;
        }

        auto st = std::shared_ptr<MembershipStructure>(new MembershipStructure());
        st->params_ = params;
        st->set_ = std::move(set);
        st->graph_ = std::move(g);
        st->part_ = std::move(part);
        st->votes_ = std::move(*votes);
        st->seed_ = seed;
        st->rldc_ = make_rldc_scheme(params.bin_size());
        st->bin_code_bits_ = st->rldc_.codeword_bits;

        // per-bin messages in ascending-vertex order, padding vertices read 0
        const uint64_t b = params.bins();
        const uint64_t bs = params.bin_size();
        BitWord enc(b * st->bin_code_bits_);
        {
            std::vector<BitWord> msgs;
            msgs.reserve(b);
            for (uint64_t k = 0; k < b; ++k) msgs.emplace_back(bs);
            for (uint64_t v = 0; v < params.padded_vote_bits(); ++v) {
                bool bit = v < st->votes_.size() && st->votes_.get(v);
                if (bit) msgs[st->part_.bin_of[v]].set(st->part_.pos_in_bin[v], true);
            }
            for (uint64_t k = 0; k < b; ++k) {
                BitWord cw = rldc_encode(msgs[k], st->rldc_);
                for (uint64_t t = 0; t < cw.size(); ++t)
                    if (cw.get(t)) enc.set(k * st->bin_code_bits_ + t, true);
            }
        }
        st->encoded_ = std::move(enc);
        st->index_neighbors();
        return st;
    }
    throw std::runtime_error("mem build: construction gates failed after expander retries");
}

void MembershipStructure::index_neighbors() {
    const uint64_t n = params_.n;
    const uint64_t d = graph_.degree;
    probe_index_.resize(n * d);
    probe_offset_.assign(n + 1, 0);
    for (uint64_t i = 0; i < n; ++i) {
        const uint32_t* nb = graph_.neighbors(i);
        for (uint64_t j = 0; j < d; ++j)
            probe_index_[i * d + j] = {part_.bin_of[nb[j]], part_.pos_in_bin[nb[j]]};
        std::sort(probe_index_.begin() + i * d, probe_index_.begin() + (i + 1) * d);
        probe_offset_[i] = i * d;
    }
    probe_offset_[n] = n * d;
}

DsContract MembershipStructure::contract() const {
    DsContract c;
    c.probes = uint64_t(reps_) * rldc_.block->codeword_bits();
    c.delta = measured_tau();
    c.epsilon = 0.49;
    c.lambda = double(params_.s) / double(2 * params_.n);
    c.length = encoded_.size();
    return c;
}

uint64_t MembershipStructure::truth(uint64_t query) const {
    if (query >= params_.n) throw std::out_of_range("mem: query out of range");
    return std::binary_search(set_.begin(), set_.end(), query) ? 1 : 0;
}

Outcome<uint64_t> MembershipStructure::decode_once(ProbeView& view, uint64_t i,
                                                   RandomSource& rng) const {
    const uint64_t b = params_.bins();
    uint64_t k = rng.uniform(b);
    // occurrences of bin k among i's neighbors
    auto lo = probe_index_.begin() + i * graph_.degree;
    auto hi = probe_index_.begin() + (i + 1) * graph_.degree;
    auto range = std::equal_range(lo, hi, std::make_pair(uint32_t(k), uint32_t(0)),
                                  [](const auto& a, const auto& b2) { return a.first < b2.first; });
    if (range.second - range.first != 1) {
        return Outcome<uint64_t>::answer(rng.coin() ? 1 : 0);  // never bottom on this branch
    }
    uint32_t pos = range.first->second;
    ProbeView bin_view = view.subview(k * bin_code_bits_, bin_code_bits_);
    auto bit = rldc_decode_bit(bin_view, pos, rldc_, rng);
    if (bit.is_bottom()) return Outcome<uint64_t>::bottom();
    return Outcome<uint64_t>::answer(uint64_t(bit.value()));
}

Outcome<uint64_t> MembershipStructure::decode(ProbeView& view, uint64_t query,
                                              RandomSource& rng) const {
    if (query >= params_.n) throw std::out_of_range("mem: query out of range");
    if (reps_ <= 1) return decode_once(view, query, rng);

    // amplification: majority over the unique-intersection branches only;
    // the random-bit branch casts no vote
    uint64_t c0 = 0, c1 = 0;
    for (unsigned r = 0; r < reps_; ++r) {
        const uint64_t b = params_.bins();
        uint64_t k = rng.uniform(b);
        auto lo = probe_index_.begin() + query * graph_.degree;
        auto hi = probe_index_.begin() + (query + 1) * graph_.degree;
        auto range = std::equal_range(lo, hi, std::make_pair(uint32_t(k), uint32_t(0)),
                                      [](const auto& a, const auto& b2) { return a.first < b2.first; });
        if (range.second - range.first != 1) {
            rng.coin();  // keep the stream aligned with the single-shot decoder
            continue;
        }
        uint32_t pos = range.first->second;
        ProbeView bin_view = view.subview(k * bin_code_bits_, bin_code_bits_);
        auto bit = rldc_decode_bit(bin_view, pos, rldc_, rng);
        if (bit.is_bottom()) continue;
        (bit.value() ? c1 : c0)++;
    }
    if (c0 == c1) return Outcome<uint64_t>::bottom();
    return Outcome<uint64_t>::answer(c1 > c0 ? 1 : 0);
}

double MembershipStructure::measured_tau() const {
    // Any f flips ruin at most floor(f/(radius+1)) blocks, each losing
    // block-size indices; keep that below s*d/40.
    const uint64_t kb = rldc_.block->message_bits();
    const uint64_t rp1 = rldc_.accept_radius + 1;
    const uint64_t sd = params_.s * graph_.degree;
    if (sd <= 1) return 0.0;
    uint64_t q_max = (sd - 1) / (40 * kb);  // largest q with 40*kb*q < sd
    uint64_t f_max = rp1 * q_max + rp1 - 1;
    return double(f_max) / double(encoded_.size());
}

std::vector<uint64_t> MembershipStructure::probe_pool(uint64_t i) const {
    std::vector<uint64_t> pool;
    const unsigned nb = rldc_.block->codeword_bits();
    const unsigned kb = rldc_.block->message_bits();
    auto lo = probe_index_.begin() + i * graph_.degree;
    auto hi = probe_index_.begin() + (i + 1) * graph_.degree;
    for (auto it = lo; it != hi;) {
        auto next = it + 1;
        bool unique = (next == hi || next->first != it->first) && (it == lo || (it - 1)->first != it->first);
        if (unique) {
            uint64_t block = it->second / kb;
            uint64_t base = uint64_t(it->first) * bin_code_bits_ + block * nb;
            for (unsigned t = 0; t < nb; ++t) pool.push_back(base + t);
        }
        it = next;
    }
    return pool;
}

CorruptionContext MembershipStructure::corruption_context() const {
    CorruptionContext ctx;
    ctx.block_bits = rldc_.block->codeword_bits();
    ctx.query_count = params_.n;
    ctx.probe_pool = [this](uint64_t q) { return probe_pool(q); };
    return ctx;
}

MemDiagnostics MembershipStructure::diagnose(const BitWord& word) const {
    if (word.size() != encoded_.size()) throw std::invalid_argument("diagnose: word length mismatch");
    MemDiagnostics d;
    const uint64_t b = params_.bins();
    d.delta = double(hamming_distance(word, encoded_)) / double(word.size());

    d.bin_error_rate.resize(b);
    for (uint64_t k = 0; k < b; ++k) {
        uint64_t errs = 0;
        for (uint64_t t = 0; t < bin_code_bits_; ++t)
            errs += word.get(k * bin_code_bits_ + t) != encoded_.get(k * bin_code_bits_ + t);
        d.bin_error_rate[k] = double(errs) / double(bin_code_bits_);
        if (d.bin_error_rate[k] > params_.bin_noise_factor() * d.delta && errs > 0)
            d.noisy_bins.push_back(uint32_t(k));
    }

    // bad right vertices: block decode differs from the vote bit (the
    // reference decoder is deterministic, so one decode per block suffices)
    ProbeSession session(word);
    const unsigned kb = rldc_.block->message_bits();
    std::vector<std::vector<Outcome<uint64_t>>> blocks(b);
    for (uint64_t k = 0; k < b; ++k) {
        session.begin_call();
        ProbeView view(session);
        ProbeView bin_view = view.subview(k * bin_code_bits_, bin_code_bits_);
        blocks[k].reserve(rldc_.num_blocks);
        for (uint64_t blk = 0; blk < rldc_.num_blocks; ++blk)
            blocks[k].push_back(rldc_decode_block(bin_view, blk, rldc_));
    }
    for (uint64_t v = 0; v < graph_.right; ++v) {
        uint32_t k = part_.bin_of[v], pos = part_.pos_in_bin[v];
        const auto& blk = blocks[k][pos / kb];
        bool bad = blk.is_bottom() || (((blk.value() >> (pos % kb)) & 1u) != uint64_t(votes_.get(v)));
        if (bad) d.bad_indices.push_back(uint32_t(v));
    }

    d.heavy_queries = [&] {
        std::vector<uint32_t> heavy;
        std::vector<uint8_t> in_a(part_.bin_of.size(), 0);
        for (uint32_t v : d.bad_indices) in_a[v] = 1;
        for (uint64_t i = 0; i < params_.n; ++i) {
            uint64_t hits = 0;
            const uint32_t* nb = graph_.neighbors(i);
            for (uint64_t j = 0; j < graph_.degree; ++j) hits += in_a[nb[j]];
            if (hits * 10 >= graph_.degree) heavy.push_back(uint32_t(i));
        }
        return heavy;
    }();
    d.good_count = params_.n - d.heavy_queries.size();
    d.heavy_below_half_s = 2 * d.heavy_queries.size() < params_.s;

    auto singles = singleton_bin_counts(graph_, part_, params_.n);
    d.beta.resize(params_.n);
    for (uint64_t i = 0; i < params_.n; ++i) d.beta[i] = double(singles[i]) / double(b);
    return d;
}

uint64_t MembershipStructure::heavy_query_count(const std::vector<uint32_t>& bad_set) const {
    std::vector<uint8_t> in_a(graph_.right, 0);
    for (uint32_t v : bad_set)
        if (v < graph_.right) in_a[v] = 1;
    uint64_t heavy = 0;
    for (uint64_t i = 0; i < params_.n; ++i) {
        uint64_t hits = 0;
        const uint32_t* nb = graph_.neighbors(i);
        for (uint64_t j = 0; j < graph_.degree; ++j) hits += in_a[nb[j]];
        if (hits * 10 >= graph_.degree) ++heavy;
    }
    return heavy;
}

Container MembershipStructure::to_container() const {
    Container c;
    c.kind = ContainerKind::membership;
    c.put_u64("n", params_.n);
    c.put_u64("s", params_.s);
    c.put_u64("eps_num", params_.eps_num);
    c.put_u64("eps_den", params_.eps_den);
    c.put_u64("scale", params_.scale);
    c.put_u64("seed", seed_);
    c.put_u64("expander_seed", graph_.seed);
    c.put_u64("partition_seed", part_.seed);
    c.put_u64("reps", reps_);
    c.put("block_code", rldc_.block->name());
    std::ostringstream items;
    for (std::size_t i = 0; i < set_.size(); ++i) {
        if (i) items << ',';
        items << set_[i];
    }
    c.put("set", items.str());
    c.word = encoded_;
    return c;
}

std::shared_ptr<MembershipStructure> MembershipStructure::from_container(const Container& c) {
    if (c.kind != ContainerKind::membership)
        throw std::invalid_argument("from_container: not a membership container");
    MemParams p;
    p.n = c.meta_u64("n");
    p.s = c.meta_u64("s");
    p.eps_num = unsigned(c.meta_u64("eps_num"));
    p.eps_den = unsigned(c.meta_u64("eps_den"));
    p.scale = unsigned(c.meta_u64("scale"));
    std::vector<uint64_t> set;
    {
        std::istringstream in(c.meta("set"));
        std::string tok;
        while (std::getline(in, tok, ','))
            if (!tok.empty()) set.push_back(std::stoull(tok));
    }
    auto st = build(std::move(set), p, c.meta_u64("seed"));
    st->set_repetitions(unsigned(c.meta_u64("reps")));
    // seeds recorded at build time must reproduce the same structure
    if (st->graph_.seed != c.meta_u64("expander_seed") ||
        st->part_.seed != c.meta_u64("partition_seed"))
        throw std::runtime_error("from_container: seeds do not reproduce the recorded structure");
    return st;
}

}  // namespace ecds::mem
