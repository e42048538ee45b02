#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ecds/membership.hpp"

using namespace ecds;
using namespace ecds::mem;

namespace {

MemParams test_params() {
    MemParams p;
    p.n = 64;
    p.s = 4;
    p.scale = 10;  // scaled constants: fast, non-conforming instance
    return p;
}

std::shared_ptr<MembershipStructure> shared_structure() {
    static auto st = MembershipStructure::build({3, 17, 42, 63}, test_params(), 1001);
    return st;
}

}  // namespace

TEST_CASE("parameter derivation") {
    MemParams p;
    p.n = 512;
    p.s = 8;
    p.validate();
    CHECK(p.universe() == 10240);
    CHECK(p.degree() == 134);
    CHECK(p.bins() == 134);
    CHECK(p.bin_size() == 8000);
    CHECK(p.vote_bits() == 1065755);
    CHECK(p.padded_vote_bits() == 1072000);

    MemParams q = test_params();
    q.validate();
    CHECK(q.bin_size() == 400);
    CHECK(q.padded_vote_bits() >= q.vote_bits());
}

TEST_CASE("expander: exact degree, distinct neighbors, determinism") {
    auto p = test_params();
    auto g1 = build_expander(p, 7);
    auto g2 = build_expander(p, 7);
    auto g3 = build_expander(p, 8);
    CHECK(g1.adj == g2.adj);
    CHECK(g1.adj != g3.adj);
    for (uint64_t i = 0; i < g1.left; ++i) {
        std::set<uint32_t> nb(g1.neighbors(i), g1.neighbors(i) + g1.degree);
        CHECK(nb.size() == g1.degree);
        for (uint32_t v : nb) CHECK(v < g1.right);
    }
}

TEST_CASE("expander: sampled neighborhood expansion") {
    auto p = test_params();
    auto g = build_expander(p, 7);
    RandomSource rng(5);
    const uint64_t max_set = std::min<uint64_t>(2 * p.s, 12);
    uint64_t good = 0;
    const int samples = 2000;
    for (int t = 0; t < samples; ++t) {
        uint64_t size = 1 + rng.uniform(max_set);
        std::set<uint64_t> S;
        while (S.size() < size) S.insert(rng.uniform(g.left));
        std::set<uint32_t> gamma;
        for (uint64_t i : S) gamma.insert(g.neighbors(i), g.neighbors(i) + g.degree);
        // |Gamma(S)| >= (1 - eps/2)|S|d with eps = 1/10
        if (20 * uint64_t(gamma.size()) >= 19 * size * g.degree) ++good;
    }
    CHECK(double(good) / samples >= 0.99);
}

TEST_CASE("vote assignment: empty set gives the zero word") {
    auto p = test_params();
    auto g = build_expander(p, 7);
    auto y = vote_assignment({}, g, p);
    REQUIRE(y.has_value());
    for (std::size_t j = 0; j < y->size(); ++j) CHECK_FALSE(y->get(j));
}

TEST_CASE("vote assignment: acceptance gate holds for every left vertex") {
    auto p = test_params();
    auto g = build_expander(p, 7);
    std::vector<uint64_t> S{1, 5, 40, 63};
    auto y = vote_assignment(S, g, p);
    REQUIRE(y.has_value());
    std::set<uint64_t> in_set(S.begin(), S.end());
    uint64_t worst = g.degree;
    for (uint64_t i = 0; i < g.left; ++i) {
        bool want = i < p.n && in_set.count(i);
        uint64_t agree = 0;
        for (uint64_t j = 0; j < g.degree; ++j)
            agree += y->get(g.neighbors(i)[j]) == want;
        worst = std::min(worst, agree);
        CHECK(agree * p.eps_den >= uint64_t(p.eps_den - p.eps_num) * g.degree);
    }
    // the gate is the check above; worst tracks the observed margin
    CHECK(worst * p.eps_den >= uint64_t(p.eps_den - p.eps_num) * g.degree);
}

TEST_CASE("partition: bins are exact, property holds, determinism") {
    auto p = test_params();
    auto g = build_expander(p, 7);
    auto part = build_partition(g, p, 21);
    auto part2 = build_partition(g, p, 21);
    CHECK(part.bin_of == part2.bin_of);
    CHECK(part.seed == part2.seed);

    std::vector<uint64_t> sizes(part.bins, 0);
    for (uint64_t v = 0; v < p.padded_vote_bits(); ++v) {
        REQUIRE(part.bin_of[v] < part.bins);
        ++sizes[part.bin_of[v]];
    }
    for (uint64_t k = 0; k < part.bins; ++k) CHECK(sizes[k] == part.bin_size);

    auto singles = singleton_bin_counts(g, part, p.n);
    for (uint64_t i = 0; i < p.n; ++i) CHECK(4 * uint64_t(singles[i]) >= part.bins);
}

TEST_CASE("structure: zero-noise completeness") {
    auto st = shared_structure();
    const auto& p = st->params();
    CHECK(st->encoded().size() == p.bins() * st->bin_codeword_bits());

    // per-query empirical success under the single-shot decoder clears 1-eps
    RandomSource rng(3);
    auto queries = std::vector<uint64_t>{0, 3, 17, 42, 63, 31};
    auto rep = measure_on_word(*st, st->encoded(), queries, 600, rng);
    CHECK(rep.good_fraction == 1.0);
    CHECK(rep.min_ok >= 0.45);  // random-bit branch can answer wrong, never bottom at zero noise
    CHECK(rep.max_probes <= st->contract().probes);

    // amplified decoder answers everything correctly
    auto amp = MembershipStructure::from_container(st->to_container());
    amp->set_repetitions(64);
    RandomSource rng2(4);
    ProbeSession session(amp->encoded());
    for (uint64_t i = 0; i < p.n; ++i) {
        for (int t = 0; t < 20; ++t) {
            session.begin_call();
            ProbeView v(session);
            auto out = amp->decode(v, i, rng2);
            REQUIRE(out.is_answer());
            CHECK(out.value() == amp->truth(i));
        }
    }
}

TEST_CASE("structure: noisy contract at half the measured tau") {
    auto st = shared_structure();
    double tau = st->measured_tau();
    CHECK(tau > 0.0);
    CorruptionSpec spec;
    spec.strategy = CorruptStrategy::worst_of_k;
    spec.k = 8;
    spec.seed = 99;
    spec.budget = std::max<uint64_t>(1, uint64_t(tau / 2 * double(st->encoded().size())));

    std::vector<uint64_t> queries;
    for (uint64_t i = 0; i < st->params().n; ++i) queries.push_back(i);
    RandomSource rng(17);
    auto rep = measure_contract(*st, queries, spec, 400, rng);
    CHECK(rep.flipped_bits <= spec.budget);
    CHECK(rep.min_ok >= 0.624 - 0.05);
    uint64_t good = 0;
    for (auto& qs : rep.per_query)
        if (qs.success_rate >= 0.51 - 0.05) ++good;
    CHECK(double(good) >= (1.0 - double(st->params().s) / double(2 * st->params().n)) *
                              double(queries.size()));
}

TEST_CASE("diagnostics: clean word, beta lower bound, bad-set audit") {
    auto st = shared_structure();
    auto d = st->diagnose(st->encoded());
    CHECK(d.bad_indices.empty());
    CHECK(d.heavy_queries.empty());
    CHECK(d.good_count == st->params().n);
    CHECK(d.heavy_below_half_s);
    for (double b : d.beta) CHECK(b >= 0.25);

    // a ruined block shows up as 12 bad vote positions
    BitWord word = st->encoded();
    for (unsigned t = 0; t < 24; ++t) word.flip(t);
    auto d2 = st->diagnose(word);
    CHECK(d2.bad_indices.size() <= 12);
    CHECK_FALSE(d2.bad_indices.empty());
}

TEST_CASE("heavy-query count stays below s/2 for admissible bad sets") {
    auto st = shared_structure();
    const auto& g = st->graph();
    uint64_t sd40 = st->params().s * g.degree / 40;
    RandomSource rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        std::set<uint32_t> A;
        uint64_t size = 1 + rng.uniform(std::max<uint64_t>(1, sd40 - 1));
        if (trial % 4 == 0) {
            // concentrate on a single neighborhood
            uint64_t i0 = rng.uniform(st->params().n);
            while (A.size() < size) A.insert(g.neighbors(i0)[rng.uniform(g.degree)]);
        } else {
            while (A.size() < size) A.insert(uint32_t(rng.uniform(g.right)));
        }
        CHECK(2 * st->heavy_query_count({A.begin(), A.end()}) < st->params().s);
    }
}

TEST_CASE("container round trip rebuilds an identical structure") {
    auto st = shared_structure();
    Container c = st->to_container();
    auto bytes = c.serialize();
    Container back = Container::deserialize(bytes);
    auto st2 = MembershipStructure::from_container(back);
    CHECK(st2->encoded() == st->encoded());
    CHECK(st2->vote_word() == st->vote_word());
    CHECK(st2->set() == st->set());
}

TEST_CASE("probe pool covers exactly the singleton blocks") {
    auto st = shared_structure();
    auto pool = st->probe_pool(3);
    CHECK(!pool.empty());
    CHECK(pool.size() % 24 == 0);
    for (uint64_t p : pool) CHECK(p < st->encoded().size());
}

TEST_CASE("build rejects bad arguments") {
    auto p = test_params();
    CHECK_THROWS_AS(MembershipStructure::build({1, 2, 3, 4, 5}, p, 1), std::invalid_argument);
    CHECK_THROWS_AS(MembershipStructure::build({64}, p, 1), std::invalid_argument);
    MemParams bad = p;
    bad.s = 0;
    CHECK_THROWS_AS(MembershipStructure::build({}, bad, 1), std::invalid_argument);
}
