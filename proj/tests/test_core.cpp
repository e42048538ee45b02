#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ecds/bitword.hpp"
#include "ecds/container.hpp"
#include "ecds/corrupt.hpp"
#include "ecds/measure.hpp"
#include "ecds/probe.hpp"
#include "ecds/random.hpp"

using namespace ecds;

namespace {

BitWord from_string(const std::string& s) {
    BitWord w(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] == '1') w.set(i, true);
    return w;
}

}  // namespace

TEST_CASE("hamming distance on fixed words") {
    CHECK(hamming_distance(from_string("0000"), from_string("0000")) == 0);
    CHECK(hamming_distance(from_string("0000"), from_string("1111")) == 4);
    CHECK(hamming_distance(from_string("10110"), from_string("10011")) == 2);
    CHECK_THROWS_AS(hamming_distance(from_string("00"), from_string("000")), std::invalid_argument);
}

TEST_CASE("bitword span access and bounds") {
    BitWord w(130);
    w.set(0, true);
    w.set(64, true);
    w.set(129, true);
    CHECK(w.get_span(0, 2) == 1);
    CHECK(w.get_span(63, 2) == 2);
    CHECK(w.get(129));
    CHECK_THROWS_AS(w.get(130), std::out_of_range);
    CHECK_THROWS_AS(w.get_span(120, 11), std::out_of_range);

    auto bytes = w.to_bytes();
    BitWord back = BitWord::from_bytes(bytes, w.size());
    CHECK(back == w);
}

TEST_CASE("random source reproducibility and children") {
    RandomSource a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    RandomSource c = a.child(7), d_src = b.child(7);
    CHECK(c.next_u64() == d_src.next_u64());
    RandomSource e = a.child(8);
    CHECK(c.seed() != e.seed());
}

TEST_CASE("corrupt: zero budget is identity") {
    BitWord w = from_string("1010101");
    CorruptionSpec spec;
    spec.budget = 0;
    CHECK(corrupt(w, spec) == w);
}

TEST_CASE("corrupt: uniform budget lands exactly") {
    BitWord w(5);
    CorruptionSpec spec;
    spec.budget = 2;
    spec.seed = 7;
    BitWord out = corrupt(w, spec);
    CHECK(hamming_distance(w, out) == 2);
    // determinism
    CHECK(corrupt(w, spec) == out);
    CHECK_THROWS_AS(corrupt(w, CorruptionSpec{.budget = 6}), std::invalid_argument);
}

TEST_CASE("corrupt: targeted block keeps flips inside one block") {
    BitWord w(240);
    CorruptionSpec spec;
    spec.strategy = CorruptStrategy::targeted_block;
    spec.budget = 10;
    spec.seed = 3;
    CorruptionContext ctx;
    ctx.block_bits = 24;
    BitWord out = corrupt(w, spec, ctx);
    CHECK(hamming_distance(w, out) == 10);
    std::size_t first = 0, last = 0;
    bool seen = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w.get(i) != out.get(i)) {
            if (!seen) first = i;
            last = i;
            seen = true;
        }
    }
    REQUIRE(seen);
    CHECK(first / 24 == last / 24);
}

TEST_CASE("corrupt: worst-of-k maximizes the evaluator and is seeded") {
    BitWord w(64);
    CorruptionSpec spec;
    spec.strategy = CorruptStrategy::worst_of_k;
    spec.budget = 4;
    spec.seed = 11;
    spec.k = 8;
    CorruptionContext ctx;
    // failure = flips in the low half
    ctx.failure_eval = [&](const BitWord& cand) {
        uint64_t f = 0;
        for (std::size_t i = 0; i < 32; ++i) f += cand.get(i) != w.get(i);
        return f;
    };
    BitWord best = corrupt(w, spec, ctx);
    uint64_t best_score = ctx.failure_eval(best);
    for (unsigned c = 0; c < spec.k; ++c) {
        CorruptionSpec one = spec;
        one.strategy = CorruptStrategy::uniform_random;
        one.seed = splitmix64(spec.seed + c);
        CHECK(ctx.failure_eval(corrupt(w, one)) <= best_score);
    }
    CHECK(corrupt(w, spec, ctx) == best);
}

TEST_CASE("probe sessions count distinct positions only") {
    BitWord w(100);
    w.set(3, true);
    ProbeSession s(w);
    s.begin_call();
    ProbeView v(s);
    CHECK(v.read(3));
    CHECK(v.read(3));
    v.read(4);
    CHECK(s.distinct_probes() == 2);
    s.begin_call();
    CHECK(s.distinct_probes() == 0);
    ProbeView sub = v.subview(10, 20);
    sub.read(0);
    CHECK(s.distinct_probes() == 1);
    CHECK_THROWS_AS(sub.read(20), std::out_of_range);
}

TEST_CASE("container byte layout is pinned") {
    Container c;
    c.kind = ContainerKind::raw;
    c.put("k", "v");
    c.word = from_string("10100000001");  // 11 bits
    auto bytes = c.serialize();
    const std::vector<uint8_t> expect = {
        'E', 'C', 'D', 'S', 1, 3, 4, 0, 0, 0, 'k', '=', 'v', '\n', 11, 0, 0, 0, 0, 0, 0, 0,
        0b00000101, 0b00000100};
    CHECK(bytes == expect);
    Container back = Container::deserialize(bytes);
    CHECK(back.kind == ContainerKind::raw);
    CHECK(back.meta("k") == "v");
    CHECK(back.word == c.word);
}

TEST_CASE("container rejects malformed input") {
    Container c;
    c.word = BitWord(8);
    auto bytes = c.serialize();
    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS(Container::deserialize(bad));
    bad = bytes;
    bad[4] = 9;
    CHECK_THROWS(Container::deserialize(bad));
    bad = bytes;
    bad.pop_back();
    CHECK_THROWS(Container::deserialize(bad));
}

namespace {

/// Toy structure: identity encoding of 8 bits, decoder reads one bit.
struct ToyStructure final : Structure {
    BitWord word;
    ToyStructure() : word(8) {
        for (int i = 0; i < 8; i += 2) word.set(std::size_t(i), true);
    }
    DsContract contract() const override { return {.probes = 1, .delta = 0.1, .epsilon = 0.1, .lambda = 0.0, .length = 8}; }
    const BitWord& encoded() const override { return word; }
    uint64_t query_count() const override { return 8; }
    Outcome<uint64_t> decode(ProbeView& v, uint64_t q, RandomSource&) const override {
        return Outcome<uint64_t>::answer(v.read(q) ? 1 : 0);
    }
    uint64_t truth(uint64_t q) const override { return word.get(q) ? 1 : 0; }
};

}  // namespace

TEST_CASE("measure_contract: zero noise reaches full good set within probe budget") {
    ToyStructure toy;
    std::vector<uint64_t> queries{0, 1, 2, 3, 4, 5, 6, 7};
    RandomSource rng(5);
    auto rep = measure_contract(toy, queries, CorruptionSpec{}, 16, rng);
    CHECK(rep.good_fraction == 1.0);
    CHECK(rep.min_success == 1.0);
    CHECK(rep.max_probes <= toy.contract().probes);
    CHECK(rep.flipped_bits == 0);
}

TEST_CASE("measure_contract: corruption shows up and scheduling does not matter") {
    ToyStructure toy;
    std::vector<uint64_t> queries{0, 1, 2, 3, 4, 5, 6, 7};
    CorruptionSpec spec;
    spec.budget = 2;
    spec.seed = 9;
    RandomSource rng1(5), rng2(5);
    auto rep1 = measure_contract(toy, queries, spec, 8, rng1);
    auto rep2 = measure_contract(toy, queries, spec, 8, rng2);
    CHECK(rep1.flipped_bits == 2);
    CHECK(rep1.good_fraction == doctest::Approx(0.75));
    for (std::size_t i = 0; i < queries.size(); ++i)
        CHECK(rep1.per_query[i].success_rate == rep2.per_query[i].success_rate);
}
