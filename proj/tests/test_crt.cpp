#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ecds/crt.hpp"
#include "ecds/random.hpp"

using namespace ecds;
using namespace ecds::crt;

namespace {

CrtBasis small_basis() {
    CrtBasis b;
    b.primes = {101, 103, 107, 109, 113};
    b.K = 2;
    b.T = 101 * 103;  // 10403
    b.validate();
    return b;
}

ResidueWord word_of(const std::vector<int64_t>& symbols) {
    ResidueWord w;
    for (int64_t s : symbols) {
        if (s < 0)
            w.symbols.emplace_back(std::nullopt);
        else
            w.symbols.emplace_back(uint64_t(s));
    }
    return w;
}

}  // namespace

TEST_CASE("prime indexing is 1-based") {
    auto p = nth_primes(1, 10);
    CHECK(p == std::vector<uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK(nth_primes(55, 55)[0] == 257);
    CHECK(nth_primes(164, 164)[0] == 971);
}

TEST_CASE("select_primes matches the derived example at T = 2^20") {
    mpz_class T = mpz_class(1) << 20;
    CrtBasis b = select_primes(T);
    CHECK(b.K == 55);
    CHECK(b.N() == 110);
    CHECK(b.primes.front() == 257);   // 55th prime
    CHECK(b.primes.back() == 971);    // 164th prime
    for (uint64_t p : b.primes) {
        CHECK(p > 20);
        CHECK(p < 10000);
    }
    // rate exactly 1/2
    CHECK(b.N() == 2 * b.K);
    // ell-th prime bounds: q_K > K log2(K) / 6 and q_{3K-1} < 13 (3K-1) log2(3K-1)
    long double lo = (long double)b.K * std::log2((long double)b.K) / 6.0L;
    long double hi = 13.0L * (3.0L * b.K - 1) * std::log2(3.0L * b.K - 1);
    CHECK((long double)b.primes.front() > lo);
    CHECK((long double)b.primes.back() < hi);
}

TEST_CASE("select_primes rejects tiny T") {
    CHECK_THROWS_AS(select_primes(mpz_class(7)), std::invalid_argument);
}

TEST_CASE("crt encode: fixed examples") {
    CrtBasis b;
    b.primes = {3, 5, 7, 11};
    b.K = 3;
    b.T = 105;
    b.validate();
    // m = 23 against primes (3, 5, 7) reduces to (2, 3, 2)
    auto w = encode(mpz_class(23), b);
    CHECK(*w.symbols[0] == 2);
    CHECK(*w.symbols[1] == 3);
    CHECK(*w.symbols[2] == 2);

    // all-zero message
    auto z = encode(mpz_class(0), b);
    for (auto& s : z.symbols) CHECK(*s == 0);

    auto big = small_basis();
    auto w2 = encode(mpz_class(5000), big);
    CHECK(*w2.symbols[0] == 51);
    CHECK(*w2.symbols[1] == 56);
    CHECK(*w2.symbols[2] == 78);
    CHECK(*w2.symbols[3] == 95);
    CHECK(*w2.symbols[4] == 28);

    CHECK_THROWS_AS(encode(mpz_class(10403), big), std::invalid_argument);
}

TEST_CASE("unique decode: clean word and single error at the radius") {
    auto b = small_basis();
    CHECK(decode_radius(b, 0) == 1);

    auto w = encode(5000, b);
    auto out = decode_unique(w, b);
    REQUIRE(out.is_answer());
    CHECK(out.value() == 5000);

    w.symbols[2] = 13;  // corrupt one residue
    out = decode_unique(w, b);
    REQUIRE(out.is_answer());
    CHECK(out.value() == 5000);
}

TEST_CASE("unique decode: erasure guard at 1/16") {
    auto b = small_basis();
    auto w = encode(123, b);
    w.symbols[4].reset();  // 1/5 erased > 1/16
    CHECK(decode_unique(w, b).is_bottom());
}

TEST_CASE("unique decode handles erasures inside the guard") {
    mpz_class T = mpz_class(1) << 16;
    CrtBasis b = select_primes(T);
    RandomSource rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        mpz_class m = rng.uniform(1u << 16);
        auto w = encode(m, b);
        std::size_t s = rng.uniform(b.N() / 16 + 1);  // within the guard
        std::set<std::size_t> erased;
        while (erased.size() < s) erased.insert(rng.uniform(b.N()));
        for (auto i : erased) w.symbols[i].reset();
        std::size_t radius = decode_radius(b, s);
        std::size_t e = rng.uniform(radius + 1);
        std::set<std::size_t> wrong;
        while (wrong.size() < e) {
            std::size_t i = rng.uniform(b.N());
            if (!erased.count(i)) wrong.insert(i);
        }
        for (auto i : wrong) *w.symbols[i] = (*w.symbols[i] + 1 + rng.uniform(b.primes[i] - 1)) % b.primes[i];
        auto out = decode_unique(w, b);
        REQUIRE(out.is_answer());
        CHECK(out.value() == m);
    }
}

TEST_CASE("exhaustive soundness on a tiny basis; decoder matches the oracle") {
    CrtBasis b;
    b.primes = {11, 13, 17, 19, 23};
    b.K = 2;
    b.T = 143;
    b.validate();
    std::size_t radius = decode_radius(b, 0);
    CHECK(radius >= 1);
    for (uint64_t m = 0; m < 143; ++m) {
        auto clean = encode(m, b);
        for (std::size_t i = 0; i < b.N(); ++i) {
            for (uint64_t wrong = 0; wrong < b.primes[i]; ++wrong) {
                if (wrong == *clean.symbols[i]) continue;
                auto w = clean;
                *w.symbols[i] = wrong;
                auto out = decode_unique(w, b);
                REQUIRE(out.is_answer());
                CHECK(out.value() == m);
                auto [om, od] = decode_bruteforce(w, b);
                CHECK(om == m);
                CHECK(od == 1);
            }
        }
    }
}

TEST_CASE("oracle tie-break goes to the smaller message") {
    CrtBasis b;
    b.primes = {3, 5};
    b.K = 1;
    b.T = 3;
    b.validate();
    // received (0, 1): m=0 encodes (0,0), m=1 encodes (1,1); both disagree once
    auto w = word_of({0, 1});
    auto [m, d] = decode_bruteforce(w, b);
    CHECK(m == 0);
    CHECK(d == 1);
}

TEST_CASE("oracle guard rejects oversized message spaces") {
    CrtBasis b;
    b.primes = {3, 5};
    b.K = 1;
    b.T = 3;
    auto w = word_of({0, 0});
    CHECK_THROWS_AS(decode_bruteforce(w, b, mpz_class(2)), std::invalid_argument);
}

TEST_CASE("pairwise encodings agree on at most K-1 coordinates") {
    CrtBasis b;
    b.primes = {3, 5, 7};
    b.K = 2;
    b.T = 15;
    for (uint64_t m1 = 0; m1 < 15; ++m1)
        for (uint64_t m2 = m1 + 1; m2 < 15; ++m2) {
            auto w1 = encode(m1, b), w2 = encode(m2, b);
            unsigned agree = 0;
            for (std::size_t i = 0; i < 3; ++i) agree += *w1.symbols[i] == *w2.symbols[i];
            CHECK(agree <= b.K - 1);
        }
}

TEST_CASE("decoder never answers wrong inside the radius (random large bases)") {
    RandomSource rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        unsigned bits = 8 + unsigned(rng.uniform(9));  // T in 2^8..2^16
        mpz_class T = mpz_class(1) << bits;
        CrtBasis b = select_primes(T);
        mpz_class m = rng.uniform(uint64_t(1) << bits);
        auto w = encode(m, b);
        std::size_t radius = decode_radius(b, 0);
        std::size_t e = rng.uniform(radius + 1);
        std::set<std::size_t> wrong;
        while (wrong.size() < e) wrong.insert(rng.uniform(b.N()));
        for (auto i : wrong) *w.symbols[i] = (*w.symbols[i] + 1 + rng.uniform(b.primes[i] - 1)) % b.primes[i];
        auto out = decode_unique(w, b);
        REQUIRE(out.is_answer());
        CHECK(out.value() == m);
    }
}
