#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ecds/block_code.hpp"
#include "ecds/inner_ecc.hpp"
#include "ecds/nbwrap.hpp"
#include "ecds/random.hpp"
#include "ecds/rldc.hpp"

using namespace ecds;

TEST_CASE("golay block code: verified distance and syndrome decoding") {
    auto code = golay_block_code();
    CHECK(verify_min_distance(*code) == 8);

    RandomSource rng(1);
    for (int trial = 0; trial < 2000; ++trial) {
        uint16_t msg = uint16_t(rng.uniform(1u << 12));
        uint64_t cw = code->encode(msg);
        unsigned errs = unsigned(rng.uniform(4));  // 0..3
        uint64_t word = cw;
        std::set<unsigned> flipped;
        while (flipped.size() < errs) {
            unsigned p = unsigned(rng.uniform(24));
            if (flipped.insert(p).second) word ^= uint64_t(1) << p;
        }
        auto dec = code->decode_within(word, 3);
        REQUIRE(dec.ok);
        CHECK(dec.msg == msg);
        CHECK(dec.dist == errs);
    }
    // exactly four errors always lands in a weight-4 coset: reject
    for (int trial = 0; trial < 500; ++trial) {
        uint16_t msg = uint16_t(rng.uniform(1u << 12));
        uint64_t word = code->encode(msg);
        std::set<unsigned> flipped;
        while (flipped.size() < 4) {
            unsigned p = unsigned(rng.uniform(24));
            if (flipped.insert(p).second) word ^= uint64_t(1) << p;
        }
        CHECK_FALSE(code->decode_within(word, 3).ok);
    }
}

TEST_CASE("repetition block code") {
    BitRepetitionCode rep(4, 3);
    CHECK(rep.codeword_bits() == 12);
    CHECK(verify_min_distance(rep) == 3);
    // message 1010 -> 111000111000 reading bit 0 first
    uint64_t cw = rep.encode(0b0101);
    CHECK(cw == 0b000111000111);
    auto dec = rep.decode_within(cw ^ 0b1, 1);
    REQUIRE(dec.ok);
    CHECK(dec.msg == 0b0101);
}

TEST_CASE("reference rldc: round trip and linear zero") {
    auto scheme = make_rldc_scheme(100);
    CHECK(scheme.codeword_bits == scheme.num_blocks * 24);

    BitWord zero(100);
    BitWord enc0 = rldc_encode(zero, scheme);
    for (std::size_t i = 0; i < enc0.size(); ++i) CHECK_FALSE(enc0.get(i));

    RandomSource rng(3);
    BitWord msg(100);
    for (int i = 0; i < 100; ++i) msg.set(std::size_t(i), rng.coin());
    BitWord enc = rldc_encode(msg, scheme);
    ProbeSession session(enc);
    for (uint64_t i = 0; i < 100; ++i) {
        session.begin_call();
        ProbeView v(session);
        auto bit = rldc_decode_bit(v, i, scheme, rng);
        REQUIRE(bit.is_answer());
        CHECK(bit.value() == int(msg.get(i)));
        CHECK(session.distinct_probes() == 24);  // one whole block
    }
}

TEST_CASE("reference rldc honors the repetition example") {
    auto scheme = make_rldc_scheme(4, repetition_block_code(4, 3));
    BitWord msg(4);
    msg.set(0, true);
    msg.set(2, true);  // 1010
    BitWord enc = rldc_encode(msg, scheme);
    std::string got;
    for (std::size_t i = 0; i < enc.size(); ++i) got += enc.get(i) ? '1' : '0';
    CHECK(got == "111000111000");
}

TEST_CASE("rldc rejects blocks far from every codeword") {
    auto scheme = make_rldc_scheme(24);
    RandomSource rng(4);
    BitWord msg(24);
    BitWord enc = rldc_encode(msg, scheme);
    // find a 4-flip pattern (weight-4 coset leader) for block 0
    BitWord word = enc;
    word.flip(0);
    word.flip(1);
    word.flip(2);
    word.flip(3);
    ProbeSession session(word);
    session.begin_call();
    ProbeView v(session);
    auto out = rldc_decode_bit(v, 0, scheme, rng);
    CHECK(out.is_bottom());
}

TEST_CASE("rldc: corruption in one block leaves other blocks exact") {
    auto scheme = make_rldc_scheme(120);
    RandomSource rng(5);
    BitWord msg(120);
    for (int i = 0; i < 120; ++i) msg.set(std::size_t(i), rng.coin());
    BitWord enc = rldc_encode(msg, scheme);
    // destroy block 2 entirely
    for (unsigned t = 0; t < 24; ++t) enc.flip(2 * 24 + t);
    ProbeSession session(enc);
    for (uint64_t i = 0; i < 120; ++i) {
        if (i / 12 == 2) continue;
        session.begin_call();
        ProbeView v(session);
        auto bit = rldc_decode_bit(v, i, scheme, rng);
        REQUIRE(bit.is_answer());
        CHECK(bit.value() == int(msg.get(i)));
    }
}

TEST_CASE("rldc block-Markov loss bound") {
    auto scheme = make_rldc_scheme(600);
    RandomSource rng(6);
    BitWord msg(600);
    for (int i = 0; i < 600; ++i) msg.set(std::size_t(i), rng.coin());
    BitWord enc = rldc_encode(msg, scheme);
    const double c = scheme.lambda_factor();
    CHECK(c == doctest::Approx(6.0));

    for (uint64_t budget : {5ull, 20ull, 60ull, 120ull}) {
        CorruptionSpec spec;
        spec.budget = budget;
        spec.seed = budget * 77 + 1;
        // count indices whose block exceeds the accept radius
        BitWord word = enc;
        RandomSource crng(spec.seed);
        std::set<uint64_t> flips;
        while (flips.size() < budget) flips.insert(crng.uniform(word.size()));
        for (uint64_t f : flips) word.flip(f);
        uint64_t lost_indices = 0;
        for (uint64_t b = 0; b < scheme.num_blocks; ++b) {
            unsigned e = 0;
            for (unsigned t = 0; t < 24; ++t) e += word.get(b * 24 + t) != enc.get(b * 24 + t);
            if (e > scheme.accept_radius) lost_indices += 12;
        }
        double delta = double(budget) / double(enc.size());
        CHECK(double(lost_indices) / double(scheme.padded_message_bits()) <= c * delta + 1e-12);
    }
}

TEST_CASE("inner ecc family shapes and verified distances") {
    struct Want {
        unsigned ell, ellp, d;
    };
    for (Want w : {Want{1, 16, 8}, Want{4, 16, 8}, Want{8, 64, 24}, Want{12, 128, 48}, Want{16, 192, 72}}) {
        auto ecc = InnerEcc::for_message_bits(w.ell);
        CHECK(ecc->message_bits() == w.ell);
        CHECK(ecc->codeword_bits() == w.ellp);
        CHECK(ecc->min_distance() == w.d);
        CHECK(ecc->exhaustively_verified());
        CHECK(8 * ecc->min_distance() >= 3 * ecc->codeword_bits());

        // zero message -> zero codeword (linearity), clean round trip
        std::vector<uint8_t> zero(w.ell, 0);
        auto cw = ecc->encode(zero);
        for (uint8_t b : cw) CHECK(b == 0);
        RandomSource rng(w.ell);
        std::vector<uint8_t> msg(w.ell);
        for (auto& b : msg) b = uint8_t(rng.coin());
        auto code = ecc->encode(msg);
        std::vector<TriBit> tri(code.begin(), code.end());
        auto back = ecc->decode(tri);
        REQUIRE(back.has_value());
        CHECK(*back == msg);
    }
}

TEST_CASE("inner ecc corrects one error plus one erasure") {
    auto ecc = InnerEcc::for_message_bits(9);  // [128,12,48]
    RandomSource rng(9);
    std::vector<uint8_t> msg(9);
    for (auto& b : msg) b = uint8_t(rng.coin());
    auto cw = ecc->encode(msg);
    std::vector<TriBit> tri(cw.begin(), cw.end());
    tri[5] ^= 1;
    tri[90] = kTriErased;
    auto back = ecc->decode(tri);
    REQUIRE(back.has_value());
    CHECK(*back == msg);
}

TEST_CASE("inner ecc radius sweep on the 16-bit member") {
    auto ecc = InnerEcc::for_message_bits(16);
    const unsigned ellp = ecc->codeword_bits();
    const unsigned radius = 3 * ellp / 8;  // 72
    RandomSource rng(16);
    std::vector<uint8_t> msg(16);
    for (auto& b : msg) b = uint8_t(rng.coin());
    auto cw = ecc->encode(msg);
    for (unsigned e = 0; e <= (radius - 1) / 2; e += 7) {
        unsigned s = radius - 1 - 2 * e;
        std::vector<TriBit> tri(cw.begin(), cw.end());
        std::set<unsigned> touched;
        while (touched.size() < e + s) touched.insert(unsigned(rng.uniform(ellp)));
        unsigned placed = 0;
        for (unsigned pos : touched) {
            if (placed++ < e)
                tri[pos] ^= 1;
            else
                tri[pos] = kTriErased;
        }
        auto back = ecc->decode(tri);
        REQUIRE(back.has_value());
        CHECK(*back == msg);
    }
}

TEST_CASE("wide inner ecc (trivial-mode size) corrects below half distance") {
    auto ecc = InnerEcc::for_message_bits(64);  // RS(GF256) over RM(1,7)
    CHECK_FALSE(ecc->exhaustively_verified());
    CHECK(8 * ecc->min_distance() >= 3 * ecc->codeword_bits());
    RandomSource rng(64);
    std::vector<uint8_t> msg(64);
    for (auto& b : msg) b = uint8_t(rng.coin());
    auto cw = ecc->encode(msg);
    const unsigned half = (ecc->min_distance() - 1) / 2;
    for (unsigned trial = 0; trial < 20; ++trial) {
        unsigned e = unsigned(rng.uniform(half)) + 1;
        std::vector<TriBit> tri(cw.begin(), cw.end());
        std::set<unsigned> touched;
        while (touched.size() < e) touched.insert(unsigned(rng.uniform(ecc->codeword_bits())));
        for (unsigned pos : touched) tri[pos] ^= 1;
        auto back = ecc->decode(tri);
        REQUIRE(back.has_value());
        CHECK(*back == msg);
    }
}

TEST_CASE("nb wrapper: composition length and round trip") {
    auto scheme = make_nb_scheme(4, 8);
    CHECK(scheme.ecc->codeword_bits() == 64);
    CHECK(scheme.outer_message_bits() == 4 * 64);
    CHECK(scheme.rldc.message_bits == 256);

    std::vector<uint64_t> answers{0x00, 0xff, 0x5a, 0x99};
    BitWord enc = nb_encode(answers, scheme);
    CHECK(enc.size() == scheme.rldc.codeword_bits);

    RandomSource rng(7);
    ProbeSession session(enc);
    for (uint64_t q = 0; q < 4; ++q) {
        session.begin_call();
        ProbeView v(session);
        auto out = nb_decode(v, q, scheme, rng);
        REQUIRE(out.is_answer());
        CHECK(out.value() == answers[q]);
        CHECK(session.distinct_probes() <= scheme.probes_per_answer());
    }
}

TEST_CASE("nb wrapper: blank threshold forces bottom") {
    auto ecc = InnerEcc::for_message_bits(8);
    std::vector<uint8_t> msg(8, 1);
    auto cw = ecc->encode(msg);
    std::vector<TriBit> tri(cw.begin(), cw.end());
    // erase exactly ell'/8 symbols: must give bottom even though decodable
    for (unsigned i = 0; i < ecc->codeword_bits() / 8; ++i) tri[i] = kTriErased;
    CHECK(nb_combine_symbols(tri, *ecc).is_bottom());
    // one fewer blank decodes fine
    tri[0] = cw[0];
    auto out = nb_combine_symbols(tri, *ecc);
    REQUIRE(out.is_answer());
    CHECK(out.value() == ecc->pack(msg));
}

TEST_CASE("nb wrapper: single query of one bit") {
    auto scheme = make_nb_scheme(1, 1);
    std::vector<uint64_t> answers{1};
    BitWord enc = nb_encode(answers, scheme);
    // encoding is exactly rldc(ecc codeword of the 1-bit answer)
    auto ecc = scheme.ecc;
    BitWord outer(scheme.outer_message_bits());
    auto cw = ecc->encode(ecc->unpack(1));
    for (std::size_t i = 0; i < cw.size(); ++i)
        if (cw[i]) outer.set(i, true);
    CHECK(enc == rldc_encode(outer, scheme.rldc));

    RandomSource rng(1);
    ProbeSession session(enc);
    session.begin_call();
    ProbeView v(session);
    auto out = nb_decode(v, 0, scheme, rng);
    REQUIRE(out.is_answer());
    CHECK(out.value() == 1);
}

TEST_CASE("nb wrapper: correct-or-bottom under sampled low noise") {
    auto scheme = make_nb_scheme(24, 12);
    RandomSource rng(88);
    std::vector<uint64_t> answers(24);
    for (auto& a : answers) a = rng.uniform(1u << 12);
    BitWord enc = nb_encode(answers, scheme);
    const uint64_t budget = uint64_t(double(enc.size()) * 0.002) + 2;
    for (uint64_t trial = 0; trial < 20; ++trial) {
        BitWord word = enc;
        RandomSource crng(trial * 31 + 5);
        std::set<uint64_t> flips;
        while (flips.size() < budget) flips.insert(crng.uniform(word.size()));
        for (uint64_t f : flips) word.flip(f);
        ProbeSession session(word);
        for (uint64_t q = 0; q < 24; ++q) {
            session.begin_call();
            ProbeView v(session);
            auto out = nb_decode(v, q, scheme, rng);
            if (out.is_answer()) CHECK(out.value() == answers[q]);
        }
    }
}
