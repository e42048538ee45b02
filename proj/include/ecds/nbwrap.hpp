#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ecds/bitword.hpp"
#include "ecds/inner_ecc.hpp"
#include "ecds/outcome.hpp"
#include "ecds/probe.hpp"
#include "ecds/random.hpp"
#include "ecds/rldc.hpp"

namespace ecds {

/// Non-binary answers behind the binary RLDC: each fixed-width answer is
/// inner-encoded, the concatenation in query order is outer-encoded by the
/// reference RLDC.
struct NbScheme {
    std::shared_ptr<const InnerEcc> ecc;
    RldcScheme rldc;
    uint64_t query_count = 0;
    unsigned answer_bits = 0;  // ell

    uint64_t outer_message_bits() const { return query_count * ecc->codeword_bits(); }
    /// Distinct positions one answer decode can touch.
    uint64_t probes_per_answer() const {
        const unsigned kb = rldc.block->message_bits();
        return (ecc->codeword_bits() / kb + 2) * rldc.block->codeword_bits();
    }
};

NbScheme make_nb_scheme(uint64_t query_count, unsigned answer_bits,
                        std::shared_ptr<const BlockCode> block = golay_block_code());

/// answers[q] holds the ell-bit answer for query q.
BitWord nb_encode(const std::vector<uint64_t>& answers, const NbScheme& scheme);

/// Appendix-style combine: bottom when at least codeword_bits/8 symbols are
/// blank, otherwise the inner error-and-erasure decode.
Outcome<uint64_t> nb_combine_symbols(const std::vector<TriBit>& symbols, const InnerEcc& ecc);

/// Reads the ell' positions of answer q through the RLDC bit decoder
/// (blanks become erasures) and combines them.
Outcome<uint64_t> nb_decode(const ProbeView& word, uint64_t q, const NbScheme& scheme,
                            RandomSource& rng);

}  // namespace ecds
