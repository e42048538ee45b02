#include "ecds/nbwrap.hpp"

#include <stdexcept>

namespace ecds {

NbScheme make_nb_scheme(uint64_t query_count, unsigned answer_bits,
                        std::shared_ptr<const BlockCode> block) {
    if (query_count == 0) throw std::invalid_argument("nb: empty query set");
    NbScheme s;
    s.ecc = InnerEcc::for_message_bits(answer_bits);
    s.query_count = query_count;
    s.answer_bits = answer_bits;
    s.rldc = make_rldc_scheme(query_count * s.ecc->codeword_bits(), std::move(block));
    return s;
}

BitWord nb_encode(const std::vector<uint64_t>& answers, const NbScheme& scheme) {
    if (answers.size() != scheme.query_count)
        throw std::invalid_argument("nb_encode: answer count mismatch");
    const unsigned ellp = scheme.ecc->codeword_bits();
    BitWord outer(scheme.outer_message_bits());
    for (uint64_t q = 0; q < answers.size(); ++q) {
        if (scheme.answer_bits < 64 && (answers[q] >> scheme.answer_bits) != 0)
            throw std::invalid_argument("nb_encode: answer wider than ell bits");
        auto cw = scheme.ecc->encode(scheme.ecc->unpack(answers[q]));
        for (unsigned j = 0; j < ellp; ++j)
            if (cw[j]) outer.set(q * ellp + j, true);
    }
    return rldc_encode(outer, scheme.rldc);
}

Outcome<uint64_t> nb_combine_symbols(const std::vector<TriBit>& symbols, const InnerEcc& ecc) {
    if (symbols.size() != ecc.codeword_bits())
        throw std::invalid_argument("nb_combine_symbols: size mismatch");
    uint64_t blanks = 0;
    for (TriBit s : symbols)
        if (s == kTriErased) ++blanks;
    if (8 * blanks >= ecc.codeword_bits()) return Outcome<uint64_t>::bottom();
    auto msg = ecc.decode(symbols);
    if (!msg) return Outcome<uint64_t>::bottom();
    return Outcome<uint64_t>::answer(ecc.pack(*msg));
}

Outcome<uint64_t> nb_decode(const ProbeView& word, uint64_t q, const NbScheme& scheme,
                            RandomSource& rng) {
    if (q >= scheme.query_count) throw std::out_of_range("nb_decode: query out of range");
    const unsigned ellp = scheme.ecc->codeword_bits();
    const unsigned kb = scheme.rldc.block->message_bits();

    std::vector<TriBit> symbols(ellp);
    // bits of one answer cluster in a handful of blocks; decode each block once
    uint64_t cached_block = ~uint64_t(0);
    Outcome<uint64_t> cached = Outcome<uint64_t>::bottom();
    for (unsigned j = 0; j < ellp; ++j) {
        uint64_t pos = q * uint64_t(ellp) + j;
        uint64_t blk = pos / kb;
        if (blk != cached_block) {
            cached = rldc_decode_block(word, blk, scheme.rldc);
            cached_block = blk;
        }
        if (cached.is_bottom())
            symbols[j] = kTriErased;
        else
            symbols[j] = TriBit((cached.value() >> (pos % kb)) & 1u);
    }
    (void)rng;  // decode path is deterministic for the reference RLDC
    return nb_combine_symbols(symbols, *scheme.ecc);
}

}  // namespace ecds
