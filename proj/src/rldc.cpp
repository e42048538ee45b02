#include "ecds/rldc.hpp"

#include <stdexcept>

namespace ecds {

RldcScheme make_rldc_scheme(uint64_t message_bits, std::shared_ptr<const BlockCode> block,
                            unsigned theta_num, unsigned theta_den) {
    if (message_bits == 0) throw std::invalid_argument("rldc: empty message");
    if (!block) throw std::invalid_argument("rldc: null block code");
    if (theta_den == 0 || theta_num == 0 || 2 * theta_num > theta_den)
        throw std::invalid_argument("rldc: theta must be in (0, 1/2]");

    unsigned nb = block->codeword_bits();
    unsigned dist = verify_min_distance(*block);
    if (dist != block->min_distance())
        throw std::logic_error("rldc: block code distance does not match its declaration");
    if (4 * dist < nb) throw std::invalid_argument("rldc: block code relative distance below 1/4");

    RldcScheme s;
    s.block = std::move(block);
    s.message_bits = message_bits;
    s.num_blocks = (message_bits + s.block->message_bits() - 1) / s.block->message_bits();
    s.codeword_bits = s.num_blocks * nb;
    s.theta_num = theta_num;
    s.theta_den = theta_den;
    s.accept_radius = unsigned((uint64_t(nb) * theta_num) / theta_den);
    if (2 * s.accept_radius >= dist)
        throw std::invalid_argument("rldc: accept radius not unique-decodable for this block code");
    return s;
}

BitWord rldc_encode(const BitWord& message, const RldcScheme& scheme) {
    if (message.size() != scheme.message_bits)
        throw std::invalid_argument("rldc_encode: message length mismatch");
    const unsigned kb = scheme.block->message_bits();
    const unsigned nb = scheme.block->codeword_bits();
    BitWord out(scheme.codeword_bits);
    for (uint64_t b = 0; b < scheme.num_blocks; ++b) {
        uint64_t msg = 0;
        for (unsigned j = 0; j < kb; ++j) {
            uint64_t pos = b * kb + j;
            if (pos < message.size() && message.get(pos)) msg |= uint64_t(1) << j;
        }
        out.set_span(b * nb, nb, scheme.block->encode(msg));
    }
    return out;
}

Outcome<uint64_t> rldc_decode_block(const ProbeView& word, uint64_t block_index,
                                    const RldcScheme& scheme) {
    const unsigned nb = scheme.block->codeword_bits();
    if ((block_index + 1) * nb > word.size())
        throw std::out_of_range("rldc: block index out of range");
    uint64_t received = word.read_span(block_index * nb, nb);
    auto dec = scheme.block->decode_within(received, scheme.accept_radius);
    if (!dec.ok) return Outcome<uint64_t>::bottom();
    return Outcome<uint64_t>::answer(dec.msg);
}

Outcome<int> rldc_decode_bit(const ProbeView& word, uint64_t index, const RldcScheme& scheme,
                             RandomSource&) {
    if (index >= scheme.message_bits) throw std::out_of_range("rldc_decode_bit: index out of range");
    const unsigned kb = scheme.block->message_bits();
    auto blk = rldc_decode_block(word, index / kb, scheme);
    if (blk.is_bottom()) return Outcome<int>::bottom();
    return Outcome<int>::answer(int((blk.value() >> (index % kb)) & 1u));
}

}  // namespace ecds
