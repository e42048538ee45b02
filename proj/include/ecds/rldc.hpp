#pragma once

#include <cstdint>
#include <memory>

#include "ecds/bitword.hpp"
#include "ecds/block_code.hpp"
#include "ecds/outcome.hpp"
#include "ecds/probe.hpp"
#include "ecds/random.hpp"

namespace ecds {

/// Reference relaxed locally decodable code: the message is cut into blocks,
/// each encoded independently by a verified linear block code, and a bit is
/// decoded by reading its whole block and accepting the nearest codeword
/// within relative radius theta_accept (default 1/8).
///
/// Per-block decoding is deterministic. Blocks whose corruption stays within
/// the accept radius always decode correctly; by Markov, a total noise
/// fraction delta leaves at most a (delta/theta)-fraction of blocks beyond
/// the radius, so the lost-index fraction is at most c*delta with
/// c = block_bits/(accept_radius+1). Zero noise decodes every index
/// correctly. The price of determinism: indices inside a block the adversary
/// rewrote return a wrong bit rather than a low-probability error; the
/// surrounding structures budget those indices into their lambda.
struct RldcScheme {
    std::shared_ptr<const BlockCode> block;
    uint64_t message_bits = 0;   // logical message length
    uint64_t num_blocks = 0;
    uint64_t codeword_bits = 0;
    unsigned accept_radius = 0;  // floor(theta * block codeword bits)
    unsigned theta_num = 1, theta_den = 8;

    uint64_t padded_message_bits() const { return num_blocks * block->message_bits(); }

    /// Worst-case factor c in lambda <= c * delta.
    double lambda_factor() const {
        return double(block->codeword_bits()) / double(accept_radius + 1);
    }

    DsContract contract() const {
        DsContract c;
        c.probes = block->codeword_bits();
        c.delta = double(accept_radius) / double(block->codeword_bits());
        c.epsilon = 0.01;
        c.lambda = lambda_factor() * c.delta;
        c.length = codeword_bits;
        return c;
    }
};

/// Builds a scheme and verifies the block code's relative distance >= 1/4
/// exhaustively. theta defaults to 1/8.
RldcScheme make_rldc_scheme(uint64_t message_bits,
                            std::shared_ptr<const BlockCode> block = golay_block_code(),
                            unsigned theta_num = 1, unsigned theta_den = 8);

/// Pads the message with zeros to a whole number of blocks and encodes each
/// block independently.
BitWord rldc_encode(const BitWord& message, const RldcScheme& scheme);

/// Reads the entire block containing `index` (t = block codeword bits),
/// decodes to the nearest codeword within the accept radius, and returns that
/// codeword's bit; bottom when no codeword is close enough. Deterministic;
/// rng is part of the decoder interface but unused here.
Outcome<int> rldc_decode_bit(const ProbeView& word, uint64_t index, const RldcScheme& scheme,
                             RandomSource& rng);

/// Block-decode helper shared by callers that read several bits of one block:
/// returns the decoded message chunk for block `block_index`, or bottom.
Outcome<uint64_t> rldc_decode_block(const ProbeView& word, uint64_t block_index,
                                    const RldcScheme& scheme);

}  // namespace ecds
