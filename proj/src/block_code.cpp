#include "ecds/block_code.hpp"

namespace ecds {

unsigned verify_min_distance(const BlockCode& code) {
    if (code.message_bits() > 16)
        throw std::invalid_argument("verify_min_distance: dimension too large to enumerate");
    unsigned min_w = code.codeword_bits();
    for (uint64_t m = 1; m < (uint64_t(1) << code.message_bits()); ++m) {
        unsigned w = unsigned(__builtin_popcountll(code.encode(m)));
        if (w < min_w) min_w = w;
    }
    return min_w;
}

std::shared_ptr<const BlockCode> golay_block_code() {
    static auto instance = std::make_shared<const GolayBlockCode>();
    return instance;
}

std::shared_ptr<const BlockCode> repetition_block_code(unsigned message_bits, unsigned reps) {
    return std::make_shared<const BitRepetitionCode>(message_bits, reps);
}

}  // namespace ecds
