#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include "ecds/golay.hpp"

namespace ecds {

/// Linear block code over at most 64 codeword bits, decodable to the nearest
/// codeword within a bounded radius. Implementations verify their minimum
/// distance exhaustively at construction.
class BlockCode {
  public:
    virtual ~BlockCode() = default;

    virtual unsigned message_bits() const = 0;
    virtual unsigned codeword_bits() const = 0;
    virtual unsigned min_distance() const = 0;
    virtual std::string name() const = 0;

    virtual uint64_t encode(uint64_t msg) const = 0;

    struct Decoded {
        bool ok;
        uint64_t msg;
        unsigned dist;
    };
    /// Nearest codeword if within accept_radius, else ok = false.
    virtual Decoded decode_within(uint64_t word, unsigned accept_radius) const = 0;
};

class GolayBlockCode final : public BlockCode {
  public:
    GolayBlockCode() : code_(&golay()) {}
    unsigned message_bits() const override { return GolayCode::k; }
    unsigned codeword_bits() const override { return GolayCode::n; }
    unsigned min_distance() const override { return GolayCode::d; }
    std::string name() const override { return "golay24"; }
    uint64_t encode(uint64_t msg) const override { return code_->encode(uint16_t(msg & 0xfff)); }
    Decoded decode_within(uint64_t word, unsigned accept_radius) const override {
        auto r = code_->decode_within(uint32_t(word), accept_radius);
        return {r.ok, r.msg, r.dist};
    }

  private:
    const GolayCode* code_;
};

/// r-fold repetition of each message bit; distance r. Kept for tiny schemes
/// and as the simplest pluggable inner code.
class BitRepetitionCode final : public BlockCode {
  public:
    BitRepetitionCode(unsigned message_bits, unsigned reps) : k_(message_bits), r_(reps) {
        if (k_ == 0 || r_ == 0 || k_ * r_ > 64)
            throw std::invalid_argument("BitRepetitionCode: k*r must be in 1..64");
    }
    unsigned message_bits() const override { return k_; }
    unsigned codeword_bits() const override { return k_ * r_; }
    unsigned min_distance() const override { return r_; }
    std::string name() const override {
        return "rep" + std::to_string(r_) + "x" + std::to_string(k_);
    }
    uint64_t encode(uint64_t msg) const override {
        uint64_t cw = 0;
        for (unsigned i = 0; i < k_; ++i) {
            if ((msg >> i) & 1u) {
                uint64_t ones = (r_ == 64) ? ~uint64_t(0) : ((uint64_t(1) << r_) - 1);
                cw |= ones << (i * r_);
            }
        }
        return cw;
    }
    Decoded decode_within(uint64_t word, unsigned accept_radius) const override {
        // per-bit majority is the nearest codeword; ties resolve to 0
        uint64_t msg = 0;
        unsigned dist = 0;
        for (unsigned i = 0; i < k_; ++i) {
            uint64_t chunk = (word >> (i * r_)) & ((r_ == 64) ? ~uint64_t(0) : ((uint64_t(1) << r_) - 1));
            unsigned ones = unsigned(__builtin_popcountll(chunk));
            if (2 * ones > r_) {
                msg |= uint64_t(1) << i;
                dist += r_ - ones;
            } else {
                dist += ones;
            }
        }
        if (dist > accept_radius) return {false, 0, dist};
        return {true, msg, dist};
    }

  private:
    unsigned k_, r_;
};

/// Exhaustive minimum-weight computation; message_bits must stay enumerable.
unsigned verify_min_distance(const BlockCode& code);

std::shared_ptr<const BlockCode> golay_block_code();
std::shared_ptr<const BlockCode> repetition_block_code(unsigned message_bits, unsigned reps);

}  // namespace ecds
