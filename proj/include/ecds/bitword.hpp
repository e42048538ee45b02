#pragma once

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ecds {

/// Bit string with explicit length. Bit j lives at word j/64, bit j%64.
/// Treated as immutable once a structure hands it out; set() exists for
/// builders and the corruption harness.
class BitWord {
  public:
    BitWord() = default;
    explicit BitWord(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    std::size_t size() const { return nbits_; }

    bool get(std::size_t i) const {
        check(i);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i, bool v) {
        check(i);
        uint64_t mask = uint64_t(1) << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    void flip(std::size_t i) {
        check(i);
        words_[i >> 6] ^= uint64_t(1) << (i & 63);
    }

    /// Extracts up to 64 consecutive bits starting at `pos` (LSB = bit at pos).
    uint64_t get_span(std::size_t pos, unsigned len) const {
        if (len == 0 || len > 64) throw std::invalid_argument("get_span: len must be 1..64");
        if (pos + len > nbits_) throw std::out_of_range("get_span: range past end of word");
        std::size_t w = pos >> 6, off = pos & 63;
        uint64_t lo = words_[w] >> off;
        if (off + len > 64) lo |= words_[w + 1] << (64 - off);
        return (len == 64) ? lo : (lo & ((uint64_t(1) << len) - 1));
    }

    void set_span(std::size_t pos, unsigned len, uint64_t bits) {
        for (unsigned j = 0; j < len; ++j) set(pos + j, (bits >> j) & 1u);
    }

    bool operator==(const BitWord& o) const { return nbits_ == o.nbits_ && words_ == o.words_; }

    /// Packed bytes, bit j at byte j/8, position j%8, LSB first.
    std::vector<uint8_t> to_bytes() const {
        std::vector<uint8_t> out((nbits_ + 7) / 8, 0);
        for (std::size_t b = 0; b < out.size(); ++b) {
            std::size_t w = b >> 3, sh = (b & 7) * 8;
            out[b] = uint8_t(words_[w] >> sh);
        }
        if (nbits_ & 7) out.back() &= uint8_t((1u << (nbits_ & 7)) - 1);
        return out;
    }

    static BitWord from_bytes(const std::vector<uint8_t>& bytes, std::size_t nbits) {
        if (bytes.size() != (nbits + 7) / 8)
            throw std::invalid_argument("from_bytes: byte count does not match bit length");
        BitWord w(nbits);
        for (std::size_t b = 0; b < bytes.size(); ++b) {
            std::size_t wi = b >> 3, sh = (b & 7) * 8;
            w.words_[wi] |= uint64_t(bytes[b]) << sh;
        }
        if (nbits & 7) {
            // clear slack bits above the end
            std::size_t last = nbits >> 6;
            unsigned used = nbits & 63;
            if (used) w.words_[last] &= (uint64_t(1) << used) - 1;
        }
        return w;
    }

    const std::vector<uint64_t>& words() const { return words_; }

  private:
    void check(std::size_t i) const {
        if (i >= nbits_) throw std::out_of_range("BitWord: bit index out of range");
    }

    std::size_t nbits_ = 0;
    std::vector<uint64_t> words_;
};

/// Positions where a and b differ.
inline std::size_t hamming_distance(const BitWord& a, const BitWord& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
    std::size_t d = 0;
    const auto& wa = a.words();
    const auto& wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) d += std::size_t(__builtin_popcountll(wa[i] ^ wb[i]));
    return d;
}

}  // namespace ecds
