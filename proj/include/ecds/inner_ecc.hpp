#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ecds/gf.hpp"

namespace ecds {

/// Symbol over {0, 1, erased}.
using TriBit = uint8_t;
constexpr TriBit kTriZero = 0, kTriOne = 1, kTriErased = 2;

/// Binary linear code with relative distance >= 3/8 and an
/// errors-and-erasures decoder, wrapped around answers before the outer RLDC.
///
/// Two constructions sit behind one interface:
///  - up to 16 message bits: Reed-Solomon over GF(16) concatenated with the
///    [16,4,8] linear-forms code; minimum distance verified exhaustively;
///    nearest-codeword decoding corrects every pattern with
///    2e + s < (3/8) * codeword_bits.
///  - 17..512 message bits: Reed-Solomon over GF(256) concatenated with the
///    [128,8,64] first-order Reed-Muller code; distance is the product bound
///    (inner verified exhaustively, outer is MDS); decoding is multi-trial
///    erasure-declaration (GMD style), guaranteed for e < distance/2 errors
///    and best-effort with erasures.
class InnerEcc {
  public:
    static std::shared_ptr<const InnerEcc> for_message_bits(unsigned ell);

    unsigned message_bits() const { return ell_; }
    unsigned codeword_bits() const { return ellp_; }
    unsigned min_distance() const { return dmin_; }
    bool exhaustively_verified() const { return small_; }

    std::vector<uint8_t> encode(const std::vector<uint8_t>& msg_bits) const;
    uint64_t pack(const std::vector<uint8_t>& bits) const;
    std::vector<uint8_t> unpack(uint64_t value) const;

    std::optional<std::vector<uint8_t>> decode(const std::vector<TriBit>& received) const;

  private:
    InnerEcc() = default;
    void build_small(unsigned ell);
    void build_large(unsigned ell);
    std::optional<std::vector<uint8_t>> decode_small(const std::vector<TriBit>& received) const;
    std::optional<std::vector<uint8_t>> decode_large(const std::vector<TriBit>& received) const;

    bool small_ = true;
    unsigned ell_ = 0, ellp_ = 0, dmin_ = 0;
    unsigned k0_ = 0, n0_ = 0;  // outer Reed-Solomon parameters

    std::unique_ptr<RsCode> rs_;
    // small family: all codewords, 192 bits max, plus an inner nearest table
    std::vector<std::array<uint64_t, 3>> codewords_;
};

}  // namespace ecds
