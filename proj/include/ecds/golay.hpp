#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace ecds {

/// Extended binary Golay code [24,12,8] in systematic form, with table-driven
/// syndrome decoding. Coset leaders have weight at most 4; any received block
/// within distance 3 of a codeword decodes to it, weight-4 cosets are
/// rejected.
class GolayCode {
  public:
    GolayCode();

    static constexpr unsigned k = 12;
    static constexpr unsigned n = 24;
    static constexpr unsigned d = 8;

    uint32_t encode(uint16_t msg) const {
        uint32_t cw = 0;
        for (unsigned i = 0; i < k; ++i)
            if ((msg >> i) & 1u) cw ^= rows_[i];
        return cw;
    }

    struct Decoded {
        bool ok;         // false: no codeword within the accept radius
        uint16_t msg;
        unsigned dist;   // weight of the applied error pattern
    };

    /// Nearest-codeword decode, rejecting when the coset leader weight
    /// exceeds accept_radius (at most 3 for unambiguous decoding).
    Decoded decode_within(uint32_t word, unsigned accept_radius) const {
        uint16_t s = syndrome(word);
        uint32_t e = leader_[s];
        unsigned w = leader_weight_[s];
        if (w > accept_radius) return {false, 0, w};
        uint32_t cw = word ^ e;
        return {true, uint16_t(cw & 0xfff), w};
    }

    uint16_t syndrome(uint32_t word) const {
        uint16_t s = uint16_t((word >> k) & 0xfff);
        for (unsigned i = 0; i < k; ++i)
            if ((word >> i) & 1u) s ^= parity_rows_[i];
        return s;
    }

  private:
    std::array<uint32_t, 12> rows_{};         // systematic generator rows [I | B]
    std::array<uint16_t, 12> parity_rows_{};  // B rows
    std::vector<uint32_t> leader_;            // syndrome -> coset leader
    std::vector<uint8_t> leader_weight_;
};

/// Shared singleton; construction builds and checks the tables once.
const GolayCode& golay();

}  // namespace ecds
