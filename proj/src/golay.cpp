#include "ecds/golay.hpp"

#include <stdexcept>

namespace ecds {

namespace {

// One generator of the cyclic [23,12,7] code: x^11+x^10+x^6+x^5+x^4+x^2+1.
constexpr uint32_t kGenPoly = 0xC75;

unsigned popcount(uint32_t x) { return unsigned(__builtin_popcount(x)); }

}  // namespace

GolayCode::GolayCode() {
    // Non-systematic cyclic rows, extended by an overall parity bit.
    std::array<uint32_t, 12> raw{};
    for (unsigned i = 0; i < 12; ++i) {
        uint32_t row23 = kGenPoly << i;
        uint32_t parity = popcount(row23) & 1u;
        raw[i] = row23 | (parity << 23);
    }

    // Gaussian elimination to [I | B]; row operations stay inside the code.
    std::array<uint32_t, 12> rows = raw;
    for (unsigned col = 0; col < 12; ++col) {
        unsigned pivot = col;
        while (pivot < 12 && !((rows[pivot] >> col) & 1u)) ++pivot;
        if (pivot == 12) throw std::logic_error("golay: singular generator");
        std::swap(rows[col], rows[pivot]);
        for (unsigned r = 0; r < 12; ++r)
            if (r != col && ((rows[r] >> col) & 1u)) rows[r] ^= rows[col];
    }
    rows_ = rows;
    for (unsigned i = 0; i < 12; ++i) parity_rows_[i] = uint16_t((rows[i] >> 12) & 0xfff);

    // Exhaustive minimum-weight check over all 4096 codewords.
    unsigned min_w = n;
    for (uint32_t m = 1; m < (1u << 12); ++m) {
        unsigned w = popcount(encode(uint16_t(m)));
        if (w < min_w) min_w = w;
    }
    if (min_w != d) throw std::logic_error("golay: minimum distance check failed");

    // Coset leader table, filled in order of increasing pattern weight.
    leader_.assign(1u << 12, 0);
    leader_weight_.assign(1u << 12, 0xff);
    std::vector<uint32_t> frontier{0};
    leader_[syndrome(0)] = 0;
    leader_weight_[syndrome(0)] = 0;
    // enumerate all patterns of weight 1..4
    std::array<int, 4> idx{};
    for (unsigned w = 1; w <= 4; ++w) {
        for (int a = 0; a < int(n); ++a) {
            if (w == 1) {
                uint32_t e = 1u << a;
                uint16_t s = syndrome(e);
                if (leader_weight_[s] == 0xff) {
                    leader_[s] = e;
                    leader_weight_[s] = uint8_t(w);
                }
                continue;
            }
            for (int b = a + 1; b < int(n); ++b) {
                if (w == 2) {
                    uint32_t e = (1u << a) | (1u << b);
                    uint16_t s = syndrome(e);
                    if (leader_weight_[s] == 0xff) {
                        leader_[s] = e;
                        leader_weight_[s] = uint8_t(w);
                    }
                    continue;
                }
                for (int c = b + 1; c < int(n); ++c) {
                    if (w == 3) {
                        uint32_t e = (1u << a) | (1u << b) | (1u << c);
                        uint16_t s = syndrome(e);
                        if (leader_weight_[s] == 0xff) {
                            leader_[s] = e;
                            leader_weight_[s] = uint8_t(w);
                        }
                        continue;
                    }
                    for (int dd = c + 1; dd < int(n); ++dd) {
                        uint32_t e = (1u << a) | (1u << b) | (1u << c) | (1u << dd);
                        uint16_t s = syndrome(e);
                        if (leader_weight_[s] == 0xff) {
                            leader_[s] = e;
                            leader_weight_[s] = uint8_t(w);
                        }
                    }
                }
            }
        }
    }
    (void)idx;
    for (std::size_t s = 0; s < leader_weight_.size(); ++s)
        if (leader_weight_[s] == 0xff) throw std::logic_error("golay: coset leader table incomplete");
}

const GolayCode& golay() {
    static const GolayCode instance;
    return instance;
}

}  // namespace ecds
