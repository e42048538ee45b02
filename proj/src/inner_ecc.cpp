#include "ecds/inner_ecc.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace ecds {

namespace {

// [16,4,8]: nibble v maps to (parity(v & x))_{x in [16]}; every nonzero
// linear form is balanced.
uint16_t inner16_encode(unsigned v) {
    uint16_t cw = 0;
    for (unsigned x = 0; x < 16; ++x)
        if (__builtin_popcount(v & x) & 1) cw |= uint16_t(1) << x;
    return cw;
}

struct Inner16Tables {
    std::array<uint16_t, 16> enc;
    // received 16-bit pattern -> (best nibble, distance), erasure-free
    std::vector<uint16_t> nearest;  // low byte = nibble, high byte = dist
    Inner16Tables() {
        for (unsigned v = 0; v < 16; ++v) enc[v] = inner16_encode(v);
        nearest.resize(1u << 16);
        for (unsigned r = 0; r < (1u << 16); ++r) {
            unsigned best = 0, bd = 17;
            for (unsigned v = 0; v < 16; ++v) {
                unsigned d = unsigned(__builtin_popcount(r ^ enc[v]));
                if (d < bd) {
                    bd = d;
                    best = v;
                }
            }
            nearest[r] = uint16_t(best | (bd << 8));
        }
    }
};

const Inner16Tables& inner16() {
    static const Inner16Tables t;
    return t;
}

// [128,8,64]: byte (a0 | a<<1) maps to (a0 xor parity(a & x))_{x in [128]}.
void rm17_encode(unsigned byte, uint64_t out[2]) {
    unsigned a0 = byte & 1u, a = byte >> 1;
    out[0] = out[1] = 0;
    for (unsigned x = 0; x < 128; ++x) {
        unsigned bit = a0 ^ (unsigned(__builtin_popcount(a & x)) & 1u);
        if (bit) out[x >> 6] |= uint64_t(1) << (x & 63);
    }
}

unsigned rm17_verified_distance() {
    static unsigned d = [] {
        unsigned min_w = 128;
        uint64_t cw[2];
        for (unsigned b = 1; b < 256; ++b) {
            rm17_encode(b, cw);
            unsigned w = unsigned(__builtin_popcountll(cw[0]) + __builtin_popcountll(cw[1]));
            min_w = std::min(min_w, w);
        }
        return min_w;
    }();
    return d;
}

// Walsh-Hadamard ML decode of one 128-bit symbol with erasures.
// Returns (byte, bit distance over non-erased positions).
std::pair<unsigned, unsigned> rm17_ml(const TriBit* sym) {
    int f[128];
    unsigned present = 0;
    for (unsigned x = 0; x < 128; ++x) {
        if (sym[x] == kTriErased) {
            f[x] = 0;
        } else {
            f[x] = sym[x] ? -1 : 1;
            ++present;
        }
    }
    for (unsigned len = 1; len < 128; len <<= 1)
        for (unsigned i = 0; i < 128; i += len << 1)
            for (unsigned j = i; j < i + len; ++j) {
                int u = f[j], v = f[j + len];
                f[j] = u + v;
                f[j + len] = u - v;
            }
    int best = 0;
    unsigned best_a = 0;
    for (unsigned a = 0; a < 128; ++a)
        if (std::abs(f[a]) > std::abs(best)) {
            best = f[a];
            best_a = a;
        }
    unsigned a0 = best < 0 ? 1u : 0u;
    unsigned dist = (present - unsigned(std::abs(best))) / 2;
    return {(best_a << 1) | a0, dist};
}

std::mutex cache_mutex;
std::map<unsigned, std::shared_ptr<const InnerEcc>> cache;

}  // namespace

std::shared_ptr<const InnerEcc> InnerEcc::for_message_bits(unsigned ell) {
    if (ell == 0 || ell > 512) throw std::invalid_argument("InnerEcc: message bits must be 1..512");
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(ell);
    if (it != cache.end()) return it->second;
    auto ecc = std::shared_ptr<InnerEcc>(new InnerEcc());
    if (ell <= 16)
        ecc->build_small(ell);
    else
        ecc->build_large(ell);
    cache[ell] = ecc;
    return ecc;
}

void InnerEcc::build_small(unsigned ell) {
    small_ = true;
    ell_ = ell;
    k0_ = (ell + 3) / 4;
    n0_ = k0_ == 1 ? 1 : 4 * (k0_ - 1);  // one symbol degenerates to the bare inner code
    ellp_ = 16 * n0_;
    if (k0_ >= 2) rs_ = std::make_unique<RsCode>(gf16(), n0_, k0_);

    const auto& t = inner16();
    codewords_.assign(std::size_t(1) << (4 * k0_), {0, 0, 0});
    unsigned min_w = ellp_;
    for (uint64_t m = 0; m < codewords_.size(); ++m) {
        std::vector<uint16_t> syms;
        if (k0_ == 1) {
            syms.assign(n0_, uint16_t(m & 0xf));
        } else {
            std::vector<uint16_t> msg(k0_);
            for (unsigned i = 0; i < k0_; ++i) msg[i] = uint16_t((m >> (4 * i)) & 0xf);
            syms = rs_->encode(msg);
        }
        auto& cw = codewords_[m];
        unsigned w = 0;
        for (unsigned i = 0; i < n0_; ++i) {
            uint64_t bits = t.enc[syms[i]];
            w += unsigned(__builtin_popcountll(bits));
            unsigned pos = 16 * i;
            cw[pos >> 6] |= bits << (pos & 63);
            if ((pos & 63) > 48) cw[(pos >> 6) + 1] |= bits >> (64 - (pos & 63));
        }
        if (m != 0) min_w = std::min(min_w, w);
    }
    dmin_ = min_w;
    if (8 * dmin_ < 3 * ellp_) throw std::logic_error("InnerEcc: relative distance below 3/8");
}

void InnerEcc::build_large(unsigned ell) {
    small_ = false;
    ell_ = ell;
    k0_ = (ell + 7) / 8;
    n0_ = 4 * (k0_ - 1);
    if (n0_ > 255) throw std::invalid_argument("InnerEcc: message too wide");
    ellp_ = 128 * n0_;
    rs_ = std::make_unique<RsCode>(gf256(), n0_, k0_);
    unsigned d_inner = rm17_verified_distance();
    if (d_inner != 64) throw std::logic_error("InnerEcc: inner Reed-Muller distance check failed");
    dmin_ = rs_->distance() * d_inner;  // product bound: 3(k0-1)*64 = (3/8) ell'
    if (8 * dmin_ < 3 * ellp_) throw std::logic_error("InnerEcc: relative distance below 3/8");
}

uint64_t InnerEcc::pack(const std::vector<uint8_t>& bits) const {
    if (bits.size() > 64) throw std::invalid_argument("InnerEcc::pack: too many bits");
    uint64_t v = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) v |= uint64_t(bits[i] & 1u) << i;
    return v;
}

std::vector<uint8_t> InnerEcc::unpack(uint64_t value) const {
    std::vector<uint8_t> bits(ell_);
    for (unsigned i = 0; i < ell_ && i < 64; ++i) bits[i] = uint8_t((value >> i) & 1u);
    return bits;
}

std::vector<uint8_t> InnerEcc::encode(const std::vector<uint8_t>& msg_bits) const {
    if (msg_bits.size() != ell_) throw std::invalid_argument("InnerEcc::encode: message size mismatch");
    const unsigned sym_bits = small_ ? 4 : 8;
    std::vector<uint16_t> msg(k0_, 0);
    for (unsigned i = 0; i < ell_; ++i)
        if (msg_bits[i]) msg[i / sym_bits] |= uint16_t(1) << (i % sym_bits);

    std::vector<uint16_t> syms;
    if (small_ && k0_ == 1)
        syms.assign(n0_, msg[0]);
    else
        syms = rs_->encode(msg);

    std::vector<uint8_t> out(ellp_, 0);
    if (small_) {
        const auto& t = inner16();
        for (unsigned i = 0; i < n0_; ++i) {
            uint16_t bits = t.enc[syms[i]];
            for (unsigned j = 0; j < 16; ++j) out[16 * i + j] = uint8_t((bits >> j) & 1u);
        }
    } else {
        uint64_t cw[2];
        for (unsigned i = 0; i < n0_; ++i) {
            rm17_encode(syms[i], cw);
            for (unsigned j = 0; j < 128; ++j) out[128 * i + j] = uint8_t((cw[j >> 6] >> (j & 63)) & 1u);
        }
    }
    return out;
}

std::optional<std::vector<uint8_t>> InnerEcc::decode(const std::vector<TriBit>& received) const {
    if (received.size() != ellp_) throw std::invalid_argument("InnerEcc::decode: size mismatch");
    return small_ ? decode_small(received) : decode_large(received);
}

std::optional<std::vector<uint8_t>> InnerEcc::decode_small(const std::vector<TriBit>& received) const {
    std::array<uint64_t, 3> r{0, 0, 0}, keep{0, 0, 0};
    unsigned erased = 0;
    for (unsigned i = 0; i < ellp_; ++i) {
        if (received[i] == kTriErased) {
            ++erased;
            continue;
        }
        keep[i >> 6] |= uint64_t(1) << (i & 63);
        if (received[i]) r[i >> 6] |= uint64_t(1) << (i & 63);
    }

    // clean shortcut: every 16-bit symbol is an exact inner codeword and the
    // outer word re-encodes to itself
    if (erased == 0) {
        const auto& t = inner16();
        bool exact = true;
        std::vector<uint16_t> syms(n0_);
        for (unsigned i = 0; i < n0_ && exact; ++i) {
            unsigned pos = 16 * i;
            uint16_t bits = uint16_t((r[pos >> 6] >> (pos & 63)) |
                                     (((pos & 63) > 48) ? (r[(pos >> 6) + 1] << (64 - (pos & 63))) : 0));
            uint16_t hit = t.nearest[bits];
            if (hit >> 8) exact = false;
            syms[i] = hit & 0xff;
        }
        if (exact) {
            std::vector<uint16_t> msg(k0_);
            if (k0_ == 1) {
                msg[0] = syms[0];
                for (unsigned i = 1; i < n0_; ++i)
                    if (syms[i] != syms[0]) exact = false;
            } else {
                for (unsigned i = 0; i < k0_; ++i) msg[i] = syms[n0_ - k0_ + i];
                auto re = rs_->encode(msg);
                for (unsigned i = 0; i < n0_; ++i)
                    if (re[i] != syms[i]) exact = false;
            }
            if (exact) {
                std::vector<uint8_t> bits(ell_);
                for (unsigned i = 0; i < ell_; ++i) bits[i] = uint8_t((msg[i / 4] >> (i % 4)) & 1u);
                return bits;
            }
        }
    }

    // exhaustive nearest codeword on the non-erased coordinates
    unsigned best_d = ellp_ + 1;
    uint64_t best_m = 0;
    for (uint64_t m = 0; m < codewords_.size(); ++m) {
        const auto& cw = codewords_[m];
        unsigned d = unsigned(__builtin_popcountll((cw[0] ^ r[0]) & keep[0]) +
                              __builtin_popcountll((cw[1] ^ r[1]) & keep[1]) +
                              __builtin_popcountll((cw[2] ^ r[2]) & keep[2]));
        if (d < best_d) {
            best_d = d;
            best_m = m;
        }
    }
    if (2 * best_d + erased >= dmin_) return std::nullopt;
    std::vector<uint8_t> bits(ell_);
    for (unsigned i = 0; i < ell_; ++i) bits[i] = uint8_t((best_m >> i) & 1u);
    return bits;
}

std::optional<std::vector<uint8_t>> InnerEcc::decode_large(const std::vector<TriBit>& received) const {
    // inner ML per symbol, then erase the least reliable symbols in widening
    // trials until a Reed-Solomon candidate verifies at the bit level
    std::vector<uint16_t> hard(n0_);
    std::vector<unsigned> unreliability(n0_);  // 2*dist + erased bits
    unsigned total_bit_erasures = 0;
    for (unsigned i = 0; i < n0_; ++i) {
        unsigned er = 0;
        for (unsigned j = 0; j < 128; ++j)
            if (received[128 * i + j] == kTriErased) ++er;
        total_bit_erasures += er;
        auto [byte, dist] = rm17_ml(&received[128 * i]);
        hard[i] = uint16_t(byte);
        unreliability[i] = 2 * dist + er;
    }
    std::vector<unsigned> order(n0_);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](unsigned a, unsigned b) { return unreliability[a] > unreliability[b]; });

    const unsigned d0 = rs_->distance();
    for (unsigned rho = 0; rho < d0; ++rho) {
        std::vector<uint8_t> erased(n0_, 0);
        for (unsigned i = 0; i < rho; ++i) erased[order[i]] = 1;
        auto msg = rs_->decode(hard, erased);
        if (!msg) continue;
        // bit-level verification of the candidate
        auto cw_syms = rs_->encode(*msg);
        unsigned bit_dist = 0;
        uint64_t cw[2];
        for (unsigned i = 0; i < n0_; ++i) {
            rm17_encode(cw_syms[i], cw);
            for (unsigned j = 0; j < 128; ++j) {
                TriBit got = received[128 * i + j];
                if (got == kTriErased) continue;
                if (unsigned((cw[j >> 6] >> (j & 63)) & 1u) != got) ++bit_dist;
            }
        }
        if (2 * bit_dist + total_bit_erasures < dmin_) {
            std::vector<uint8_t> bits(ell_);
            for (unsigned i = 0; i < ell_; ++i) bits[i] = uint8_t(((*msg)[i / 8] >> (i % 8)) & 1u);
            return bits;
        }
    }
    return std::nullopt;
}

}  // namespace ecds
