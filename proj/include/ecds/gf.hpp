#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ecds {

/// GF(2^w) for w in {4, 8}, log/antilog tables over a primitive polynomial.
class GF2w {
  public:
    explicit GF2w(unsigned w);

    unsigned w() const { return w_; }
    unsigned q() const { return q_; }

    uint16_t add(uint16_t a, uint16_t b) const { return a ^ b; }
    uint16_t mul(uint16_t a, uint16_t b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[(log_[a] + log_[b]) % (q_ - 1)];
    }
    uint16_t inv(uint16_t a) const {
        if (a == 0) throw std::domain_error("GF2w: inverse of zero");
        return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    }
    uint16_t div(uint16_t a, uint16_t b) const { return mul(a, inv(b)); }
    uint16_t pow_alpha(unsigned e) const { return exp_[e % (q_ - 1)]; }
    unsigned log(uint16_t a) const {
        if (a == 0) throw std::domain_error("GF2w: log of zero");
        return log_[a];
    }

  private:
    unsigned w_, q_;
    std::vector<uint16_t> exp_, log_;
};

const GF2w& gf16();
const GF2w& gf256();

/// Reed-Solomon [n, k, n-k+1] over GF(2^w), n <= 2^w - 1 (shortened allowed).
/// Systematic: codeword coefficients 0..n-k-1 are parity, n-k..n-1 carry the
/// message. Decoding corrects nu errors and rho erasures whenever
/// 2*nu + rho < n - k + 1 (Berlekamp-Massey with erasure initialization,
/// Chien search, Forney magnitudes).
class RsCode {
  public:
    RsCode(const GF2w& gf, unsigned n, unsigned k);

    unsigned n() const { return n_; }
    unsigned k() const { return k_; }
    unsigned distance() const { return n_ - k_ + 1; }

    std::vector<uint16_t> encode(const std::vector<uint16_t>& msg) const;

    /// erased[i] true marks position i as an erasure (its symbol is ignored).
    std::optional<std::vector<uint16_t>> decode(const std::vector<uint16_t>& received,
                                                const std::vector<uint8_t>& erased) const;

  private:
    const GF2w& gf_;
    unsigned n_, k_;
    std::vector<uint16_t> gen_;  // generator polynomial, degree n-k
};

}  // namespace ecds
