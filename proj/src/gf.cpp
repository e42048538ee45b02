#include "ecds/gf.hpp"

#include <algorithm>

namespace ecds {

GF2w::GF2w(unsigned w) : w_(w), q_(1u << w) {
    unsigned poly;
    switch (w) {
        case 4: poly = 0x13; break;   // x^4 + x + 1
        case 8: poly = 0x11d; break;  // x^8 + x^4 + x^3 + x^2 + 1
        default: throw std::invalid_argument("GF2w: only w = 4 or 8 supported");
    }
    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    unsigned x = 1;
    for (unsigned i = 0; i < q_ - 1; ++i) {
        exp_[i] = uint16_t(x);
        log_[x] = uint16_t(i);
        x <<= 1;
        if (x & q_) x ^= poly;
    }
    if (x != 1) throw std::logic_error("GF2w: polynomial not primitive");
}

const GF2w& gf16() {
    static const GF2w f(4);
    return f;
}
const GF2w& gf256() {
    static const GF2w f(8);
    return f;
}

RsCode::RsCode(const GF2w& gf, unsigned n, unsigned k) : gf_(gf), n_(n), k_(k) {
    if (k == 0 || k >= n || n > gf.q() - 1) throw std::invalid_argument("RsCode: bad (n, k)");
    // g(x) = prod_{j=1}^{n-k} (x - alpha^j)
    gen_.assign(1, 1);
    for (unsigned j = 1; j <= n - k; ++j) {
        uint16_t root = gf_.pow_alpha(j);
        std::vector<uint16_t> next(gen_.size() + 1, 0);
        for (std::size_t i = 0; i < gen_.size(); ++i) {
            next[i + 1] ^= gen_[i];
            next[i] ^= gf_.mul(gen_[i], root);
        }
        gen_ = std::move(next);
    }
}

std::vector<uint16_t> RsCode::encode(const std::vector<uint16_t>& msg) const {
    if (msg.size() != k_) throw std::invalid_argument("RsCode::encode: message size mismatch");
    const unsigned p = n_ - k_;
    // long division of m(x) * x^p by g(x); remainder becomes the parity part
    std::vector<uint16_t> work(n_, 0);
    for (unsigned i = 0; i < k_; ++i) work[p + i] = msg[i];
    std::vector<uint16_t> rem(work);
    for (int i = int(n_) - 1; i >= int(p); --i) {
        uint16_t coef = rem[std::size_t(i)];
        if (coef == 0) continue;
        for (std::size_t j = 0; j < gen_.size(); ++j)
            rem[std::size_t(i) - (gen_.size() - 1) + j] ^= gf_.mul(coef, gen_[j]);
    }
    std::vector<uint16_t> cw(n_);
    for (unsigned i = 0; i < p; ++i) cw[i] = rem[i];
    for (unsigned i = 0; i < k_; ++i) cw[p + i] = msg[i];
    return cw;
}

std::optional<std::vector<uint16_t>> RsCode::decode(const std::vector<uint16_t>& received,
                                                    const std::vector<uint8_t>& erased) const {
    if (received.size() != n_ || erased.size() != n_)
        throw std::invalid_argument("RsCode::decode: size mismatch");
    const unsigned p = n_ - k_;  // number of syndromes

    std::vector<uint16_t> r(received);
    std::vector<unsigned> erasure_pos;
    for (unsigned i = 0; i < n_; ++i)
        if (erased[i]) {
            r[i] = 0;
            erasure_pos.push_back(i);
        }
    const unsigned rho = unsigned(erasure_pos.size());
    if (rho >= distance()) return std::nullopt;

    // syndromes S_j = r(alpha^j), j = 1..p
    std::vector<uint16_t> S(p, 0);
    bool all_zero = true;
    for (unsigned j = 0; j < p; ++j) {
        uint16_t v = 0;
        uint16_t a = gf_.pow_alpha(j + 1);
        // Horner from the top coefficient
        for (int i = int(n_) - 1; i >= 0; --i) v = uint16_t(gf_.mul(v, a) ^ r[std::size_t(i)]);
        S[j] = v;
        if (v != 0) all_zero = false;
    }
    if (all_zero && rho == 0) return std::vector<uint16_t>(r.begin() + p, r.end());

    // erasure locator Gamma(x) = prod (1 - X_i x)
    std::vector<uint16_t> gamma{1};
    for (unsigned pos : erasure_pos) {
        uint16_t X = gf_.pow_alpha(pos);
        std::vector<uint16_t> next(gamma.size() + 1, 0);
        for (std::size_t i = 0; i < gamma.size(); ++i) {
            next[i] ^= gamma[i];
            next[i + 1] ^= gf_.mul(gamma[i], X);
        }
        gamma = std::move(next);
    }

    // modified syndromes Xi(x) = S(x) * Gamma(x) mod x^p
    std::vector<uint16_t> xi(p, 0);
    for (unsigned i = 0; i < p; ++i) {
        uint16_t acc = 0;
        for (std::size_t j = 0; j <= std::min<std::size_t>(i, gamma.size() - 1); ++j)
            acc ^= gf_.mul(gamma[j], S[i - j]);
        xi[i] = acc;
    }

    // Berlekamp-Massey on the modified syndromes for the error locator
    std::vector<uint16_t> lambda{1}, prev{1};
    unsigned L = 0, m = 1;
    uint16_t b = 1;
    for (unsigned it = rho; it < p; ++it) {
        uint16_t delta = xi[it];
        for (unsigned i = 1; i <= L && i < lambda.size(); ++i)
            delta ^= gf_.mul(lambda[i], xi[it - i]);
        if (delta == 0) {
            ++m;
        } else if (2 * L <= it - rho) {
            std::vector<uint16_t> tmp = lambda;
            uint16_t coef = gf_.div(delta, b);
            if (lambda.size() < prev.size() + m) lambda.resize(prev.size() + m, 0);
            for (std::size_t i = 0; i < prev.size(); ++i)
                lambda[i + m] ^= gf_.mul(coef, prev[i]);
            L = it - rho + 1 - L;
            prev = std::move(tmp);
            b = delta;
            m = 1;
        } else {
            uint16_t coef = gf_.div(delta, b);
            if (lambda.size() < prev.size() + m) lambda.resize(prev.size() + m, 0);
            for (std::size_t i = 0; i < prev.size(); ++i)
                lambda[i + m] ^= gf_.mul(coef, prev[i]);
            ++m;
        }
    }
    if (2 * L + rho >= distance()) return std::nullopt;

    // Psi = Lambda * Gamma locates errors and erasures together
    std::vector<uint16_t> psi(lambda.size() + gamma.size() - 1, 0);
    for (std::size_t i = 0; i < lambda.size(); ++i)
        for (std::size_t j = 0; j < gamma.size(); ++j) psi[i + j] ^= gf_.mul(lambda[i], gamma[j]);

    // Omega = S * Psi mod x^p
    std::vector<uint16_t> omega(p, 0);
    for (unsigned i = 0; i < p; ++i) {
        uint16_t acc = 0;
        for (std::size_t j = 0; j <= std::min<std::size_t>(i, psi.size() - 1); ++j)
            acc ^= gf_.mul(psi[j], S[i - j]);
        omega[i] = acc;
    }

    // Chien search over the n positions; Forney magnitudes
    std::vector<uint16_t> fixed = r;
    unsigned found = 0;
    for (unsigned pos = 0; pos < n_; ++pos) {
        uint16_t Xinv = gf_.pow_alpha(((gf_.q() - 1) - pos) % (gf_.q() - 1));
        uint16_t pv = 0;
        for (std::size_t i = 0; i < psi.size(); ++i) {
            // psi evaluated at X^{-1}
            uint16_t term = psi[i];
            if (term) {
                unsigned e = (gf_.log(Xinv) * i) % (gf_.q() - 1);
                term = gf_.mul(term, gf_.pow_alpha(e));
            }
            pv ^= term;
        }
        if (pv != 0) continue;
        // derivative of psi at X^{-1} (odd-degree terms)
        uint16_t dpsi = 0;
        for (std::size_t i = 1; i < psi.size(); i += 2) {
            uint16_t term = psi[i];
            if (term) {
                unsigned e = (gf_.log(Xinv) * (i - 1)) % (gf_.q() - 1);
                term = gf_.mul(term, gf_.pow_alpha(e));
            }
            dpsi ^= term;
        }
        if (dpsi == 0) return std::nullopt;
        uint16_t ov = 0;
        for (std::size_t i = 0; i < omega.size(); ++i) {
            uint16_t term = omega[i];
            if (term) {
                unsigned e = (gf_.log(Xinv) * i) % (gf_.q() - 1);
                term = gf_.mul(term, gf_.pow_alpha(e));
            }
            ov ^= term;
        }
        // magnitude with b = 1: e = X * Omega(X^{-1}) / Psi'(X^{-1})
        uint16_t X = gf_.pow_alpha(pos);
        uint16_t mag = gf_.mul(X, gf_.div(ov, dpsi));
        fixed[pos] ^= mag;
        ++found;
    }
    if (found == 0 && !all_zero) return std::nullopt;

    // verify: all syndromes of the corrected word must vanish
    for (unsigned j = 0; j < p; ++j) {
        uint16_t v = 0;
        uint16_t a = gf_.pow_alpha(j + 1);
        for (int i = int(n_) - 1; i >= 0; --i) v = uint16_t(gf_.mul(v, a) ^ fixed[std::size_t(i)]);
        if (v != 0) return std::nullopt;
    }
    return std::vector<uint16_t>(fixed.begin() + p, fixed.end());
}

}  // namespace ecds
