#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "ecds/outcome.hpp"

namespace ecds::crt {

/// Residue code basis: strictly increasing primes, the first K of which
/// multiply past the message bound T. Rate K/N, distance N-K+1.
struct CrtBasis {
    std::vector<uint64_t> primes;
    std::size_t K = 0;
    mpz_class T;

    std::size_t N() const { return primes.size(); }
    void validate() const;

    /// Lazily built interpolation weights: W_i = (P/p_i) * ((P/p_i)^-1 mod p_i).
    struct Precomp {
        mpz_class P;
        std::vector<mpz_class> W;
    };
    const Precomp& precomp() const;

  private:
    mutable std::shared_ptr<const Precomp> precomp_;
};

/// Residue word; a missing symbol is an erasure.
struct ResidueWord {
    std::vector<std::optional<uint64_t>> symbols;

    std::size_t size() const { return symbols.size(); }
    std::size_t erasures() const {
        std::size_t s = 0;
        for (const auto& v : symbols)
            if (!v) ++s;
        return s;
    }
};

/// Basis selection: K = floor(12*log2(T) / log2(log2(T))), primes
/// q_K .. q_{3K-1} (1-indexed; q_1 = 2). Checks, exactly in integer
/// arithmetic, that every prime p satisfies log2(T) < p < 500*log2(T) and
/// that the first K primes multiply past T; rate is K/(2K) = 1/2.
CrtBasis select_primes(const mpz_class& T);

ResidueWord encode(const mpz_class& m, const CrtBasis& basis);

/// Errors the unique decoder is guaranteed to correct, given s erasures:
/// floor( log2(pmin) / (log2(pmin) + log2(pmax)) * (N - s - K) ) with
/// pmin/pmax over the non-erased primes.
std::size_t decode_radius(const CrtBasis& basis, std::size_t erasures);

/// Unique decoding by rational reconstruction on the punctured code, with
/// re-encode verification; returns bottom beyond the radius or when more
/// than a 1/16 fraction of symbols are erased.
Outcome<mpz_class> decode_unique(const ResidueWord& received, const CrtBasis& basis);

/// Test oracle: the message minimizing disagreement on non-erased
/// coordinates, ties toward the smaller message. Guarded enumeration.
std::pair<mpz_class, std::size_t> decode_bruteforce(const ResidueWord& received, const CrtBasis& basis,
                                                    const mpz_class& enumeration_guard = mpz_class(1) << 24);

/// Primes q_lo .. q_hi of the increasing prime sequence, 1-indexed.
std::vector<uint64_t> nth_primes(std::size_t lo, std::size_t hi);

}  // namespace ecds::crt
