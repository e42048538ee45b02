#include "ecds/crt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ecds::crt {

namespace {

// Exact comparisons against real log2 bounds: p > log2 T  <=>  2^p > T,
// and p < 500 log2 T  <=>  T^500 > 2^p.
bool above_log2(uint64_t p, const mpz_class& T) {
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), 2, static_cast<unsigned long>(p));
    return pw > T;
}

bool below_500_log2(uint64_t p, const mpz_class& T500) {
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), 2, static_cast<unsigned long>(p));
    return pw < T500;
}

long double log2_mpz(const mpz_class& x) {
    signed long exp;
    double d = mpz_get_d_2exp(&exp, x.get_mpz_t());
    return std::log2((long double)d) + (long double)exp;
}

}  // namespace

std::vector<uint64_t> nth_primes(std::size_t lo, std::size_t hi) {
    if (lo == 0 || lo > hi) throw std::invalid_argument("nth_primes: bad range");
    // p_n < n (ln n + ln ln n) for n >= 6
    std::size_t bound = 64;
    if (hi >= 6) {
        long double h = (long double)hi;
        bound = std::size_t(h * (std::log(h) + std::log(std::log(h)))) + 64;
    }
    for (;;) {
        std::vector<uint8_t> sieve(bound + 1, 1);
        sieve[0] = sieve[1] = 0;
        for (std::size_t i = 2; i * i <= bound; ++i)
            if (sieve[i])
                for (std::size_t j = i * i; j <= bound; j += i) sieve[j] = 0;
        std::vector<uint64_t> out;
        std::size_t count = 0;
        for (std::size_t v = 2; v <= bound; ++v) {
            if (!sieve[v]) continue;
            ++count;
            if (count >= lo) out.push_back(v);
            if (count == hi) return out;
        }
        bound *= 2;  // estimate fell short
    }
}

const CrtBasis::Precomp& CrtBasis::precomp() const {
    if (!precomp_) {
        auto pre = std::make_shared<Precomp>();
        pre->P = 1;
        for (uint64_t p : primes) pre->P *= p;
        pre->W.resize(primes.size());
        mpz_class M, inv;
        for (std::size_t i = 0; i < primes.size(); ++i) {
            mpz_divexact_ui(M.get_mpz_t(), pre->P.get_mpz_t(), primes[i]);
            mpz_class Mp = M % primes[i];
            if (mpz_invert(inv.get_mpz_t(), Mp.get_mpz_t(), mpz_class(primes[i]).get_mpz_t()) == 0)
                throw std::logic_error("CrtBasis: basis entries not coprime");
            pre->W[i] = M * inv;
        }
        precomp_ = std::move(pre);
    }
    return *precomp_;
}

void CrtBasis::validate() const {
    if (primes.size() < 2 || K == 0 || K >= primes.size())
        throw std::invalid_argument("CrtBasis: need K < N, N >= 2");
    mpz_class prod = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (i > 0 && primes[i] <= primes[i - 1])
            throw std::invalid_argument("CrtBasis: primes must be strictly increasing");
        if (mpz_probab_prime_p(mpz_class(primes[i]).get_mpz_t(), 32) == 0)
            throw std::invalid_argument("CrtBasis: composite basis entry");
        if (i < K) prod *= primes[i];
    }
    if (prod < T) throw std::invalid_argument("CrtBasis: first K primes do not cover T");
}

CrtBasis select_primes(const mpz_class& T) {
    if (T < 16) throw std::invalid_argument("select_primes: T must be >= 16");
    long double l2 = log2_mpz(T);
    long double ll2 = std::log2(l2);
    std::size_t K = std::size_t(std::floor(12.0L * l2 / ll2));
    if (K < 2) throw std::invalid_argument("select_primes: T too small for K >= 2");

    CrtBasis b;
    b.K = K;
    b.T = T;
    b.primes = nth_primes(K, 3 * K - 1);

    mpz_class T500;
    mpz_pow_ui(T500.get_mpz_t(), T.get_mpz_t(), 500);
    for (uint64_t p : b.primes) {
        if (!above_log2(p, T)) throw std::logic_error("select_primes: prime <= log2 T");
        if (!below_500_log2(p, T500)) throw std::logic_error("select_primes: prime >= 500 log2 T");
    }
    mpz_class prod = 1;
    for (std::size_t i = 0; i < K; ++i) prod *= b.primes[i];
    if (prod <= T) throw std::logic_error("select_primes: information primes do not exceed T");
    return b;
}

ResidueWord encode(const mpz_class& m, const CrtBasis& basis) {
    if (m < 0 || m >= basis.T) throw std::invalid_argument("crt encode: message out of range");
    ResidueWord w;
    w.symbols.reserve(basis.N());
    for (uint64_t p : basis.primes) {
        mpz_class r = m % p;
        w.symbols.emplace_back(r.get_ui());
    }
    return w;
}

std::size_t decode_radius(const CrtBasis& basis, std::size_t erasures) {
    if (erasures + basis.K >= basis.N()) return 0;
    // min/max over the (worst-case) non-erased primes is taken per call by
    // decode_unique; this helper assumes the extremes survive
    long double lp1 = std::log2((long double)basis.primes.front());
    long double lpN = std::log2((long double)basis.primes.back());
    long double r = lp1 / (lp1 + lpN) * (long double)(basis.N() - erasures - basis.K);
    return std::size_t(std::floor(r));
}

namespace {

std::size_t radius_for(const std::vector<uint64_t>& ne_primes, std::size_t K, std::size_t N,
                       std::size_t erasures) {
    if (ne_primes.empty() || erasures + K >= N) return 0;
    long double lp1 = std::log2((long double)ne_primes.front());
    long double lpN = std::log2((long double)ne_primes.back());
    long double r = lp1 / (lp1 + lpN) * (long double)(N - erasures - K);
    return std::size_t(std::floor(r));
}

std::size_t disagreements(const mpz_class& m, const ResidueWord& received, const CrtBasis& basis) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < basis.N(); ++i) {
        if (!received.symbols[i]) continue;
        mpz_class r = m % basis.primes[i];
        if (r.get_ui() != *received.symbols[i]) ++d;
    }
    return d;
}

}  // namespace

Outcome<mpz_class> decode_unique(const ResidueWord& received, const CrtBasis& basis) {
    if (received.size() != basis.N()) throw std::invalid_argument("crt decode: word length mismatch");
    const std::size_t N = basis.N();
    const std::size_t s = received.erasures();
    if (16 * s > N) return Outcome<mpz_class>::bottom();  // erasure guard

    for (std::size_t i = 0; i < N; ++i)
        if (received.symbols[i] && *received.symbols[i] >= basis.primes[i])
            throw std::invalid_argument("crt decode: residue out of range");

    std::vector<uint64_t> ne_primes;
    ne_primes.reserve(N - s);
    for (std::size_t i = 0; i < N; ++i)
        if (received.symbols[i]) ne_primes.push_back(basis.primes[i]);
    const std::size_t e_max = radius_for(ne_primes, basis.K, N, s);

    // combined residue over the non-erased coordinates, from the cached
    // full-basis weights: the weighted sum is r_i mod p_i at every kept
    // coordinate, so reducing by the punctured product keeps that property
    const auto& pre = basis.precomp();
    mpz_class z = 0;
    for (std::size_t i = 0; i < N; ++i) {
        if (!received.symbols[i]) continue;
        mpz_addmul_ui(z.get_mpz_t(), pre.W[i].get_mpz_t(), (unsigned long)*received.symbols[i]);
    }
    mpz_class P = pre.P;
    if (s > 0) {
        for (std::size_t i = 0; i < N; ++i)
            if (!received.symbols[i]) mpz_divexact_ui(P.get_mpz_t(), P.get_mpz_t(), basis.primes[i]);
    }
    z %= P;

    auto verify = [&](const mpz_class& cand) -> bool {
        return cand >= 0 && cand < basis.T && disagreements(cand, received, basis) <= e_max;
    };

    if (verify(z)) return Outcome<mpz_class>::answer(z);

    // rational reconstruction: the true message m with error-prime product D
    // satisfies D*z = D*m (mod P) with D <= pmax^e and D*m <= T*pmax^e; walk
    // the Euclidean rows (r, t) with r = t*z (mod P) and test the quotients
    if (e_max > 0) {
        mpz_class Y = 1;
        for (std::size_t i = 0; i < e_max; ++i) Y *= ne_primes.empty() ? 2 : ne_primes.back();
        mpz_class X = basis.T * Y;

        mpz_class r0 = P, r1 = z, t0 = 0, t1 = 1, q, tmp;
        while (r1 != 0) {
            // candidate from the current row
            if (t1 != 0) {
                mpz_class tt = t1 < 0 ? mpz_class(-t1) : t1;
                mpz_class rr = r1 < 0 ? mpz_class(-r1) : r1;
                if (rr <= X && tt <= Y && tt != 0) {
                    mpz_class m1 = rr / tt;
                    if (verify(m1)) return Outcome<mpz_class>::answer(m1);
                }
            }
            q = r0 / r1;
            tmp = r0 - q * r1;
            r0 = r1;
            r1 = tmp;
            tmp = t0 - q * t1;
            t0 = t1;
            t1 = tmp;
            if (r0 != 0 && r0 <= X / (Y + 1)) break;  // rows only shrink past usefulness
        }
    }
    return Outcome<mpz_class>::bottom();
}

std::pair<mpz_class, std::size_t> decode_bruteforce(const ResidueWord& received, const CrtBasis& basis,
                                                    const mpz_class& enumeration_guard) {
    if (received.size() != basis.N()) throw std::invalid_argument("crt oracle: word length mismatch");
    if (basis.T > enumeration_guard)
        throw std::invalid_argument("crt oracle: message space above enumeration guard");

    const std::size_t N = basis.N();
    std::vector<uint64_t> res(N, 0);  // residues of the running candidate
    uint64_t best_m = 0;
    std::size_t best_d = SIZE_MAX;
    const uint64_t T = mpz_class(basis.T).get_ui();
    for (uint64_t m = 0; m < T; ++m) {
        std::size_t d = 0;
        for (std::size_t i = 0; i < N; ++i) {
            if (received.symbols[i] && res[i] != *received.symbols[i]) ++d;
        }
        if (d < best_d) {
            best_d = d;
            best_m = m;
        }
        for (std::size_t i = 0; i < N; ++i) {
            if (++res[i] == basis.primes[i]) res[i] = 0;
        }
    }
    return {mpz_class(best_m), best_d};
}

}  // namespace ecds::crt
