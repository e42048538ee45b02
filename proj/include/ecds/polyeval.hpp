#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ecds/container.hpp"
#include "ecds/crt.hpp"
#include "ecds/inner_ecc.hpp"
#include "ecds/measure.hpp"
#include "ecds/nbwrap.hpp"

namespace ecds::pe {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t mod);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t mod);

/// Univariate polynomial over Z_n, degree at most s.
struct UniPoly {
    uint64_t modulus = 0;
    std::vector<uint64_t> coeffs;  // coeffs[i] * X^i, entries in [0, modulus)

    uint64_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    uint64_t eval(uint64_t a) const;  // Horner mod modulus
    void validate() const;
};

/// Sparse multivariate polynomial, per-variable degree < var_degree_bound.
struct MultiPoly {
    uint64_t modulus = 0;
    unsigned vars = 0;
    unsigned var_degree_bound = 0;

    struct Term {
        std::vector<uint16_t> exps;
        uint64_t coeff;
    };
    std::vector<Term> terms;

    MultiPoly reduced(uint64_t p) const;
    uint64_t eval(const std::vector<uint64_t>& point) const;
    mpz_class eval_z(const std::vector<uint64_t>& point) const;  // exact over the integers
};

/// Base-d digit expansion of each exponent turns X^i into a product of the m
/// variables; requires d^m > deg(g).
MultiPoly multilinear_extend(const UniPoly& g, unsigned d, unsigned m);

/// (a, a^d, a^{d^2}, ..., a^{d^{m-1}}) mod n, by repeated d-th powering.
std::vector<uint64_t> lift_point(uint64_t a, uint64_t n, unsigned d, unsigned m);
std::vector<uint64_t> reduce_point(const std::vector<uint64_t>& point, uint64_t p);

struct PolyEvalParams {
    uint64_t n = 0;       // modulus
    uint64_t s = 0;       // degree bound
    double C = 2.0;       // extension constant (> 1)
    double lambda = 0.05;

    unsigned d = 0, m = 0;  // derived: d = ceil((log2 s)^C), smallest m with d^m >= s+1
    void derive();
    void validate() const;

    mpz_class T1() const;                 // d^m * n^(d*m+1)
    mpz_class T2(uint64_t p1_max) const;  // d^m * p1_max^(d*m+1)
    double lambda0() const;               // lambda^3 * 2^-36
    bool trivial_mode_applies() const;    // s <= log2 n
};

/// Per-(p1,p2) evaluation table: deduplicated points of the reduced lift, in
/// ascending packed order, one value per point, repeated ceil(L/|B|) times in
/// the flat answer list so all pair blocks have nearly equal length.
struct PairTable {
    std::vector<uint64_t> points;   // packed: coordinate j in bits 16j..16j+15
    std::vector<uint16_t> values;   // g reduced, evaluated at each point
    uint64_t copies = 1;
    uint64_t flat_offset = 0;       // first flat answer index of this pair
};

uint64_t pack_point(const std::vector<uint64_t>& coords);

struct EvalTables {
    crt::CrtBasis basis1, basis2;
    std::vector<PairTable> pairs;   // index = i1 * |P2| + i2
    uint64_t max_points = 0;        // L
    unsigned answer_bits = 0;       // ceil(log2 p_max)
    uint64_t query_count = 0;       // sum of copies * |B|

    const PairTable& pair(std::size_t i1, std::size_t i2) const {
        return pairs[i1 * basis2.N() + i2];
    }
};

EvalTables build_tables(const UniPoly& g, const PolyEvalParams& params);

/// Exact max point mass of the reduced lift over a in Z_n, and the 4/p2
/// bound it is audited against. Exhaustive when n <= exhaustive_limit,
/// seeded sampling otherwise.
struct CollisionAudit {
    double max_mass = 0.0;
    double bound = 0.0;
    bool holds = false;
    uint64_t samples = 0;
};
CollisionAudit collision_probability_audit(uint64_t n, unsigned d, unsigned m, uint64_t p1,
                                           uint64_t p2, uint64_t samples = 0,
                                           uint64_t exhaustive_limit = 1u << 20, uint64_t seed = 1);

class PolyEvalStructure final : public Structure {
  public:
    static std::shared_ptr<PolyEvalStructure> build(UniPoly g, PolyEvalParams params, uint64_t seed);

    static std::shared_ptr<PolyEvalStructure> from_container(const Container& c);
    Container to_container() const;

    DsContract contract() const override;
    const BitWord& encoded() const override { return encoded_; }
    uint64_t query_count() const override { return params_.n; }
    Outcome<uint64_t> decode(ProbeView& view, uint64_t query, RandomSource& rng) const override;
    uint64_t truth(uint64_t query) const override { return g_.eval(query); }
    CorruptionContext corruption_context() const override;

    /// Largest noise fraction below which no answer can silently decode to a
    /// wrong value under the per-block reference decoder.
    double measured_tau0() const;

    const PolyEvalParams& params() const { return params_; }
    const EvalTables& tables() const { return tables_; }
    const NbScheme& nb() const { return nb_; }
    const UniPoly& poly() const { return g_; }
    const MultiPoly& extension() const { return gt_; }

    std::vector<uint64_t> probe_pool(uint64_t a) const;

  private:
    PolyEvalStructure() = default;

    PolyEvalParams params_;
    UniPoly g_;
    MultiPoly gt_;
    EvalTables tables_;
    NbScheme nb_;
    BitWord encoded_;
    uint64_t seed_ = 0;
};

/// Coefficient table behind one wide inner-ECC block; the decoder reads
/// everything, corrects, and evaluates directly.
class TrivialPolyEval final : public Structure {
  public:
    static std::shared_ptr<TrivialPolyEval> build(UniPoly g, PolyEvalParams params);

    static std::shared_ptr<TrivialPolyEval> from_container(const Container& c);
    Container to_container() const;

    DsContract contract() const override;
    const BitWord& encoded() const override { return encoded_; }
    uint64_t query_count() const override { return params_.n; }
    Outcome<uint64_t> decode(ProbeView& view, uint64_t query, RandomSource& rng) const override;
    uint64_t truth(uint64_t query) const override { return g_.eval(query); }

    unsigned value_bits() const { return width_; }
    const InnerEcc& ecc() const { return *ecc_; }

  private:
    TrivialPolyEval() = default;
    PolyEvalParams params_;
    UniPoly g_;
    unsigned width_ = 0;
    std::shared_ptr<const InnerEcc> ecc_;
    BitWord encoded_;
};

}  // namespace ecds::pe
