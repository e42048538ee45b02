#include "ecds/polyeval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ecds::pe {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t mod) {
    return uint64_t((__uint128_t)a * b % mod);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t mod) {
    uint64_t r = 1 % mod;
    a %= mod;
    while (e) {
        if (e & 1) r = mulmod(r, a, mod);
        a = mulmod(a, a, mod);
        e >>= 1;
    }
    return r;
}

void UniPoly::validate() const {
    if (modulus < 2) throw std::invalid_argument("UniPoly: modulus must be >= 2");
    for (uint64_t c : coeffs)
        if (c >= modulus) throw std::invalid_argument("UniPoly: coefficient out of range");
}

uint64_t UniPoly::eval(uint64_t a) const {
    if (a >= modulus) throw std::invalid_argument("UniPoly: point out of range");
    uint64_t acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = (mulmod(acc, a, modulus) + *it) % modulus;
    return acc;
}

MultiPoly MultiPoly::reduced(uint64_t p) const {
    MultiPoly out;
    out.modulus = p;
    out.vars = vars;
    out.var_degree_bound = var_degree_bound;
    out.terms.reserve(terms.size());
    for (const auto& t : terms) {
        uint64_t c = t.coeff % p;
        out.terms.push_back({t.exps, c});
    }
    return out;
}

uint64_t MultiPoly::eval(const std::vector<uint64_t>& point) const {
    if (point.size() != vars) throw std::invalid_argument("MultiPoly: point arity mismatch");
    // per-variable power tables up to the degree bound
    std::vector<uint64_t> pow_table(std::size_t(vars) * var_degree_bound, 1 % modulus);
    for (unsigned v = 0; v < vars; ++v) {
        uint64_t x = point[v] % modulus;
        for (unsigned e = 1; e < var_degree_bound; ++e)
            pow_table[v * var_degree_bound + e] = mulmod(pow_table[v * var_degree_bound + e - 1], x, modulus);
    }
    uint64_t acc = 0;
    for (const auto& t : terms) {
        uint64_t term = t.coeff % modulus;
        for (unsigned v = 0; v < vars; ++v)
            term = mulmod(term, pow_table[v * var_degree_bound + t.exps[v]], modulus);
        acc = (acc + term) % modulus;
    }
    return acc;
}

mpz_class MultiPoly::eval_z(const std::vector<uint64_t>& point) const {
    if (point.size() != vars) throw std::invalid_argument("MultiPoly: point arity mismatch");
    mpz_class acc = 0;
    for (const auto& t : terms) {
        mpz_class term = mpz_class(mpz_class(t.coeff));
        for (unsigned v = 0; v < vars; ++v) {
            mpz_class pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), (unsigned long)point[v], t.exps[v]);
            term *= pw;
        }
        acc += term;
    }
    return acc;
}

MultiPoly multilinear_extend(const UniPoly& g, unsigned d, unsigned m) {
    g.validate();
    if (d < 2) throw std::invalid_argument("multilinear_extend: need d >= 2");
    long double cap = std::pow((long double)d, (long double)m);
    if ((long double)g.degree() >= cap)
        throw std::invalid_argument("multilinear_extend: degree too large for d^m digits");

    MultiPoly out;
    out.modulus = g.modulus;
    out.vars = m;
    out.var_degree_bound = d;
    std::map<std::vector<uint16_t>, uint64_t> acc;
    for (std::size_t i = 0; i < g.coeffs.size(); ++i) {
        if (g.coeffs[i] == 0) continue;
        std::vector<uint16_t> exps(m, 0);
        std::size_t rest = i;
        for (unsigned j = 0; j < m; ++j) {
            exps[j] = uint16_t(rest % d);
            rest /= d;
        }
        auto [it, fresh] = acc.emplace(std::move(exps), 0);
        it->second = (it->second + g.coeffs[i]) % g.modulus;
    }
    for (auto& [e, c] : acc)
        if (c) out.terms.push_back({e, c});
    return out;
}

std::vector<uint64_t> lift_point(uint64_t a, uint64_t n, unsigned d, unsigned m) {
    if (a >= n) throw std::invalid_argument("lift_point: a out of range");
    std::vector<uint64_t> out(m);
    uint64_t x = a % n;
    for (unsigned j = 0; j < m; ++j) {
        out[j] = x;
        if (j + 1 < m) x = powmod(x, d, n);
    }
    return out;
}

std::vector<uint64_t> reduce_point(const std::vector<uint64_t>& point, uint64_t p) {
    std::vector<uint64_t> out(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) out[i] = point[i] % p;
    return out;
}

void PolyEvalParams::derive() {
    if (n < 2 || s < 2 || s > n) throw std::invalid_argument("pe: need 2 <= s <= n");
    if (C <= 1.0) throw std::invalid_argument("pe: C must exceed 1");
    long double l2s = std::log2((long double)s);
    d = unsigned(std::ceil(std::pow(l2s, (long double)C)));
    if (d < 2) d = 2;
    m = 1;
    long double power = d;
    while (power < (long double)s + 1) {
        ++m;
        power *= d;
    }
    if (m > 4) throw std::invalid_argument("pe: more than 4 variables unsupported");
}

void PolyEvalParams::validate() const {
    if (d < 2 || m < 1) throw std::invalid_argument("pe: parameters not derived");
    long double cap = std::pow((long double)d, (long double)m);
    if (cap < (long double)s + 1) throw std::logic_error("pe: d^m below s+1");
    if (lambda <= 0.0 || lambda >= 1.0) throw std::invalid_argument("pe: lambda outside (0,1)");
}

mpz_class PolyEvalParams::T1() const {
    mpz_class t, base = n;
    mpz_pow_ui(t.get_mpz_t(), base.get_mpz_t(), (unsigned long)(uint64_t(d) * m + 1));
    mpz_class dm;
    mpz_ui_pow_ui(dm.get_mpz_t(), d, m);
    return dm * t;
}

mpz_class PolyEvalParams::T2(uint64_t p1_max) const {
    mpz_class t, base = p1_max;
    mpz_pow_ui(t.get_mpz_t(), base.get_mpz_t(), (unsigned long)(uint64_t(d) * m + 1));
    mpz_class dm;
    mpz_ui_pow_ui(dm.get_mpz_t(), d, m);
    return dm * t;
}

double PolyEvalParams::lambda0() const { return lambda * lambda * lambda / 68719476736.0; }

bool PolyEvalParams::trivial_mode_applies() const {
    return s < 64 && (mpz_class(1) << (unsigned long)s) <= n;
}

uint64_t pack_point(const std::vector<uint64_t>& coords) {
    if (coords.size() > 4) throw std::invalid_argument("pack_point: more than 4 coordinates");
    uint64_t packed = 0;
    for (std::size_t j = 0; j < coords.size(); ++j) {
        if (coords[j] >= (1u << 16)) throw std::invalid_argument("pack_point: coordinate too wide");
        packed |= coords[j] << (16 * j);
    }
    return packed;
}

EvalTables build_tables(const UniPoly& g, const PolyEvalParams& params) {
    params.validate();
    g.validate();
    if (g.modulus != params.n) throw std::invalid_argument("build_tables: modulus mismatch");
    if (g.degree() > params.s) throw std::invalid_argument("build_tables: degree above bound");

    EvalTables t;
    t.basis1 = crt::select_primes(params.T1());
    t.basis2 = crt::select_primes(params.T2(t.basis1.primes.back()));
    const auto& P1 = t.basis1.primes;
    const auto& P2 = t.basis2.primes;
    if (P2.back() >= (1u << 16)) throw std::invalid_argument("build_tables: primes too wide to pack");

    MultiPoly gt = multilinear_extend(g, params.d, params.m);

    // lifted points over Z_n, one per evaluation point
    std::vector<std::vector<uint64_t>> lifts(params.n);
    for (uint64_t a = 0; a < params.n; ++a) lifts[a] = lift_point(a, params.n, params.d, params.m);

    t.pairs.resize(P1.size() * P2.size());
    t.max_points = 0;
    for (std::size_t i1 = 0; i1 < P1.size(); ++i1) {
        MultiPoly g1 = gt.reduced(P1[i1]);
        for (std::size_t i2 = 0; i2 < P2.size(); ++i2) {
            MultiPoly g12 = g1.reduced(P2[i2]);
            PairTable& pt = t.pairs[i1 * P2.size() + i2];
            pt.points.reserve(params.n);
            for (uint64_t a = 0; a < params.n; ++a) {
                auto q = reduce_point(reduce_point(lifts[a], P1[i1]), P2[i2]);
                pt.points.push_back(pack_point(q));
            }
            std::sort(pt.points.begin(), pt.points.end());
            pt.points.erase(std::unique(pt.points.begin(), pt.points.end()), pt.points.end());
            pt.values.resize(pt.points.size());
            std::vector<uint64_t> coords(params.m);
            for (std::size_t idx = 0; idx < pt.points.size(); ++idx) {
                for (unsigned j = 0; j < params.m; ++j) coords[j] = (pt.points[idx] >> (16 * j)) & 0xffff;
                pt.values[idx] = uint16_t(g12.eval(coords));
            }
            t.max_points = std::max<uint64_t>(t.max_points, pt.points.size());
        }
    }
    // equalize pair blocks with repetition and assign flat offsets
    uint64_t offset = 0;
    for (auto& pt : t.pairs) {
        pt.copies = (t.max_points + pt.points.size() - 1) / pt.points.size();
        pt.flat_offset = offset;
        offset += pt.copies * pt.points.size();
    }
    t.query_count = offset;
    unsigned bits = 0;
    while ((uint64_t(1) << bits) < P2.back()) ++bits;
    t.answer_bits = bits;  // ceil(log2 p_max)
    return t;
}

CollisionAudit collision_probability_audit(uint64_t n, unsigned d, unsigned m, uint64_t p1,
                                           uint64_t p2, uint64_t samples, uint64_t exhaustive_limit,
                                           uint64_t seed) {
    CollisionAudit audit;
    audit.bound = 4.0 / double(p2);
    std::map<uint64_t, uint64_t> mass;
    if (n <= exhaustive_limit) {
        audit.samples = n;
        for (uint64_t a = 0; a < n; ++a) {
            auto q = reduce_point(reduce_point(lift_point(a, n, d, m), p1), p2);
            ++mass[pack_point(q)];
        }
    } else {
        if (samples == 0) samples = 1u << 16;
        audit.samples = samples;
        RandomSource rng(seed);
        for (uint64_t i = 0; i < samples; ++i) {
            uint64_t a = rng.uniform(n);
            auto q = reduce_point(reduce_point(lift_point(a, n, d, m), p1), p2);
            ++mass[pack_point(q)];
        }
    }
    uint64_t worst = 0;
    for (const auto& [q, c] : mass) worst = std::max(worst, c);
    audit.max_mass = double(worst) / double(audit.samples);
    audit.holds = audit.max_mass <= audit.bound;
    return audit;
}

std::shared_ptr<PolyEvalStructure> PolyEvalStructure::build(UniPoly g, PolyEvalParams params,
                                                            uint64_t seed) {
    params.derive();
    params.validate();

    auto st = std::shared_ptr<PolyEvalStructure>(new PolyEvalStructure());
    st->params_ = params;
    st->g_ = std::move(g);
    st->gt_ = multilinear_extend(st->g_, params.d, params.m);
    st->tables_ = build_tables(st->g_, params);
    st->seed_ = seed;

    st->nb_ = make_nb_scheme(st->tables_.query_count, st->tables_.answer_bits);

    std::vector<uint64_t> answers(st->tables_.query_count);
    for (const auto& pt : st->tables_.pairs) {
        uint64_t at = pt.flat_offset;
        for (uint64_t copy = 0; copy < pt.copies; ++copy)
            for (std::size_t idx = 0; idx < pt.points.size(); ++idx) answers[at++] = pt.values[idx];
    }
    st->encoded_ = nb_encode(answers, st->nb_);
    return st;
}

DsContract PolyEvalStructure::contract() const {
    DsContract c;
    c.probes = uint64_t(tables_.pairs.size()) * nb_.probes_per_answer();
    c.delta = measured_tau0();
    c.epsilon = 0.25;
    c.lambda = params_.lambda;
    c.length = encoded_.size();
    return c;
}

double PolyEvalStructure::measured_tau0() const {
    // A silently wrong answer needs 2e+s > d_ecc over its inner codeword;
    // each flip buys at most 2*kb/(radius+2) of that through block rewrites.
    const auto& rl = nb_.rldc;
    uint64_t d_ecc = nb_.ecc->min_distance();
    uint64_t f_max = d_ecc * (rl.accept_radius + 2) / (2 * rl.block->message_bits());
    return double(f_max) / double(encoded_.size());
}

Outcome<uint64_t> PolyEvalStructure::decode(ProbeView& view, uint64_t a, RandomSource& rng) const {
    if (a >= params_.n) throw std::out_of_range("pe: evaluation point out of range");
    const auto& P1 = tables_.basis1.primes;
    const auto& P2 = tables_.basis2.primes;

    auto lift = lift_point(a, params_.n, params_.d, params_.m);

    crt::ResidueWord outer;
    outer.symbols.assign(P1.size(), std::nullopt);
    for (std::size_t i1 = 0; i1 < P1.size(); ++i1) {
        auto l1 = reduce_point(lift, P1[i1]);
        crt::ResidueWord inner;
        inner.symbols.assign(P2.size(), std::nullopt);
        for (std::size_t i2 = 0; i2 < P2.size(); ++i2) {
            const PairTable& pt = tables_.pair(i1, i2);
            uint64_t packed = pack_point(reduce_point(l1, P2[i2]));
            auto it = std::lower_bound(pt.points.begin(), pt.points.end(), packed);
            if (it == pt.points.end() || *it != packed)
                throw std::logic_error("pe decode: point missing from table");
            uint64_t idx = uint64_t(it - pt.points.begin());
            uint64_t copy = rng.uniform(pt.copies);
            uint64_t flat = pt.flat_offset + copy * pt.points.size() + idx;
            auto v = nb_decode(view, flat, nb_, rng);
            // answers at or above p2 are provably wrong; surface them as erasures
            if (v.is_answer() && v.value() < P2[i2]) inner.symbols[i2] = v.value();
        }
        auto v1 = crt::decode_unique(inner, tables_.basis2);
        if (v1.is_answer()) {
            mpz_class r = v1.value() % P1[i1];
            outer.symbols[i1] = r.get_ui();
        }
    }
    auto v = crt::decode_unique(outer, tables_.basis1);
    if (v.is_bottom()) return Outcome<uint64_t>::bottom();
    mpz_class ans = v.value() % mpz_class(params_.n);
    return Outcome<uint64_t>::answer(ans.get_ui());
}

std::vector<uint64_t> PolyEvalStructure::probe_pool(uint64_t a) const {
    // all blocks any copy of this point's answers can touch
    std::vector<uint64_t> pool;
    const auto& P1 = tables_.basis1.primes;
    const auto& P2 = tables_.basis2.primes;
    const unsigned ellp = nb_.ecc->codeword_bits();
    const unsigned kb = nb_.rldc.block->message_bits();
    const unsigned nbits = nb_.rldc.block->codeword_bits();
    auto lift = lift_point(a, params_.n, params_.d, params_.m);
    for (std::size_t i1 = 0; i1 < P1.size(); ++i1) {
        auto l1 = reduce_point(lift, P1[i1]);
        for (std::size_t i2 = 0; i2 < P2.size(); ++i2) {
            const PairTable& pt = tables_.pair(i1, i2);
            uint64_t packed = pack_point(reduce_point(l1, P2[i2]));
            auto it = std::lower_bound(pt.points.begin(), pt.points.end(), packed);
            if (it == pt.points.end() || *it != packed) continue;
            uint64_t idx = uint64_t(it - pt.points.begin());
            for (uint64_t copy = 0; copy < pt.copies; ++copy) {
                uint64_t flat = pt.flat_offset + copy * pt.points.size() + idx;
                uint64_t first_block = flat * ellp / kb;
                uint64_t last_block = (flat * ellp + ellp - 1) / kb;
                for (uint64_t blk = first_block; blk <= last_block; ++blk)
                    for (unsigned tbit = 0; tbit < nbits; ++tbit) pool.push_back(blk * nbits + tbit);
            }
        }
    }
    return pool;
}

CorruptionContext PolyEvalStructure::corruption_context() const {
    CorruptionContext ctx;
    ctx.block_bits = nb_.rldc.block->codeword_bits();
    ctx.query_count = params_.n;
    ctx.probe_pool = [this](uint64_t q) { return probe_pool(q); };
    return ctx;
}

Container PolyEvalStructure::to_container() const {
    Container c;
    c.kind = ContainerKind::polyeval;
    c.put_u64("n", params_.n);
    c.put_u64("s", params_.s);
    std::ostringstream cs;
    cs << params_.C;
    c.put("C", cs.str());
    std::ostringstream ls;
    ls << params_.lambda;
    c.put("lambda", ls.str());
    c.put_u64("d", params_.d);
    c.put_u64("m", params_.m);
    c.put_u64("seed", seed_);
    c.put("mode", "two-tier");
    auto primes_csv = [](const std::vector<uint64_t>& ps) {
        std::ostringstream out;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (i) out << ',';
            out << ps[i];
        }
        return out.str();
    };
    c.put("p1", primes_csv(tables_.basis1.primes));
    c.put("p2", primes_csv(tables_.basis2.primes));
    std::ostringstream coeffs;
    for (std::size_t i = 0; i < g_.coeffs.size(); ++i) {
        if (i) coeffs << ',';
        coeffs << g_.coeffs[i];
    }
    c.put("coeffs", coeffs.str());
    c.word = encoded_;
    return c;
}

std::shared_ptr<PolyEvalStructure> PolyEvalStructure::from_container(const Container& c) {
    if (c.kind != ContainerKind::polyeval || c.meta("mode") != "two-tier")
        throw std::invalid_argument("from_container: not a two-tier polyeval container");
    PolyEvalParams p;
    p.n = c.meta_u64("n");
    p.s = c.meta_u64("s");
    p.C = std::stod(c.meta("C"));
    p.lambda = std::stod(c.meta("lambda"));
    UniPoly g;
    g.modulus = p.n;
    {
        std::istringstream in(c.meta("coeffs"));
        std::string tok;
        while (std::getline(in, tok, ','))
            if (!tok.empty()) g.coeffs.push_back(std::stoull(tok));
    }
    return build(std::move(g), p, c.meta_u64("seed"));
}

std::shared_ptr<TrivialPolyEval> TrivialPolyEval::build(UniPoly g, PolyEvalParams params) {
    params.derive();
    if (!params.trivial_mode_applies())
        throw std::invalid_argument("trivial polyeval: s exceeds log2 n");
    g.validate();
    if (g.modulus != params.n || g.degree() > params.s)
        throw std::invalid_argument("trivial polyeval: polynomial does not fit parameters");

    auto st = std::shared_ptr<TrivialPolyEval>(new TrivialPolyEval());
    st->params_ = params;
    st->g_ = std::move(g);
    unsigned width = 1;
    while ((uint64_t(1) << width) <= params.n - 1) ++width;  // floor(log2 n) + 1
    st->width_ = width;
    unsigned ell = unsigned((params.s + 1) * width);
    st->ecc_ = InnerEcc::for_message_bits(ell);

    std::vector<uint8_t> bits(ell, 0);
    for (uint64_t i = 0; i <= params.s; ++i) {
        uint64_t cv = i < st->g_.coeffs.size() ? st->g_.coeffs[i] : 0;
        for (unsigned b = 0; b < width; ++b) bits[i * width + b] = uint8_t((cv >> b) & 1u);
    }
    auto cw = st->ecc_->encode(bits);
    BitWord word(cw.size());
    for (std::size_t i = 0; i < cw.size(); ++i)
        if (cw[i]) word.set(i, true);
    st->encoded_ = std::move(word);
    return st;
}

DsContract TrivialPolyEval::contract() const {
    DsContract c;
    c.probes = encoded_.size();
    c.delta = double((ecc_->min_distance() - 1) / 2) / double(encoded_.size());
    c.epsilon = 0.0;
    c.lambda = 0.0;
    c.length = encoded_.size();
    return c;
}

Outcome<uint64_t> TrivialPolyEval::decode(ProbeView& view, uint64_t a, RandomSource&) const {
    if (a >= params_.n) throw std::out_of_range("trivial polyeval: point out of range");
    std::vector<TriBit> received(encoded_.size());
    for (std::size_t i = 0; i < received.size(); ++i) received[i] = TriBit(view.read(i) ? 1 : 0);
    auto msg = ecc_->decode(received);
    if (!msg) return Outcome<uint64_t>::bottom();
    UniPoly g;
    g.modulus = params_.n;
    g.coeffs.resize(params_.s + 1);
    for (uint64_t i = 0; i <= params_.s; ++i) {
        uint64_t cv = 0;
        for (unsigned b = 0; b < width_; ++b) cv |= uint64_t((*msg)[i * width_ + b] & 1u) << b;
        if (cv >= params_.n) return Outcome<uint64_t>::bottom();  // corrupt beyond repair
        g.coeffs[i] = cv;
    }
    return Outcome<uint64_t>::answer(g.eval(a));
}

Container TrivialPolyEval::to_container() const {
    Container c;
    c.kind = ContainerKind::polyeval;
    c.put_u64("n", params_.n);
    c.put_u64("s", params_.s);
    c.put("mode", "trivial");
    std::ostringstream coeffs;
    for (std::size_t i = 0; i < g_.coeffs.size(); ++i) {
        if (i) coeffs << ',';
        coeffs << g_.coeffs[i];
    }
    c.put("coeffs", coeffs.str());
    c.word = encoded_;
    return c;
}

std::shared_ptr<TrivialPolyEval> TrivialPolyEval::from_container(const Container& c) {
    if (c.kind != ContainerKind::polyeval || c.meta("mode") != "trivial")
        throw std::invalid_argument("from_container: not a trivial polyeval container");
    PolyEvalParams p;
    p.n = c.meta_u64("n");
    p.s = c.meta_u64("s");
    UniPoly g;
    g.modulus = p.n;
    std::istringstream in(c.meta("coeffs"));
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty()) g.coeffs.push_back(std::stoull(tok));
    return build(std::move(g), p);
}

}  // namespace ecds::pe
