#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

namespace ecds {

/// Decoder result: either a value or the "don't know" symbol (bottom).
template <typename A>
class Outcome {
  public:
    static Outcome answer(A v) { return Outcome(true, std::move(v)); }
    static Outcome bottom() { return Outcome(false, A{}); }

    bool is_answer() const { return has_; }
    bool is_bottom() const { return !has_; }

    const A& value() const {
        if (!has_) throw std::logic_error("Outcome: value() on bottom");
        return v_;
    }

    bool operator==(const Outcome& o) const {
        return has_ == o.has_ && (!has_ || v_ == o.v_);
    }

  private:
    Outcome(bool has, A v) : has_(has), v_(std::move(v)) {}
    bool has_;
    A v_;
};

/// The (t, delta, epsilon, lambda) decoding contract a structure promises
/// over words of length N: at most t bit probes per query, any delta-fraction
/// of flips tolerated, per-query error at most epsilon, and at most a
/// lambda-fraction of queries lost (answered by bottom too often).
struct DsContract {
    uint64_t probes = 1;       // t
    double delta = 0.0;        // tolerated noise fraction
    double epsilon = 0.0;      // per-query error bound
    double lambda = 0.0;       // unrecoverable-query fraction
    uint64_t length = 1;       // N

    void validate() const {
        if (probes < 1) throw std::invalid_argument("DsContract: t must be >= 1");
        if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("DsContract: delta outside [0,1]");
        if (epsilon < 0.0 || epsilon > 0.5) throw std::invalid_argument("DsContract: epsilon outside [0,1/2]");
        if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("DsContract: lambda outside [0,1]");
        if (length < 1) throw std::invalid_argument("DsContract: N must be >= 1");
    }
};

}  // namespace ecds
