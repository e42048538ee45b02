#pragma once

#include <cstdint>
#include <random>

namespace ecds {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded random stream. Identical seed and draw order reproduce identical
/// values; no ambient randomness anywhere in the library.
class RandomSource {
  public:
    explicit RandomSource(uint64_t seed = 0) : seed_(seed), eng_(splitmix64(seed)) {}

    uint64_t seed() const { return seed_; }
    uint64_t draws() const { return draws_; }

    uint64_t next_u64() {
        ++draws_;
        return eng_();
    }

    /// Uniform in [0, n). n must be positive.
    uint64_t uniform(uint64_t n) {
        std::uniform_int_distribution<uint64_t> d(0, n - 1);
        ++draws_;
        return d(eng_);
    }

    bool coin() { return next_u64() & 1u; }

    double unit() {
        ++draws_;
        return std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
    }

    /// Deterministic child stream; used to make trials independent of
    /// scheduling order.
    RandomSource child(uint64_t tag) const { return RandomSource(splitmix64(seed_ ^ splitmix64(tag))); }

  private:
    uint64_t seed_;
    std::mt19937_64 eng_;
    uint64_t draws_ = 0;
};

}  // namespace ecds
