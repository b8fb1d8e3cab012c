#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qes {

// Deterministic uniform deviates. std::uniform_real_distribution is not
// guaranteed to produce the same stream across standard library
// implementations, so draw the 53-bit mantissa by hand: results are
// byte-reproducible for a fixed seed everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

    // Fisher-Yates shuffle (stable across platforms, unlike std::shuffle).
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

}  // namespace qes
