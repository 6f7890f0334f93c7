#pragma once

#include <cstdint>

#include "isoprym/types.hpp"

namespace isoprym {

/// xoshiro256** with splitmix64 seeding. Self-contained so that streams are
/// bit-identical across platforms and standard library versions (std::
/// distributions are implementation-defined, which would break report
/// reproducibility).
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0,1) with 53 significant bits.
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    cplx complex_box(double half_width) {
        double re = uniform(-half_width, half_width);
        double im = uniform(-half_width, half_width);
        return {re, im};
    }

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    int integer(int lo, int hi) { // inclusive range
        return lo + int(below(std::uint64_t(hi - lo + 1)));
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }
    std::uint64_t s_[4];
};

} // namespace isoprym
