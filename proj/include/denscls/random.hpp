#pragma once

#include "denscls/linalg.hpp"

#include <cstdint>
#include <random>

namespace denscls {

/// Seeded random source. Identical seed gives an identical stream; all
/// draws are deterministic transforms of the mt19937_64 output so results
/// do not depend on the standard library's distribution implementations.
/// Not shareable across threads: parallel work uses spawn() streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1]; safe as a log() argument.
    double uniform_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via the Box-Muller transform. Pairs are generated
    /// together and the second value cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    Index uniform_index(Index n) {
        assert(n > 0);
        const std::uint64_t un = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return static_cast<Index>(x % un);
    }

    /// Independent stream derived from the seed and a stream id. Used for
    /// fold- and class-parallel work; never shares state with the parent.
    Rng spawn(std::uint64_t stream) const {
        std::uint64_t z = seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return Rng(z ^ (z >> 31));
    }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (Index i = static_cast<Index>(v.size()) - 1; i > 0; --i) {
            std::swap(v[static_cast<std::size_t>(i)],
                      v[static_cast<std::size_t>(uniform_index(i + 1))]);
        }
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline Vector sample_standard_normal(Rng& rng, Index d) {
    assert(d >= 1);
    Vector v(d);
    for (Index i = 0; i < d; ++i) v[i] = rng.normal();
    return v;
}

/// n x d matrix of i.i.d. standard normal draws, filled row by row.
inline Matrix sample_standard_normal_matrix(Rng& rng, Index n, Index d) {
    Matrix m(n, d);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < d; ++j) m(i, j) = rng.normal();
    return m;
}

}  // namespace denscls
