#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace pathloss {

// Seeded RNG with distribution mappings implemented here instead of
// <random>'s distribution classes, whose output is implementation-defined.
// Identical seeds must give identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0,1), 53-bit mantissa
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform integer in [0,n); n must be > 0
    std::size_t below(std::size_t n) {
        // multiply-shift map; bias is < 2^-64 per draw which is irrelevant
        // next to the determinism requirement
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64());
        return static_cast<std::size_t>((m * n) >> 64);
    }

    // Box-Muller, no state between calls
    double normal(double mean, double sigma) {
        double u1 = 1.0 - uniform(); // (0,1], keeps log() finite
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Fisher-Yates
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

// FNV-1a 64-bit, used for content fingerprints and seed derivation.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Decorrelates RNG streams that share a user seed but serve different
// purposes (per-environment splits, per-trial noise, ...).
inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view label) {
    std::uint64_t z = seed ^ fnv1a64(label);
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace pathloss
