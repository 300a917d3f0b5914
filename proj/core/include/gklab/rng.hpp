#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace gklab {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so sample i of scenario S is identical no matter
// how work is scheduled or how many draws other streams made.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::string_view stream)
        : seed_(seed), stream_(hash_string(stream)) {}

    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream) {}

    std::uint64_t bits(std::uint64_t counter) const {
        std::uint64_t x = seed_;
        x = mix(x ^ rotl(stream_, 17));
        x = mix(x ^ counter);
        x = mix(x + (stream_ ^ 0x9e3779b97f4a7c15ull));
        return x;
    }

    // Uniform in [0, 1).
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    double uniform(std::uint64_t counter, double lo, double hi) const {
        return lo + (hi - lo) * uniform(counter);
    }

    // Standard normal via Box-Muller on two derived counters.
    double normal(std::uint64_t counter) const {
        const double u1 = static_cast<double>(bits(2 * counter) >> 11) * 0x1.0p-53;
        const double u2 = static_cast<double>(bits(2 * counter + 1) >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        return r * std::cos(6.283185307179586476925287 * u2);
    }

    static std::uint64_t hash_string(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return h;
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int r) {
        return (v << r) | (v >> (64 - r));
    }

    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
};

}  // namespace gklab
