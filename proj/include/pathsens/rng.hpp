#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pathsens {

// Reproducible random stream: identical (seed, stream) pairs give identical
// draw sequences on every platform.  The engine output is fully specified by
// the standard; all variate transforms below are hand-rolled (inverse
// transform, Box-Muller) so no implementation-defined distribution code is
// involved.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream),
          engine_(mix(seed ^ 0x9e3779b97f4a7c15ull, mix(stream, 0x2545f4914f6cdd1dull))) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next_u64() { return engine_(); }

    // uniform on (0, 1]
    double uniform() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    // uniform integer in [0, n)
    std::uint64_t uniform_below(std::uint64_t n) {
        // multiply-shift; bias is negligible for the small n used here
        const std::uint64_t x = engine_();
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(x) * n) >> 64);
    }

    // Exp(rate) by inverse transform
    double exponential(double rate) { return -std::log(uniform()) / rate; }

    // standard normal, Box-Muller with cached spare
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

private:
    static std::uint64_t mix(std::uint64_t z, std::uint64_t salt) {
        z += salt;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pathsens
