#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace staleracer {

// splitmix64; used to spread user-facing seeds over the mt19937_64 state space
// and to derive decorrelated child seeds for replications.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return mix_seed(base ^ mix_seed(index + 1));
}

// Deterministic random stream. All draws go through explicit inverse-CDF /
// Box-Muller transforms of the mt19937_64 output so that identical seeds give
// bitwise-identical sequences on every platform.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : engine_(mix_seed(seed)) {}

    // uniform on (0,1), both endpoints excluded
    double uniform() {
        const std::uint64_t bits = engine_() >> 11;  // 53 random bits
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    // standard normal via Box-Muller; second value of each pair is cached
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    std::uint64_t raw() { return engine_(); }

    // uniform integer in [0, n)
    std::uint64_t uniform_index(std::uint64_t n) {
        // multiply-shift; bias is negligible for n << 2^64 and keeps the
        // draw count at exactly one engine call
        const unsigned __int128 wide = static_cast<unsigned __int128>(engine_()) * n;
        return static_cast<std::uint64_t>(wide >> 64);
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace staleracer
