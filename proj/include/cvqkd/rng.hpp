#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

// Deterministic random number generation. Every stochastic stage of the
// pipeline derives its stream from a (seed, stream-id) pair so that runs
// are reproducible and chunks can be generated out of order.

namespace cvqkd {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent 64-bit sub-seed from (seed, stream id).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0x2545f4914f6cdd1dULL * (stream + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

// xoshiro256** — general-purpose generator for simulation noise.
class Xoshiro256 {
  public:
    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
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

    // Uniform double in (0,1), 53-bit resolution, never exactly 0 or 1.
    double uniform() {
        const std::uint64_t bits = next() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound) without modulo bias (rejection).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    bool coin() { return (next() >> 63) != 0; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::array<std::uint64_t, 4> s_{};
};

// Inverse of the standard normal CDF (Wichura's PPND16). Relative error
// below 1e-15 on (0,1); used both for Gaussian sampling by inversion and
// for the tail quantiles of the estimation module.
double normal_quantile(double p);

// Standard normal sample by CDF inversion.
inline double sample_normal(Xoshiro256& rng) {
    return normal_quantile(rng.uniform());
}

// ChaCha20 keystream generator. Used where the protocol calls for a
// cryptographically strong seeded bit source (Toeplitz seed expansion);
// integer-only, so output is bit-identical across platforms.
class ChaCha20 {
  public:
    explicit ChaCha20(std::uint64_t seed, std::uint64_t nonce = 0);

    // Fills `out` with keystream bytes.
    void fill(std::uint8_t* out, std::size_t len);

    // Packed keystream bits, 64 per word, little-endian bit order.
    std::vector<std::uint64_t> bits(std::size_t nbits);

    static constexpr const char* name() { return "chacha20"; }

  private:
    void block(std::uint32_t out[16]);
    std::uint32_t state_[16];
    std::uint32_t counter_ = 0;
    std::uint8_t buf_[64];
    std::size_t buf_pos_ = 64;
};

}  // namespace cvqkd
