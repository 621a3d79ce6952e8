#pragma once

#include <cstdint>
#include <utility>

// Carry-less (GF(2)) word arithmetic shared by the Toeplitz hasher and
// the verification hash. Portable nibble-table multiply; no ISA
// extensions required.

namespace cvqkd {

// 64x64 -> 128 carry-less product, (low, high).
inline std::pair<std::uint64_t, std::uint64_t> clmul64(std::uint64_t a, std::uint64_t b) {
    // Precompute a * v for all 4-bit v, then combine 16 nibbles of b.
    std::uint64_t tab_lo[16], tab_hi[16];
    tab_lo[0] = 0; tab_hi[0] = 0;
    tab_lo[1] = a; tab_hi[1] = 0;
    for (int v = 2; v < 16; v += 2) {
        tab_lo[v] = tab_lo[v >> 1] << 1;
        tab_hi[v] = (tab_hi[v >> 1] << 1) | (tab_lo[v >> 1] >> 63);
        tab_lo[v + 1] = tab_lo[v] ^ a;
        tab_hi[v + 1] = tab_hi[v];
    }
    std::uint64_t lo = 0, hi = 0;
    for (int shift = 60; shift >= 0; shift -= 4) {
        hi = (hi << 4) | (lo >> 60);
        lo <<= 4;
        const unsigned nib = (b >> shift) & 0xf;
        lo ^= tab_lo[nib];
        hi ^= tab_hi[nib];
    }
    return {lo, hi};
}

// Multiplication in GF(2^64) modulo x^64 + x^4 + x^3 + x + 1.
inline std::uint64_t gf64_mul(std::uint64_t a, std::uint64_t b) {
    auto [lo, hi] = clmul64(a, b);
    // Reduce: x^64 = x^4 + x^3 + x + 1 (0x1b).
    auto fold = [](std::uint64_t h) {
        return h ^ (h << 4) ^ (h << 3) ^ (h << 1);
    };
    const std::uint64_t h2 = (hi >> 60) ^ (hi >> 61) ^ (hi >> 63);  // overflow of the fold
    lo ^= fold(hi) ^ fold(h2);
    return lo;
}

}  // namespace cvqkd
