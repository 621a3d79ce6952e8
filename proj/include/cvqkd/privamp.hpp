#pragma once

#include <cstdint>
#include <span>
#include <vector>

// Toeplitz-matrix universal hashing: compresses verified corrected bits
// into the final secret key.

namespace cvqkd {

// Bit vectors are packed little-endian into 64-bit words: bit i lives at
// word i/64, position i%64.
struct BitVector {
    std::vector<std::uint64_t> words;
    std::size_t nbits = 0;

    static BitVector zeros(std::size_t n) {
        return BitVector{std::vector<std::uint64_t>((n + 63) / 64, 0), n};
    }
    bool get(std::size_t i) const { return (words[i / 64] >> (i % 64)) & 1; }
    void set(std::size_t i, bool v) {
        if (v)
            words[i / 64] |= 1ULL << (i % 64);
        else
            words[i / 64] &= ~(1ULL << (i % 64));
    }
    static BitVector from_bytes(std::span<const std::uint8_t> bits);  // one bit per byte
    std::vector<std::uint8_t> to_bytes() const;
};

struct ToeplitzSeed {
    std::uint64_t prng_seed;
    std::uint64_t n_in;
    std::uint64_t l_out;

    // The n_in + l_out - 1 defining bits, expanded from prng_seed with
    // the chacha20 keystream. Deterministic and platform independent.
    BitVector defining_bits() const;
};

// Final key length after privacy amplification:
// floor(n_corrected - leak_ec - n_symbols*(chi_be_worst + delta)), clamped at 0.
std::uint64_t compute_final_length(std::uint64_t n_corrected, std::uint64_t leak_ec,
                                   double chi_be_worst, double delta, std::uint64_t n_symbols);

// out_j = XOR_i in_i AND T(j,i) with T(j,i) = defining_bits[j - i + n_in - 1].
// Word-sliced carry-less convolution; bit-exact equal to the direct
// double loop.
BitVector toeplitz_hash(const BitVector& input, const ToeplitzSeed& seed);

// Reference O(n*l) implementation used as the correctness oracle.
BitVector toeplitz_hash_naive(const BitVector& input, const ToeplitzSeed& seed);

}  // namespace cvqkd
