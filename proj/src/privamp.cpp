#include "cvqkd/privamp.hpp"

#include <cmath>
#include <stdexcept>

#include "cvqkd/bitops.hpp"
#include "cvqkd/rng.hpp"

namespace cvqkd {

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bits) {
    BitVector v = zeros(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i] & 1) v.words[i / 64] |= 1ULL << (i % 64);
    return v;
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
    std::vector<std::uint8_t> out(nbits);
    for (std::size_t i = 0; i < nbits; ++i) out[i] = get(i) ? 1 : 0;
    return out;
}

BitVector ToeplitzSeed::defining_bits() const {
    const std::uint64_t count = n_in + l_out - 1;
    ChaCha20 prng(prng_seed);
    BitVector v;
    v.words = prng.bits(count);
    v.nbits = count;
    return v;
}

std::uint64_t compute_final_length(std::uint64_t n_corrected, std::uint64_t leak_ec,
                                   double chi_be_worst, double delta, std::uint64_t n_symbols) {
    if (chi_be_worst < 0) chi_be_worst = 0;
    if (delta < 0) throw std::domain_error("compute_final_length: negative delta");
    const double value = static_cast<double>(n_corrected) - static_cast<double>(leak_ec) -
                         static_cast<double>(n_symbols) * (chi_be_worst + delta);
    if (value <= 0) return 0;
    return static_cast<std::uint64_t>(std::floor(value));
}

BitVector toeplitz_hash_naive(const BitVector& input, const ToeplitzSeed& seed) {
    if (input.nbits != seed.n_in) throw std::domain_error("toeplitz_hash: input length mismatch");
    const BitVector d = seed.defining_bits();
    BitVector out = BitVector::zeros(seed.l_out);
    for (std::uint64_t j = 0; j < seed.l_out; ++j) {
        int acc = 0;
        for (std::uint64_t i = 0; i < seed.n_in; ++i)
            acc ^= (input.get(i) & d.get(j - i + seed.n_in - 1));
        out.set(j, acc != 0);
    }
    return out;
}

BitVector toeplitz_hash(const BitVector& input, const ToeplitzSeed& seed) {
    if (input.nbits != seed.n_in) throw std::domain_error("toeplitz_hash: input length mismatch");
    const std::uint64_t n = seed.n_in, l = seed.l_out;
    BitVector out = BitVector::zeros(l);
    if (l == 0) return out;

    // out_j is the coefficient of x^(n-1+j) in D(x)*I(x) over GF(2); only
    // the word window covering [n-1, n-1+l) is accumulated.
    const BitVector d = seed.defining_bits();
    const std::uint64_t nw = input.words.size();
    const std::uint64_t dw = d.words.size();
    const std::uint64_t w0 = (n - 1) / 64;
    const std::uint64_t w1 = (n - 1 + l - 1) / 64;

    std::vector<std::uint64_t> window(w1 - w0 + 1, 0);
    for (std::uint64_t iw = 0; iw < nw; ++iw) {
        const std::uint64_t word = input.words[iw];
        if (word == 0) continue;
        const std::uint64_t dlo = (w0 > iw + 1) ? (w0 - 1 - iw) : 0;
        if (dlo >= dw) continue;
        const std::uint64_t dhi = std::min(dw - 1, (w1 >= iw) ? (w1 - iw) : 0);
        for (std::uint64_t dv = dlo; dv <= dhi; ++dv) {
            const auto [lo, hi] = clmul64(word, d.words[dv]);
            const std::uint64_t idx = iw + dv;
            if (idx >= w0 && idx <= w1) window[idx - w0] ^= lo;
            if (idx + 1 >= w0 && idx + 1 <= w1) window[idx + 1 - w0] ^= hi;
        }
    }

    // Extract l bits starting at global bit n-1.
    const std::uint64_t shift = (n - 1) % 64;
    for (std::uint64_t ow = 0; ow < out.words.size(); ++ow) {
        std::uint64_t v = window[ow] >> shift;
        if (shift != 0 && ow + 1 < window.size()) v |= window[ow + 1] << (64 - shift);
        out.words[ow] = v;
    }
    const std::uint64_t tail = l % 64;
    if (tail != 0) out.words.back() &= (~0ULL) >> (64 - tail);
    return out;
}

}  // namespace cvqkd
