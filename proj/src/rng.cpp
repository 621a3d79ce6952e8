#include "cvqkd/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqkd {

// Wichura, "Algorithm AS 241: The Percentage Points of the Normal
// Distribution", Applied Statistics 37 (1988). PPND16 coefficients.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p outside (0,1)");
    const double q = p - 0.5;
    double r;
    if (std::fabs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                  3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -val : val;
}

namespace {
inline std::uint32_t rotl32(std::uint32_t x, int k) { return (x << k) | (x >> (32 - k)); }

inline void quarter_round(std::uint32_t& a, std::uint32_t& b, std::uint32_t& c, std::uint32_t& d) {
    a += b; d ^= a; d = rotl32(d, 16);
    c += d; b ^= c; b = rotl32(b, 12);
    a += b; d ^= a; d = rotl32(d, 8);
    c += d; b ^= c; b = rotl32(b, 7);
}
}  // namespace

ChaCha20::ChaCha20(std::uint64_t seed, std::uint64_t nonce) {
    // "expand 32-byte k" constants; 256-bit key expanded from the seed.
    state_[0] = 0x61707865; state_[1] = 0x3320646e;
    state_[2] = 0x79622d32; state_[3] = 0x6b206574;
    std::uint64_t sm = seed;
    for (int i = 0; i < 4; ++i) {
        const std::uint64_t w = splitmix64(sm);
        state_[4 + 2 * i] = static_cast<std::uint32_t>(w);
        state_[4 + 2 * i + 1] = static_cast<std::uint32_t>(w >> 32);
    }
    state_[12] = 0;
    state_[13] = 0;
    state_[14] = static_cast<std::uint32_t>(nonce);
    state_[15] = static_cast<std::uint32_t>(nonce >> 32);
}

void ChaCha20::block(std::uint32_t out[16]) {
    std::uint32_t x[16];
    state_[12] = counter_++;
    std::memcpy(x, state_, sizeof(x));
    for (int round = 0; round < 10; ++round) {
        quarter_round(x[0], x[4], x[8], x[12]);
        quarter_round(x[1], x[5], x[9], x[13]);
        quarter_round(x[2], x[6], x[10], x[14]);
        quarter_round(x[3], x[7], x[11], x[15]);
        quarter_round(x[0], x[5], x[10], x[15]);
        quarter_round(x[1], x[6], x[11], x[12]);
        quarter_round(x[2], x[7], x[8], x[13]);
        quarter_round(x[3], x[4], x[9], x[14]);
    }
    for (int i = 0; i < 16; ++i) out[i] = x[i] + state_[i];
}

void ChaCha20::fill(std::uint8_t* out, std::size_t len) {
    while (len > 0) {
        if (buf_pos_ == 64) {
            std::uint32_t words[16];
            block(words);
            std::memcpy(buf_, words, 64);
            buf_pos_ = 0;
        }
        const std::size_t take = std::min<std::size_t>(len, 64 - buf_pos_);
        std::memcpy(out, buf_ + buf_pos_, take);
        buf_pos_ += take;
        out += take;
        len -= take;
    }
}

std::vector<std::uint64_t> ChaCha20::bits(std::size_t nbits) {
    const std::size_t nwords = (nbits + 63) / 64;
    std::vector<std::uint64_t> out(nwords, 0);
    fill(reinterpret_cast<std::uint8_t*>(out.data()), nwords * 8);
    const std::size_t tail = nbits % 64;
    if (tail != 0) out.back() &= (~0ULL) >> (64 - tail);
    return out;
}

}  // namespace cvqkd
