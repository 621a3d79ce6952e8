#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "cvqkd/errors.hpp"

// Dimension-8 multidimensional reverse reconciliation. Bob maps his
// Gaussian vector y and a random bit vector u onto a unit-norm public
// octonion r = yhat * uhat; Alice rotates her matching data through
// r to obtain a noisy binary-modulated vector and per-bit LLRs for a
// virtual binary-input AWGN channel. The public message r carries no
// information about u.

namespace cvqkd {

// 8-component real vector under the Cayley-Dickson product over
// standard quaternions: (a1,a2)(b1,b2) = (a1 b1 - conj(b2) a2, b2 a1 + a2 conj(b1)).
struct Octonion {
    std::array<double, 8> c{};

    static Octonion unit() {
        Octonion e;
        e.c[0] = 1.0;
        return e;
    }

    double norm_sq() const {
        double s = 0.0;
        for (double x : c) s += x * x;
        return s;
    }
    double norm() const;

    Octonion conjugate() const {
        Octonion o = *this;
        for (int i = 1; i < 8; ++i) o.c[i] = -o.c[i];
        return o;
    }

    Octonion operator*(double s) const {
        Octonion o = *this;
        for (double& x : o.c) x *= s;
        return o;
    }
};

Octonion octonion_mul(const Octonion& a, const Octonion& b);

// conj(a)/|a|^2; throws singular_element_error below norm 1e-12.
Octonion octonion_inverse(const Octonion& a);

struct MdrBlock {
    std::array<double, 8> y;   // Bob's values
    std::uint8_t u;            // Bob's 8 random bits, bit i = u_i
    Octonion r;                // public message, unit norm
};

// r = (y/|y|) * uhat with uhat_i = (-1)^{u_i}/sqrt(8).
Octonion mdr_encode(std::span<const double, 8> y, std::uint8_t u_bits);

// LLRs (natural-log units) for the 8 bits of u given Alice's matching
// values x, the public rotation r and the channel model:
// x is rescaled to Bob's frame by t_slope = sqrt(eta T), v = xhat^{-1} r,
// llr_i = (2/sqrt(8)) v_i |x'|^2 / sigma2.
std::array<double, 8> mdr_llrs(std::span<const double, 8> x, const Octonion& r, double sigma2,
                               double t_slope);

}  // namespace cvqkd
