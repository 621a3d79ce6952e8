#include "cvqkd/mdr.hpp"

#include <cmath>

namespace cvqkd {

namespace {

struct Quat {
    double w, x, y, z;

    Quat conj() const { return {w, -x, -y, -z}; }

    Quat operator*(const Quat& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }

    Quat operator-(const Quat& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
    Quat operator+(const Quat& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
};

Quat lo(const Octonion& o) { return {o.c[0], o.c[1], o.c[2], o.c[3]}; }
Quat hi(const Octonion& o) { return {o.c[4], o.c[5], o.c[6], o.c[7]}; }

Octonion join(const Quat& a, const Quat& b) {
    Octonion o;
    o.c = {a.w, a.x, a.y, a.z, b.w, b.x, b.y, b.z};
    return o;
}

}  // namespace

double Octonion::norm() const { return std::sqrt(norm_sq()); }

Octonion octonion_mul(const Octonion& a, const Octonion& b) {
    const Quat a1 = lo(a), a2 = hi(a), b1 = lo(b), b2 = hi(b);
    return join(a1 * b1 - b2.conj() * a2, b2 * a1 + a2 * b1.conj());
}

Octonion octonion_inverse(const Octonion& a) {
    const double n2 = a.norm_sq();
    if (!(n2 > 1e-24)) throw singular_element_error("octonion_inverse: near-zero norm");
    return a.conjugate() * (1.0 / n2);
}

Octonion mdr_encode(std::span<const double, 8> y, std::uint8_t u_bits) {
    Octonion yo;
    for (int i = 0; i < 8; ++i) yo.c[i] = y[i];
    const double n = yo.norm();
    if (!(n > 1e-9)) throw singular_element_error("mdr_encode: |y| too small");
    const double inv_sqrt8 = 1.0 / std::sqrt(8.0);
    Octonion uo;
    for (int i = 0; i < 8; ++i) uo.c[i] = ((u_bits >> i) & 1) ? -inv_sqrt8 : inv_sqrt8;
    return octonion_mul(yo * (1.0 / n), uo);
}

std::array<double, 8> mdr_llrs(std::span<const double, 8> x, const Octonion& r, double sigma2,
                               double t_slope) {
    Octonion xo;
    for (int i = 0; i < 8; ++i) xo.c[i] = t_slope * x[i];
    const double n = xo.norm();
    if (!(n > 1e-9)) throw singular_element_error("mdr_llrs: |x| too small");
    if (!(sigma2 > 0)) throw std::domain_error("mdr_llrs: sigma2 must be > 0");
    const Octonion v = octonion_mul(octonion_inverse(xo * (1.0 / n)), r);
    const double scale = (2.0 / std::sqrt(8.0)) * n * n / sigma2;
    std::array<double, 8> llrs;
    for (int i = 0; i < 8; ++i) llrs[i] = scale * v.c[i];
    return llrs;
}

}  // namespace cvqkd
