#include "cvqkd/estimation.hpp"

#include <cmath>

#include "cvqkd/rng.hpp"

namespace cvqkd {

double estimate_shot_noise(std::span<const double> vacuum_values, double v_el) {
    const std::size_t m = vacuum_values.size();
    if (m < 1000) throw insufficient_data_error("estimate_shot_noise: need at least 1000 frames");
    double mean = 0.0;
    for (double v : vacuum_values) mean += v;
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (double v : vacuum_values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(m - 1);
    const double n0 = var - v_el;
    if (!(n0 > 0))
        throw unphysical_state_error("estimate_shot_noise: variance at or below calibrated v_el");
    return n0;
}

ChannelEstimate estimate_channel(std::span<const double> x, std::span<const double> y,
                                 double v_a, double eta, double v_el, double n0_hat) {
    if (x.size() != y.size()) throw std::domain_error("estimate_channel: size mismatch");
    const std::uint64_t m = x.size();
    if (m < 2) throw insufficient_data_error("estimate_channel: need at least 2 pairs");
    if (!(n0_hat > 0)) throw std::domain_error("estimate_channel: n0_hat must be > 0");
    (void)v_a;

    const double s = std::sqrt(n0_hat);
    double sxx = 0.0, sxy = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) {
        sxx += x[i] * x[i];
        sxy += x[i] * (y[i] / s);
    }
    if (sxx == 0.0) throw std::domain_error("estimate_channel: degenerate regressor");

    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) {
        const double r = y[i] / s - slope * x[i];
        rss += r * r;
    }
    const double sigma2 = rss / static_cast<double>(m);
    const double t_hat = slope * slope / eta;
    const double xi_hat =
        (t_hat > 0) ? (sigma2 - 1.0 - v_el) / (eta * t_hat)
                    : 0.0;
    return ChannelEstimate{t_hat, xi_hat, sigma2, slope, m, n0_hat};
}

double z_quantile(double eps) {
    if (!(eps > 0 && eps < 1)) throw std::domain_error("z_quantile: eps outside (0,1)");
    return normal_quantile(1.0 - eps);
}

WorstCaseBounds worst_case_bounds(const ChannelEstimate& est, double v_a, double eta,
                                  double v_el, double eps_pe) {
    if (!(eps_pe > 0 && eps_pe < 1)) throw std::domain_error("worst_case_bounds: eps_pe outside (0,1)");
    if (est.m < 2) throw std::domain_error("worst_case_bounds: estimate too small");
    const double z = z_quantile(eps_pe / 2.0);
    const double md = static_cast<double>(est.m);

    const double slope_min = est.t_slope - z * std::sqrt(est.sigma2_hat / (md * v_a));
    if (slope_min <= 0)
        throw estimation_failure("worst_case_bounds: slope bound crossed zero, block discarded");
    const double sigma2_max = est.sigma2_hat * (1.0 + z * std::sqrt(2.0 / md));

    const double t_min = slope_min * slope_min / eta;
    const double xi_max = (sigma2_max - 1.0 - v_el) / (eta * t_min);
    return WorstCaseBounds{t_min, xi_max, eps_pe};
}

std::vector<std::pair<double, double>> device_corners(double eta, double v_el,
                                                      const DeviceUncertainty& unc) {
    unc.validate(eta);
    std::vector<std::pair<double, double>> corners;
    corners.reserve(4);
    for (double e : {eta - unc.delta_eta, eta + unc.delta_eta})
        for (double v : {v_el - unc.delta_v_el, v_el + unc.delta_v_el})
            corners.emplace_back(std::min(e, 1.0), std::max(v, 0.0));
    return corners;
}

}  // namespace cvqkd
