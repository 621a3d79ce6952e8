#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cvqkd/errors.hpp"
#include "cvqkd/model.hpp"

// Parameter estimation from disclosed data: point estimates of the
// channel, worst-case finite-size bounds, and the device-uncertainty
// corners consumed by the key-rate computation.

namespace cvqkd {

struct ChannelEstimate {
    double t_hat;       // transmittance estimate
    double xi_hat;      // excess noise estimate, SNU (may be negative)
    double sigma2_hat;  // total-noise estimate at Bob, SNU
    double t_slope;     // regression slope sqrt(eta*t_hat)
    std::uint64_t m;    // sample count used
    double n0_hat;      // shot-noise estimate, SNU

    // Excess noise clamped to the physical floor, for key-rate evaluation.
    double xi_physical() const { return xi_hat > 0.0 ? xi_hat : 0.0; }
};

struct WorstCaseBounds {
    double t_min;    // lower transmittance bound
    double xi_max;   // upper excess-noise bound, SNU
    double eps_pe;   // failure probability
};

// Shot-noise unit from calibration frames: sample variance of the vacuum
// measurements minus the calibrated electronic noise. Requires >= 1000
// frames; throws unphysical_state_error when the result is not positive.
double estimate_shot_noise(std::span<const double> vacuum_values, double v_el);

// Least squares through the origin on disclosed (x, y) pairs already
// normalized to SNU. t_slope = Sxy/Sxx, sigma2 = mean squared residual,
// t_hat = t_slope^2/eta, xi_hat = (sigma2 - 1 - v_el)/(eta*t_hat).
ChannelEstimate estimate_channel(std::span<const double> x, std::span<const double> y,
                                 double v_a, double eta, double v_el, double n0_hat = 1.0);

// z with 1 - Phi(z) = eps.
double z_quantile(double eps);

// Key-rate-pessimal corner (t_min, xi_max) at confidence eps_pe, built
// from Gaussian fluctuation intervals on the slope and residual variance
// with eps_pe/2 each. Throws estimation_failure when the slope interval
// crosses zero (block discarded).
WorstCaseBounds worst_case_bounds(const ChannelEstimate& est, double v_a, double eta,
                                  double v_el, double eps_pe);

// {eta +- delta_eta} x {v_el +- delta_v_el}.
std::vector<std::pair<double, double>> device_corners(double eta, double v_el,
                                                      const DeviceUncertainty& unc);

}  // namespace cvqkd
