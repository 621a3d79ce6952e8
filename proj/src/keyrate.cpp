#include "cvqkd/keyrate.hpp"

#include <algorithm>
#include <cmath>

namespace cvqkd {

FiniteSizeParams FiniteSizeParams::half_split(std::uint64_t n_total, double eps) {
    FiniteSizeParams fs;
    fs.n_total = n_total;
    fs.n_key = n_total / 2;
    fs.m_pe = n_total - fs.n_key;
    fs.eps_pe = fs.eps_pa = fs.eps_bar = fs.eps_total = eps;
    return fs;
}

void FiniteSizeParams::validate() const {
    if (n_key + m_pe != n_total) throw std::domain_error("FiniteSizeParams: n_key + m_pe != n_total");
    for (double e : {eps_pe, eps_pa, eps_bar, eps_total})
        if (!(e > 0 && e < 1)) throw std::domain_error("FiniteSizeParams: eps outside (0,1)");
}

std::vector<std::pair<double, double>> DeviceModel::corners() const {
    return device_corners(eta, v_el, unc);
}

double mutual_information(double snr_value) {
    if (snr_value < 0) throw std::domain_error("mutual_information: negative snr");
    return 0.5 * std::log2(1.0 + snr_value);
}

namespace {

// Two-mode covariance of the entanglement-based equivalent state after the
// channel: blocks V*I, sqrt(T(V^2-1))*sigma_z, (T*V + 1 - T + T*xi)*I.
Eigen::MatrixXd channel_output_cm(double v_a, double t, double xi) {
    const double v = v_a + 1.0;
    const double a = v;
    const double b = t * v + 1.0 - t + t * xi;
    const double c = std::sqrt(t * (v * v - 1.0));
    Eigen::MatrixXd g(4, 4);
    g << a, 0, c, 0,
         0, a, 0, -c,
         c, 0, b, 0,
         0, -c, 0, b;
    return g;
}

// EPR pair of variance v, modes (q1,p1,q2,p2).
Eigen::MatrixXd epr_cm(double v) {
    const double c = std::sqrt(std::max(v * v - 1.0, 0.0));
    Eigen::MatrixXd g(4, 4);
    g << v, 0, c, 0,
         0, v, 0, -c,
         c, 0, v, 0,
         0, -c, 0, v;
    return g;
}

}  // namespace

double holevo_bound(const ProtocolParams& p) {
    p.validate();
    if (!(p.t > 0)) throw std::domain_error("holevo_bound: t must be > 0");

    // Entropy of the state Eve purifies: the two-mode state after the
    // channel, before the (trusted) detector.
    const CovarianceMatrix gamma_ab(channel_output_cm(p.v_a, p.t, p.xi));
    double s_e = 0.0;
    for (double nu : symplectic_eigenvalues(gamma_ab)) s_e += g_function(nu);

    // Conditional entropy after Bob's homodyne outcome. Perfect detector:
    // condition the two-mode state directly.
    if (p.v_el == 0.0 && p.eta >= 1.0) {
        const CovarianceMatrix cond = homodyne_condition(gamma_ab, 1, Quadrature::q);
        double s_cond = 0.0;
        for (double nu : symplectic_eigenvalues(cond)) s_cond += g_function(nu);
        return s_e - s_cond;
    }

    // Trusted-detector dilation: beamsplitter of transmissivity eta on
    // (B, F0) with (F0, F) an EPR pair of variance 1 + v_el/(1-eta). The
    // eta -> 1 limit with v_el > 0 is degenerate; approach it from below.
    const double eta = std::min(p.eta, 1.0 - 1e-9);
    const double v_d = 1.0 + p.v_el / (1.0 - eta);

    Eigen::MatrixXd g8 = Eigen::MatrixXd::Zero(8, 8);
    g8.topLeftCorner(4, 4) = channel_output_cm(p.v_a, p.t, p.xi);
    g8.bottomRightCorner(4, 4) = epr_cm(v_d);

    // Modes: A(0), B(1), F0(2), F(3); mix B and F0.
    Eigen::MatrixXd s_bs = Eigen::MatrixXd::Identity(8, 8);
    const double st = std::sqrt(eta), sr = std::sqrt(1.0 - eta);
    for (int k = 0; k < 2; ++k) {
        s_bs(2 + k, 2 + k) = st;
        s_bs(2 + k, 4 + k) = sr;
        s_bs(4 + k, 2 + k) = -sr;
        s_bs(4 + k, 4 + k) = st;
    }
    const CovarianceMatrix dilated(s_bs * g8 * s_bs.transpose());
    const CovarianceMatrix cond = homodyne_condition(dilated, 1, Quadrature::q);

    double s_cond = 0.0;
    for (double nu : symplectic_eigenvalues(cond)) s_cond += g_function(nu);
    return s_e - s_cond;
}

double rate_asymptotic(const ProtocolParams& params) {
    const double i_ab = mutual_information(snr(params));
    const double chi = params.t > 0 ? holevo_bound(params) : 0.0;
    return params.beta * i_ab - chi;
}

double delta_n(std::uint64_t n_key, double eps_bar, double eps_pa, double constant) {
    if (n_key < 10000) throw std::domain_error("delta_n: n_key below 1e4");
    const double n = static_cast<double>(n_key);
    return constant * std::sqrt(std::log2(2.0 / eps_bar) / n) + (2.0 / n) * std::log2(1.0 / eps_pa);
}

double rate_finite(const ChannelEstimate& est, double v_a, const FiniteSizeParams& fs,
                   const DeviceModel& device, double beta) {
    fs.validate();
    const WorstCaseBounds wc = worst_case_bounds(est, v_a, device.eta, device.v_el, fs.eps_pe);

    ProtocolParams point{v_a, est.t_hat, est.xi_physical(), device.eta, device.v_el, beta};
    const double i_ab = mutual_information(snr(point));

    double chi_worst = 0.0;
    const double xi_wc = std::max(wc.xi_max, 0.0);
    for (const auto& [eta_c, vel_c] : device.corners()) {
        ProtocolParams worst{v_a, wc.t_min, xi_wc, eta_c, vel_c, beta};
        chi_worst = std::max(chi_worst, holevo_bound(worst));
    }

    const double penalty = delta_n(fs.n_key, fs.eps_bar, fs.eps_pa, fs.delta_constant);
    const double per_symbol = beta * i_ab - chi_worst - penalty;
    return (static_cast<double>(fs.n_key) / static_cast<double>(fs.n_total)) * per_symbol;
}

double rate_finite_analytic(const ProtocolParams& params, const FiniteSizeParams& fs,
                            const DeviceUncertainty& unc) {
    params.validate();
    fs.validate();
    // The estimate a disclosed sample of size m_pe concentrates to.
    ChannelEstimate est;
    est.t_hat = params.t;
    est.xi_hat = params.xi;
    est.sigma2_hat = 1.0 + params.v_el + params.eta * params.t * params.xi;
    est.t_slope = std::sqrt(params.eta * params.t);
    est.m = fs.m_pe;
    est.n0_hat = 1.0;
    const DeviceModel device{params.eta, params.v_el, unc};
    return rate_finite(est, params.v_a, fs, device, params.beta);
}

namespace {

double rate_at_xi(const XiMaxQuery& q, double xi, double v_a) {
    ProtocolParams p{v_a, q.t, xi, q.eta, q.v_el, q.beta};
    if (q.mode == RateMode::asymptotic) return rate_asymptotic(p);
    const FiniteSizeParams fs = FiniteSizeParams::half_split(q.n_total, q.eps);
    try {
        return rate_finite_analytic(p, fs, DeviceUncertainty{});
    } catch (const estimation_failure&) {
        return -1.0;
    }
}

double best_rate_at_xi(const XiMaxQuery& q, double xi) {
    if (!q.optimize_va) return rate_at_xi(q, xi, q.v_a);
    // Coarse grid over [1,10] then a golden-section refinement.
    double best_va = 1.0, best = rate_at_xi(q, xi, 1.0);
    for (int i = 1; i <= 30; ++i) {
        const double va = 1.0 + 9.0 * i / 30.0;
        const double r = rate_at_xi(q, xi, va);
        if (r > best) { best = r; best_va = va; }
    }
    double lo = std::max(1.0, best_va - 0.45), hi = std::min(10.0, best_va + 0.45);
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
    double f1 = rate_at_xi(q, xi, x1), f2 = rate_at_xi(q, xi, x2);
    for (int it = 0; it < 40 && hi - lo > 1e-4; ++it) {
        if (f1 < f2) {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + kInvPhi * (hi - lo); f2 = rate_at_xi(q, xi, x2);
        } else {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - kInvPhi * (hi - lo); f1 = rate_at_xi(q, xi, x1);
        }
    }
    return std::max(best, std::max(f1, f2));
}

}  // namespace

double xi_max_positive(const XiMaxQuery& query) {
    if (best_rate_at_xi(query, 0.0) <= 0) return 0.0;
    double lo = 0.0, hi = 0.02;
    while (best_rate_at_xi(query, hi) > 0 && hi < 4.0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-5; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (best_rate_at_xi(query, mid) > 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

CodeSelection select_code_and_va(const std::vector<CodeDescriptor>& catalog, double t_hat,
                                 double xi_hat, double eta, double v_el, double beta,
                                 RateMode mode, const FiniteSizeParams* fs,
                                 const DeviceUncertainty* unc) {
    if (catalog.empty()) throw no_code_error("select_code_and_va: empty catalog");
    const double xi = std::max(xi_hat, 0.0);
    const double eta_t = eta * t_hat;
    std::optional<CodeSelection> best;
    for (const auto& code : catalog) {
        if (!(eta_t > 0)) break;
        const double v_a = code.snr_threshold * (1.0 + v_el + eta_t * xi) / eta_t;
        if (v_a < 1.0 || v_a > 10.0) continue;
        // beta <= 0 selects the code's implied efficiency at its threshold.
        const double b = beta > 0 ? beta : code.rate / mutual_information(code.snr_threshold);
        ProtocolParams p{v_a, t_hat, xi, eta, v_el, b};
        double rate;
        if (mode == RateMode::asymptotic) {
            rate = rate_asymptotic(p);
        } else {
            if (fs == nullptr) throw std::domain_error("select_code_and_va: finite mode needs fs");
            try {
                rate = rate_finite_analytic(p, *fs, unc ? *unc : DeviceUncertainty{});
            } catch (const estimation_failure&) {
                continue;
            }
        }
        if (!best || rate > best->rate) best = CodeSelection{code, v_a, rate};
    }
    if (!best) throw no_code_error("select_code_and_va: no code with v_a in [1,10]");
    return *best;
}

}  // namespace cvqkd
