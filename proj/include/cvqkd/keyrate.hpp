#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cvqkd/estimation.hpp"
#include "cvqkd/model.hpp"

// Secret-key-rate accounting: Alice-Bob mutual information, the Holevo
// bound for collective attacks with a trusted detector, asymptotic and
// finite-size rates, the positive-rate excess-noise frontier, and the
// code/variance selection rule.

namespace cvqkd {

struct FiniteSizeParams {
    std::uint64_t n_total;  // pulses entering post-processing
    std::uint64_t n_key;    // symbols kept for key
    std::uint64_t m_pe;     // symbols disclosed for parameter estimation
    double eps_pe = 1e-10;
    double eps_pa = 1e-10;
    double eps_bar = 1e-10;
    double eps_total = 1e-10;
    // Leading constant of the delta(n) penalty; 7 corresponds to a binary
    // reconciled-key alphabet.
    double delta_constant = 7.0;

    static FiniteSizeParams half_split(std::uint64_t n_total, double eps = 1e-10);
    void validate() const;
};

struct CodeDescriptor {
    std::string code_id;
    std::string path;       // alist file, relative to the catalog manifest
    double rate;            // information rate after adaptation
    double snr_threshold;   // lowest SNR with FER <= 10% at design length
    std::uint64_t block_len;
};

struct DeviceModel {
    double eta;
    double v_el;
    DeviceUncertainty unc;

    // The four (eta, v_el) corners spanned by the calibration uncertainty.
    std::vector<std::pair<double, double>> corners() const;
};

// I_AB = 0.5*log2(1+snr), bits per symbol.
double mutual_information(double snr_value);

// Holevo bound chi_BE for collective attacks, bits per symbol. Detector
// inefficiency and electronic noise are trusted: they enter through a
// beamsplitter dilation whose ancilla port carries an EPR state of
// variance 1 + v_el/(1-eta), and are not attributed to the eavesdropper.
double holevo_bound(const ProtocolParams& params);

// K = beta*I_AB - chi_BE, bits per key symbol; negative values reported as-is.
double rate_asymptotic(const ProtocolParams& params);

// Finite-size penalty Delta(n)/n in bits per symbol.
double delta_n(std::uint64_t n_key, double eps_bar, double eps_pa, double constant = 7.0);

// Finite-size rate in bits per pulse:
// (n_key/n_total) * [beta*I_AB(point est.) - max_corner chi(t_min, xi_max) - Delta(n_key)].
// Throws estimation_failure when the worst-case bounds cannot be formed.
double rate_finite(const ChannelEstimate& est, double v_a, const FiniteSizeParams& fs,
                   const DeviceModel& device, double beta);

// Same, from true channel parameters: builds the estimate a simulation
// of m_pe disclosed symbols would concentrate to and applies the same
// worst-case machinery (the analytic route used by the rate sweeps).
double rate_finite_analytic(const ProtocolParams& params, const FiniteSizeParams& fs,
                            const DeviceUncertainty& unc);

enum class RateMode { asymptotic, finite };

struct XiMaxQuery {
    double t;
    double eta;
    double v_el;
    double beta;
    double v_a;                 // used when optimize_va is false
    RateMode mode = RateMode::asymptotic;
    std::uint64_t n_total = 0;  // finite mode block size
    double eps = 1e-10;
    bool optimize_va = false;   // maximize rate over v_a in [1,10]
};

// Largest excess noise with a positive secret key rate (0 when the rate
// is already negative at xi = 0). Bisection to 1e-5 SNU.
double xi_max_positive(const XiMaxQuery& query);

struct CodeSelection {
    CodeDescriptor code;
    double v_a;
    double rate;
};

// For each catalog code, solves snr(v_a) = snr_threshold at the current
// channel estimate, keeps solutions with v_a in [1,10], and returns the
// (code, v_a) pair maximizing the configured rate. beta <= 0 ranks each
// code with its own implied efficiency rate/C(threshold). Throws
// no_code_error when no code is feasible.
CodeSelection select_code_and_va(const std::vector<CodeDescriptor>& catalog, double t_hat,
                                 double xi_hat, double eta, double v_el, double beta,
                                 RateMode mode = RateMode::asymptotic,
                                 const FiniteSizeParams* fs = nullptr,
                                 const DeviceUncertainty* unc = nullptr);

}  // namespace cvqkd
