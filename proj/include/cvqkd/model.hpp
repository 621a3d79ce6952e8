#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cvqkd/errors.hpp"

// Parameter conventions and Gaussian-state covariance mathematics.
//
// Unit convention used throughout: shot-noise units with the vacuum
// quadrature variance equal to 1 (a coherent state has total variance
// 1 + modulation). Excess noise xi is referred to the channel input;
// electronic noise v_el to the detector output. Covariance matrices are
// ordered (q1, p1, q2, p2, ...).

namespace cvqkd {

struct ProtocolParams {
    double v_a;    // Alice's modulation variance, SNU
    double t;      // channel transmittance in [0,1]
    double xi;     // excess noise at channel input, SNU
    double eta;    // detector efficiency in (0,1]
    double v_el;   // electronic noise variance, SNU
    double beta;   // reconciliation efficiency in (0,1]

    void validate() const;
};

struct DeviceUncertainty {
    double delta_eta = 0.0;
    double delta_v_el = 0.0;

    void validate(double eta) const;
};

enum class Quadrature : std::uint8_t { q = 0, p = 1 };

// Real symmetric 2k x 2k covariance matrix in SNU, ordering (q1,p1,...).
class CovarianceMatrix {
  public:
    explicit CovarianceMatrix(Eigen::MatrixXd entries);

    static CovarianceMatrix vacuum(int modes);

    int modes() const { return static_cast<int>(m_.rows()) / 2; }
    const Eigen::MatrixXd& entries() const { return m_; }
    double operator()(int r, int c) const { return m_(r, c); }

    // True when all symplectic eigenvalues are >= 1 - tol.
    bool is_physical(double tol = 1e-9) const;

  private:
    Eigen::MatrixXd m_;
};

// Fibre loss for a given length; default attenuation 0.2 dB/km.
double km_to_db(double distance_km, double alpha_db_per_km = 0.2);

// t = 10^(-loss/10).
double db_to_transmittance(double loss_db);

// Bob-side signal-to-noise ratio: eta*t*v_a / (1 + v_el + eta*t*xi).
double snr(const ProtocolParams& params);

// Bosonic entropy kernel for a symplectic eigenvalue x >= 1:
// G(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2), G(1) = 0.
double g_function(double x);

// Positive eigenvalue moduli of i*Omega*gamma, sorted descending, each
// clamped up to 1 when within 1e-9 below. Throws unphysical_state_error
// when an eigenvalue falls below 1 - 1e-6.
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& gamma);

// Conditional covariance after a homodyne measurement of one quadrature
// of `mode`: Schur complement with the Moore-Penrose pseudo-inverse of
// the projected measured block. Output has one fewer mode.
CovarianceMatrix homodyne_condition(const CovarianceMatrix& gamma, int mode, Quadrature quad);

// Standard symplectic form for k modes in (q1,p1,...) ordering.
Eigen::MatrixXd symplectic_form(int modes);

}  // namespace cvqkd
