#include "cvqkd/model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace cvqkd {

void ProtocolParams::validate() const {
    if (!(v_a > 0)) throw std::domain_error("ProtocolParams: v_a must be > 0");
    if (!(t >= 0 && t <= 1)) throw std::domain_error("ProtocolParams: t outside [0,1]");
    if (!(xi >= 0)) throw std::domain_error("ProtocolParams: xi must be >= 0");
    if (!(eta > 0 && eta <= 1)) throw std::domain_error("ProtocolParams: eta outside (0,1]");
    if (!(v_el >= 0)) throw std::domain_error("ProtocolParams: v_el must be >= 0");
    if (!(beta > 0 && beta <= 1)) throw std::domain_error("ProtocolParams: beta outside (0,1]");
}

void DeviceUncertainty::validate(double eta) const {
    if (delta_eta < 0 || delta_v_el < 0) throw std::domain_error("DeviceUncertainty: negative uncertainty");
    if (!(eta - delta_eta > 0)) throw std::domain_error("DeviceUncertainty: eta - delta_eta must stay positive");
}

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols() || m_.rows() % 2 != 0 || m_.rows() == 0)
        throw std::domain_error("CovarianceMatrix: need even square dimension");
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::domain_error("CovarianceMatrix: not symmetric");
    m_ = 0.5 * (m_ + m_.transpose().eval());
}

CovarianceMatrix CovarianceMatrix::vacuum(int modes) {
    return CovarianceMatrix(Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

bool CovarianceMatrix::is_physical(double tol) const {
    try {
        for (double nu : symplectic_eigenvalues(*this))
            if (nu < 1.0 - tol) return false;
    } catch (const unphysical_state_error&) {
        return false;
    }
    return true;
}

double km_to_db(double distance_km, double alpha_db_per_km) {
    if (distance_km < 0) throw std::domain_error("km_to_db: negative distance");
    if (!(alpha_db_per_km > 0)) throw std::domain_error("km_to_db: alpha must be > 0");
    return alpha_db_per_km * distance_km;
}

double db_to_transmittance(double loss_db) {
    if (loss_db < 0) throw std::domain_error("db_to_transmittance: negative loss");
    return std::pow(10.0, -loss_db / 10.0);
}

double snr(const ProtocolParams& params) {
    params.validate();
    return params.eta * params.t * params.v_a /
           (1.0 + params.v_el + params.eta * params.t * params.xi);
}

double g_function(double x) {
    if (x < 1.0 - 1e-9) throw unphysical_state_error("g_function: argument below 1");
    if (x <= 1.0) return 0.0;
    const double a = 0.5 * (x + 1.0);
    const double b = 0.5 * (x - 1.0);
    // b*log2(b) -> 0 as b -> 0.
    const double bterm = (b > 0.0) ? b * std::log2(b) : 0.0;
    return a * std::log2(a) - bterm;
}

Eigen::MatrixXd symplectic_form(int modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (int k = 0; k < modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& gamma) {
    const int k = gamma.modes();
    const Eigen::MatrixXd m = symplectic_form(k) * gamma.entries();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    std::vector<double> nus;
    nus.reserve(k);
    for (int i = 0; i < 2 * k; ++i) {
        const double im = solver.eigenvalues()[i].imag();
        if (im > 0) nus.push_back(im);
    }
    // Eigenvalues of Omega*gamma come in +-i*nu pairs for symmetric gamma;
    // numerical degeneracies can merge them, so fall back to moduli.
    if (static_cast<int>(nus.size()) != k) {
        nus.clear();
        std::vector<double> mods;
        for (int i = 0; i < 2 * k; ++i) mods.push_back(std::abs(solver.eigenvalues()[i]));
        std::sort(mods.begin(), mods.end(), std::greater<>());
        for (int i = 0; i < 2 * k; i += 2) nus.push_back(0.5 * (mods[i] + mods[i + 1]));
    }
    std::sort(nus.begin(), nus.end(), std::greater<>());
    for (double& nu : nus) {
        if (nu < 1.0 - 1e-6)
            throw unphysical_state_error("symplectic_eigenvalues: eigenvalue below 1");
        if (nu < 1.0) nu = 1.0;
    }
    return nus;
}

CovarianceMatrix homodyne_condition(const CovarianceMatrix& gamma, int mode, Quadrature quad) {
    const int k = gamma.modes();
    if (mode < 0 || mode >= k) throw std::domain_error("homodyne_condition: mode out of range");
    if (k < 2) throw std::domain_error("homodyne_condition: need at least two modes");

    const int offset = 2 * mode;
    const int meas_idx = offset + (quad == Quadrature::q ? 0 : 1);
    const double var_meas = gamma(meas_idx, meas_idx);
    if (!(var_meas > 0)) throw std::domain_error("homodyne_condition: measured variance not positive");

    std::vector<int> keep;
    keep.reserve(2 * (k - 1));
    for (int i = 0; i < 2 * k; ++i)
        if (i != offset && i != offset + 1) keep.push_back(i);

    const int d = static_cast<int>(keep.size());
    Eigen::MatrixXd a(d, d);
    Eigen::VectorXd cross(d);
    for (int r = 0; r < d; ++r) {
        cross(r) = gamma(keep[r], meas_idx);
        for (int c = 0; c < d; ++c) a(r, c) = gamma(keep[r], keep[c]);
    }
    // Schur complement gamma_A - sigma (X gamma_B X)^+ sigma^T; projecting on
    // one quadrature reduces the pseudo-inverse to 1/var of the measured one.
    a -= (cross * cross.transpose()) / var_meas;
    return CovarianceMatrix(std::move(a));
}

}  // namespace cvqkd
