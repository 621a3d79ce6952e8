#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "cvqkd/model.hpp"
#include "cvqkd/rng.hpp"

using namespace cvqkd;

TEST_CASE("loss conversions") {
    CHECK(km_to_db(25.0, 0.2) == doctest::Approx(5.0));
    CHECK(km_to_db(0.0, 0.2) == doctest::Approx(0.0));
    CHECK(km_to_db(80.5, 0.2) == doctest::Approx(16.1));
    CHECK_THROWS_AS(km_to_db(-1.0, 0.2), std::domain_error);

    CHECK(db_to_transmittance(0.0) == doctest::Approx(1.0));
    CHECK(db_to_transmittance(5.0) == doctest::Approx(0.31623).epsilon(1e-5));
    CHECK(db_to_transmittance(16.1) == doctest::Approx(0.024547).epsilon(1e-5));
    CHECK_THROWS_AS(db_to_transmittance(-0.1), std::domain_error);
}

TEST_CASE("losses compose multiplicatively and monotonically") {
    Xoshiro256 rng(7);
    double prev = 1.0;
    for (int i = 1; i <= 20; ++i) {
        const double t = db_to_transmittance(km_to_db(i * 5.0));
        CHECK(t < prev);
        prev = t;
    }
    for (int i = 0; i < 100; ++i) {
        const double a = 20.0 * rng.uniform(), b = 20.0 * rng.uniform();
        CHECK(db_to_transmittance(a + b) ==
              doctest::Approx(db_to_transmittance(a) * db_to_transmittance(b)).epsilon(1e-12));
    }
}

TEST_CASE("snr at the three operating points") {
    ProtocolParams p{3.590, 0.087096, 0.0, 0.552, 0.015, 0.95};
    CHECK(snr(p) == doctest::Approx(0.170).epsilon(0.006));
    p.v_a = 6.003;
    p.t = 0.024547;
    CHECK(snr(p) == doctest::Approx(0.080).epsilon(0.0125));
    p.t = 0.0;
    CHECK(snr(p) == 0.0);
}

TEST_CASE("parameter validation") {
    ProtocolParams p{3.59, 0.087, 0.005, 0.552, 0.015, 0.95};
    CHECK_NOTHROW(p.validate());
    auto bad = p;
    bad.v_a = 0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = p;
    bad.t = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = p;
    bad.eta = 0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    const DeviceUncertainty too_wide{0.6, 0.0};
    CHECK_THROWS_AS(too_wide.validate(0.552), std::domain_error);
    const DeviceUncertainty paper{0.025, 0.002};
    CHECK_NOTHROW(paper.validate(0.552));
}

TEST_CASE("g function") {
    CHECK(g_function(1.0) == 0.0);
    CHECK(g_function(3.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g_function(1.0 + 1e-12) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS(g_function(0.9), unphysical_state_error);

    // monotone increasing with decreasing slope (finite differences on a
    // grid); the analytic derivative is 0.5*log2((x+1)/(x-1)), positive
    // and strictly decreasing on (1, inf)
    double prev = g_function(1.0);
    double prev_slope = 1e300;
    for (int i = 1; i <= 200; ++i) {
        const double x = 1.0 + 0.1 * i;
        const double g = g_function(x);
        CHECK(g > prev);
        const double slope = (g - prev) / 0.1;
        CHECK(slope < prev_slope);
        const double analytic = 0.5 * std::log2((x + 1.0) / (x - 1.0));
        CHECK(0.5 * std::log2((x + 0.05 + 1.0) / (x + 0.05 - 1.0)) < analytic);
        prev = g;
        prev_slope = slope;
    }
}

namespace {

// Random k-mode symplectic matrix: interleaved orthogonal-symplectic
// factors around a squeeze, S = O1 * diag(e^r, e^-r, ...) * O2.
Eigen::MatrixXd random_symplectic(int k, Xoshiro256& rng) {
    auto random_orthosymplectic = [&](int modes) {
        // complex unitary via QR of a random complex Gaussian matrix
        Eigen::MatrixXcd g(modes, modes);
        for (int r = 0; r < modes; ++r)
            for (int c = 0; c < modes; ++c)
                g(r, c) = std::complex<double>(sample_normal(rng), sample_normal(rng));
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
        Eigen::MatrixXcd q = qr.householderQ();
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
        for (int r = 0; r < modes; ++r)
            for (int c = 0; c < modes; ++c) {
                s(2 * r, 2 * c) = q(r, c).real();
                s(2 * r, 2 * c + 1) = -q(r, c).imag();
                s(2 * r + 1, 2 * c) = q(r, c).imag();
                s(2 * r + 1, 2 * c + 1) = q(r, c).real();
            }
        return s;
    };
    Eigen::MatrixXd squeeze = Eigen::MatrixXd::Identity(2 * k, 2 * k);
    for (int m = 0; m < k; ++m) {
        const double r = 0.6 * (rng.uniform() - 0.5);
        squeeze(2 * m, 2 * m) = std::exp(r);
        squeeze(2 * m + 1, 2 * m + 1) = std::exp(-r);
    }
    return random_orthosymplectic(k) * squeeze * random_orthosymplectic(k);
}

}  // namespace

TEST_CASE("symplectic eigenvalues") {
    CHECK(symplectic_eigenvalues(CovarianceMatrix::vacuum(1)) ==
          std::vector<double>{1.0});

    Eigen::MatrixXd thermal = 5.0 * Eigen::MatrixXd::Identity(2, 2);
    CHECK(symplectic_eigenvalues(CovarianceMatrix(thermal))[0] == doctest::Approx(5.0));

    // two-mode squeezed state is pure: eigenvalues [1, 1]
    const double v = 4.0;
    const double c = std::sqrt(v * v - 1.0);
    Eigen::MatrixXd tmsv(4, 4);
    tmsv << v, 0, c, 0,
            0, v, 0, -c,
            c, 0, v, 0,
            0, -c, 0, v;
    for (double nu : symplectic_eigenvalues(CovarianceMatrix(tmsv)))
        CHECK(nu == doctest::Approx(1.0).epsilon(1e-9));

    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, -0.5, 1.0;
    CHECK_THROWS_AS(CovarianceMatrix{asym}, std::domain_error);

    Eigen::MatrixXd below(2, 2);
    below << 0.5, 0.0, 0.0, 0.5;
    CHECK_THROWS_AS(symplectic_eigenvalues(CovarianceMatrix(below)), unphysical_state_error);
}

TEST_CASE("symplectic invariance of eigenvalues") {
    Xoshiro256 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(3));
        // physical covariance: S diag(nu) S^T with nu >= 1
        Eigen::MatrixXd d = Eigen::MatrixXd::Identity(2 * k, 2 * k);
        for (int m = 0; m < k; ++m) {
            const double nu = 1.0 + 3.0 * rng.uniform();
            d(2 * m, 2 * m) = nu;
            d(2 * m + 1, 2 * m + 1) = nu;
        }
        const Eigen::MatrixXd s0 = random_symplectic(k, rng);
        Eigen::MatrixXd gamma = s0 * d * s0.transpose();
        const auto base = symplectic_eigenvalues(CovarianceMatrix(gamma));

        const Eigen::MatrixXd s = random_symplectic(k, rng);
        // sanity: S Omega S^T = Omega
        const Eigen::MatrixXd omega = symplectic_form(k);
        CHECK((s * omega * s.transpose() - omega).cwiseAbs().maxCoeff() < 1e-9);

        const auto moved = symplectic_eigenvalues(CovarianceMatrix(s * gamma * s.transpose()));
        REQUIRE(moved.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i)
            CHECK(moved[i] == doctest::Approx(base[i]).epsilon(1e-8));
    }
}

TEST_CASE("homodyne conditioning") {
    // product state: unmeasured block unchanged
    Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(4, 4);
    prod(0, 0) = 3.0;
    prod(1, 1) = 3.0;
    const auto cond = homodyne_condition(CovarianceMatrix(prod), 1, Quadrature::q);
    CHECK(cond.entries()(0, 0) == doctest::Approx(3.0));
    CHECK(cond.entries()(1, 1) == doctest::Approx(3.0));

    // two-mode squeezed, measure q of mode 2: conditional q-var 1/V, p-var V
    const double v = 4.0;
    const double c = std::sqrt(v * v - 1.0);
    Eigen::MatrixXd tmsv(4, 4);
    tmsv << v, 0, c, 0,
            0, v, 0, -c,
            c, 0, v, 0,
            0, -c, 0, v;
    const auto sq = homodyne_condition(CovarianceMatrix(tmsv), 1, Quadrature::q);
    CHECK(sq.entries()(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(sq.entries()(1, 1) == doctest::Approx(4.0).epsilon(1e-12));

    // V = 1: vacuum x vacuum -> identity
    Eigen::MatrixXd vac = Eigen::MatrixXd::Identity(4, 4);
    const auto vc = homodyne_condition(CovarianceMatrix(vac), 1, Quadrature::p);
    CHECK((vc.entries() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("homodyne conditioning preserves physicality") {
    Xoshiro256 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(3));
        Eigen::MatrixXd d = Eigen::MatrixXd::Identity(2 * k, 2 * k);
        for (int m = 0; m < k; ++m) {
            const double nu = 1.0 + 2.0 * rng.uniform();
            d(2 * m, 2 * m) = nu;
            d(2 * m + 1, 2 * m + 1) = nu;
        }
        const Eigen::MatrixXd s = random_symplectic(k, rng);
        const CovarianceMatrix gamma(s * d * s.transpose());
        const int mode = static_cast<int>(rng.below(k));
        const auto cond = homodyne_condition(gamma, mode, rng.coin() ? Quadrature::q : Quadrature::p);
        CHECK(cond.modes() == k - 1);
        CHECK(cond.is_physical(1e-9));
    }
}
