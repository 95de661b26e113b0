#include <doctest.h>

#include <cmath>
#include <random>

#include "critlab/covariance/closed_forms.hpp"
#include "critlab/kacrice/kacrice.hpp"
#include "critlab/spectra/spectra.hpp"

using namespace critlab;
using cd = std::complex<double>;

namespace {

Vector4c random_w(std::mt19937_64& g) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vector4c w;
    for (int k = 0; k < 4; ++k) w(k) = cd(n(g), n(g));
    return w;
}

}  // namespace

TEST_CASE("whitening factor reproduces the covariance") {
    for (double t : {0.01, 0.3, 1.0, 4.0}) {
        Eigen::Matrix<cd, 4, 4> lam = lambda_closed<double>(t).entries;
        auto L = whitening_factor<4>(lam);
        CHECK((L * L.adjoint() - lam).norm() <= 1e-12 * lam.norm());
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) CHECK(L(i, j) == cd(0));
    }
}

TEST_CASE("whitening clamps tiny pivots and rejects negative ones") {
    Eigen::Matrix<cd, 2, 2> s;
    s << 1, 1, 1, 1;
    auto L = whitening_factor<2>(s);
    CHECK(L(1, 1) == cd(0));
    CHECK((L * L.adjoint() - s).norm() < 1e-15);
    s << 1, 0, 0, -0.1;
    CHECK_THROWS_AS(whitening_factor<2>(s), KacRiceError);
}

TEST_CASE("identity covariance gives E|X-Y| squared = 1") {
    auto m = gaussian_mean(two_point_integrand, Matrix4c::Identity(), 400000, 3);
    CHECK(std::abs(m.mean - 1.0) <= 4 * m.std_error);
}

TEST_CASE("sampler calibration") {
    auto m = gaussian_moment([](const Vector4c& w) { return std::norm(w(2)); }, 200000, 5);
    CHECK(std::abs(m.mean - 1.0) <= 4 * m.std_error);
    auto b = gaussian_moment([](const Vector4c& w) { return integrand_terms(w).beta2; }, 200000, 6);
    CHECK(std::abs(b.mean) <= 4 * b.std_error);
}

TEST_CASE("quadrature rules") {
    auto lag = gauss_laguerre(20);
    // int x^k e^{-x} = k!
    for (int k = 0; k < 10; ++k) {
        double s = 0;
        for (std::size_t i = 0; i < lag.nodes.size(); ++i) s += lag.weights[i] * std::pow(lag.nodes[i], k);
        CHECK(s == doctest::Approx(std::tgamma(k + 1.0)).epsilon(1e-11));
    }
    auto leg = gauss_legendre(12);
    double s = 0;
    for (std::size_t i = 0; i < leg.nodes.size(); ++i) s += leg.weights[i] * std::pow(leg.nodes[i], 6);
    CHECK(s == doctest::Approx(2.0 / 7).epsilon(1e-13));
}

TEST_CASE("double exponential integral oracle") {
    CHECK(std::abs(abs_exponential_integral(2.0) - 5.0 / 3) < 1e-8);
    CHECK(std::abs(abs_exponential_integral(1.0) - 1.0) < 1e-8);
    // inner integral in closed form: 2x - 1 + 2 e^{-2x}
    auto lag = gauss_laguerre(40);
    double s = 0;
    for (std::size_t i = 0; i < lag.nodes.size(); ++i) {
        double x = lag.nodes[i];
        s += lag.weights[i] * (2 * x - 1 + 2 * std::exp(-2 * x));
    }
    CHECK(std::abs(s - 5.0 / 3) < 1e-10);
}

TEST_CASE("one-point density") {
    CHECK(one_point_density() == doctest::Approx(5 / (3 * M_PI)).epsilon(1e-14));
    Matrix2c id = Matrix2c::Identity();
    CHECK(one_point_density(id) == doctest::Approx(1 / M_PI).epsilon(1e-14));
    auto mc = one_point_density_mc(1000000, 11);
    CHECK(std::abs(mc.value - 5 / (3 * M_PI)) <= 3 * mc.std_error);
    auto mc1 = one_point_density_mc(300000, 12, 1, &id);
    CHECK(std::abs(mc1.value - 1 / M_PI) <= 4 * mc1.std_error);
}

TEST_CASE("abs difference expectation for a correlated covariance") {
    Matrix2c s;
    s << 1.5, cd(0.4, 0.3), cd(0.4, -0.3), 0.8;
    double exact = abs_difference_expectation(s);
    Matrix4c L = Matrix4c::Zero();
    Eigen::Matrix<cd, 2, 2> s2 = s;
    L.topLeftCorner<2, 2>() = whitening_factor<2>(s2);
    auto m = gaussian_mean([](const Vector4c& v) { return std::abs(std::norm(v(0)) - std::norm(v(1))); }, L, 400000, 13);
    CHECK(std::abs(m.mean - exact) <= 4 * m.std_error);
}

TEST_CASE("integrand terms at simple points") {
    Vector4c w(0, 0, 1, 1);
    auto t = integrand_terms(w);
    CHECK(t.beta2 == doctest::Approx(2));
    CHECK(t.alpha4 == doctest::Approx(-4));
    CHECK(t.gamma2 == doctest::Approx(7.0 / 6));
    auto z = integrand_terms(Vector4c::Zero());
    CHECK(z.beta2 == 0);
    CHECK(z.gamma2 == 0);
    CHECK(z.delta2 == 0);
    CHECK(z.delta3 == 0);
    CHECK(z.alpha4 == 0);
    CHECK(z.beta4 == 0);
}

TEST_CASE("expansion identities at random points") {
    std::mt19937_64 g(2024);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        Vector4c w = random_w(g);
        auto d = integrand_terms(w);
        auto e = expansion_terms(w);
        const double sc = 1 + w.squaredNorm() * w.squaredNorm();
        auto rel = [&](double a, double b) { return std::abs(a - b) / sc; };
        worst = std::max({worst, std::abs(e.alpha2) / sc, std::abs(e.alpha3) / sc, rel(e.beta3, -e.beta2),
                          rel(e.gamma3, e.gamma2), rel(e.alpha4, -e.beta2 * e.beta2), std::abs(e.odd3) / sc,
                          rel(e.beta2, d.beta2), rel(e.gamma2, d.gamma2), rel(e.delta2, d.delta2),
                          rel(e.delta3, d.delta3), rel(e.alpha4, d.alpha4), rel(e.beta4, d.beta4),
                          rel(d.beta4, beta4_expanded(w)), rel(d.beta4, beta4_compact(w)), e.imag_max / sc});
        CHECK(d.alpha4 <= 0);
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("hatted coefficients agree with the eigen-decomposition") {
    auto Y = y_series(y_precision_for(kDefaultOrder));
    auto es = eigensystem(Y);
    for (double s : {0.02, 0.05}) {
        const double t = s * s;
        for (int j = 0; j < 4; ++j) {
            const double lam = es.lambda[j].evaluate(t);
            for (int k = 0; k < 4; ++k) {
                const double ref = es.U(j, k).evaluate(t) * std::pow(t, 2.5) / std::sqrt(lam);
                const double tab = hatted_coefficient(j, k, s);
                CHECK_MESSAGE(std::abs(ref - tab) <= 10 * std::pow(s, hatted_known_below(j, k)), "c", j + 1, k + 1,
                              " s=", s);
            }
        }
    }
}

TEST_CASE("Gaussian moment of alpha4") {
    auto m = gaussian_moment_alpha4(1000000, 17);
    CHECK(std::abs(m.mean + 2) <= 3 * m.std_error);
}

TEST_CASE("estimates are deterministic and independent of the worker count") {
    auto a = two_point_J(0.5, 200000, 99, 1);
    auto b = two_point_J(0.5, 200000, 99, 1);
    auto c = two_point_J(0.5, 200000, 99, 3);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    CHECK(a.value == c.value);
    CHECK(a.std_error == c.std_error);
    auto d = two_point_J(0.5, 200000, 100, 1);
    CHECK(a.value != d.value);
}

TEST_CASE("closed-form and block-built Lambda give the same estimate") {
    for (double t : {0.05, 0.5, 2.0}) {
        auto a = two_point_J(t, 100000, 7, 1, LambdaSource::closed_form);
        auto b = two_point_J(t, 100000, 8, 1, LambdaSource::blocks);
        CHECK(std::abs(a.value - b.value) <= 3 * std::hypot(a.std_error, b.std_error));
    }
}

TEST_CASE("kernel rescaling leaves J unchanged") {
    const double t = 0.2, c = 3.7;
    Matrix4c lam = lambda_closed<double>(t).entries;
    auto a = two_point_J(lam, det_A<double>(t), 50000, 4);
    Matrix4c scaled = lam * c;
    auto b = two_point_J(scaled, det_A<double>(t) * c * c, 50000, 4);
    CHECK(std::abs(a.value - b.value) <= 1e-10 * a.value);
}

TEST_CASE("J is finite and positive across the range") {
    for (double t : {0.01, 0.1, 1.0, 4.0, 16.0}) {
        auto e = two_point_J(t, 20000, 1);
        CHECK(std::isfinite(e.value));
        CHECK(e.value > 0);
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(two_point_J(0.0, 10, 1), KacRiceError);
    CHECK_THROWS_AS(two_point_J(-1.0, 10, 1), KacRiceError);
    CHECK_THROWS_AS(two_point_J(5e-4, 10, 1), KacRiceError);
    CHECK_THROWS_AS(two_point_J(0.5, 0, 1), KacRiceError);
    CHECK_THROWS_AS(j_curve({0.1, -0.1}, 10, 1), KacRiceError);
}

TEST_CASE("linear extrapolation recovers a synthetic intercept") {
    std::vector<CorrelationEstimate> pts;
    for (double t : {0.04, 0.02, 0.01}) {
        CorrelationEstimate e;
        e.t = t;
        e.value = 0.5 - 2 * t;
        e.std_error = 1e-3;
        pts.push_back(e);
    }
    auto x = extrapolate_to_zero(pts);
    CHECK(x.intercept == doctest::Approx(0.5));
    CHECK(x.slope == doctest::Approx(-2));
    CHECK(x.std_error > 1e-3);
}

TEST_CASE("j_curve uses one estimate per grid point") {
    auto c = j_curve({0.3, 0.2}, 5000, 2);
    REQUIRE(c.size() == 2);
    CHECK(c[0].t == 0.3);
    CHECK(c[1].seed == 2);
}
