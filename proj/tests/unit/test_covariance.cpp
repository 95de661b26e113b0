#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "critlab/covariance/closed_forms.hpp"
#include "critlab/covariance/series.hpp"
#include "critlab/verify/reference.hpp"

using namespace critlab;
using cd = std::complex<double>;
using mp = boost::multiprecision::cpp_bin_float_50;

namespace {

ExtendedRational q(long n, long d = 1) { return ExtendedRational::fraction(n, d); }

// d^i/dz^i d^j/dzeta^j exp(z*zeta) at (z0, zeta0) by the trapezoid rule on
// two circles of radius rho; spectrally accurate for this entire function.
cd cauchy_derivative(int i, int j, cd z0, cd zeta0) {
    const int n = 64;
    const double rho = 1.0;
    cd sum = 0;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            double a = 2 * M_PI * k / n, b = 2 * M_PI * l / n;
            cd u = std::polar(rho, a), v = std::polar(rho, b);
            sum += std::exp((z0 + u) * (zeta0 + v)) * std::polar(1.0, -i * a - j * b);
        }
    return sum * std::tgamma(i + 1.0) * std::tgamma(j + 1.0) / (n * n * std::pow(rho, i + j));
}

// E[D^p s(z) conj(D^q s(w))] with D = d/dz - conj(z), built from holomorphic
// derivatives of exp(z*zeta) at zeta = conj(w).
cd covariant_oracle(int p, int qd, cd z, cd w) {
    cd sum = 0;
    for (int i = 0; i <= p; ++i)
        for (int j = 0; j <= qd; ++j) {
            double binom = std::tgamma(p + 1.0) / (std::tgamma(i + 1.0) * std::tgamma(p - i + 1.0)) *
                           std::tgamma(qd + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(qd - j + 1.0));
            sum += binom * std::pow(-std::conj(z), p - i) * std::pow(-w, qd - j) *
                   cauchy_derivative(i, j, z, std::conj(w));
        }
    return sum;
}

double rel(cd a, cd b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("kernel") {
    CHECK(kernel<double>(0, 0) == cd(1));
    CHECK(std::abs(kernel<double>(1, 1) - cd(M_E)) < 1e-15);
    CHECK(std::abs(kernel<double>(2, cd(0, 1)) - std::exp(cd(0, -2))) < 1e-15);
}

TEST_CASE("derivative entries at the origin and on the axis") {
    auto d = derivative_entries<double>(0, 0);
    CHECK(d.a == cd(1));
    CHECK(d.b1 == cd(0));
    CHECK(d.b2 == cd(0));
    CHECK(d.c11 == cd(2));
    CHECK(d.c12 == cd(0));
    CHECK(d.c21 == cd(0));
    CHECK(d.c22 == cd(1));
    double r = 0.7;
    auto b = blocks_at(r);
    CHECK(std::abs(b.B(0, 0)) < 1e-15);
    CHECK(std::abs(b.B(0, 1)) < 1e-15);
    CHECK(std::abs(b.B(0, 2) - cd(-r * (2 - r * r))) < 1e-15);
    CHECK(std::abs(b.B(0, 3) - cd(r)) < 1e-15);
}

TEST_CASE("derivative entries match covariant derivatives of the kernel") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    for (int trial = 0; trial < 6; ++trial) {
        cd z(u(rng), u(rng)), w(u(rng), u(rng));
        auto d = derivative_entries(z, w);
        CHECK(rel(d.a, covariant_oracle(1, 1, z, w)) < 1e-6);
        CHECK(rel(d.b1, covariant_oracle(1, 2, z, w)) < 1e-6);
        CHECK(rel(d.b2, covariant_oracle(1, 0, z, w)) < 1e-6);
        CHECK(rel(d.c11, covariant_oracle(2, 2, z, w)) < 1e-6);
        CHECK(rel(d.c12, covariant_oracle(2, 0, z, w)) < 1e-6);
        CHECK(rel(d.c21, covariant_oracle(0, 2, z, w)) < 1e-6);
        CHECK(rel(d.c22, covariant_oracle(0, 0, z, w)) < 1e-6);
    }
}

TEST_CASE("blocks at r = 0 and r = 1") {
    auto b0 = blocks_at(0.0);
    Eigen::Matrix2d a0;
    a0 << 1, 1, 1, 1;
    CHECK((b0.A.real() - a0).norm() == 0);
    CHECK(b0.B.norm() == 0);
    Eigen::Matrix4d c0;
    c0 << 2, 0, 2, 0, 0, 1, 0, 1, 2, 0, 2, 0, 0, 1, 0, 1;
    CHECK((b0.C.real() - c0).norm() == 0);
    auto b1 = blocks_at(1.0);
    CHECK(std::abs(b1.A(1, 1) - cd(M_E)) < 1e-15);
    CHECK(std::abs(b1.A(0, 1) - cd(0)) < 1e-15);  // 1 - r^2
    CHECK_THROWS(blocks_at(-1.0));
}

TEST_CASE("full block matrix is Hermitian positive semidefinite") {
    for (double r = 0; r <= 3.0; r += 0.25) {
        auto full = blocks_at(r).full();
        CHECK((full - full.adjoint()).norm() < 1e-12 * full.norm());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix<cd, 6, 6>> es(full);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().maxCoeff());
    }
}

TEST_CASE("lambda_of rejects the coincident point") {
    CHECK_THROWS_WITH(lambda_of(blocks_at(0.0)), doctest::Contains("coincident-point degeneracy"));
}

TEST_CASE("lambda_of agrees with the closed form") {
    double t = 0.25;
    auto l = lambda_of(blocks_at(0.5));
    double expect = (-2 * std::exp(t) + 2 - 2 * t * t + t * t * t) / (-std::exp(t) + 1 - 2 * t + t * t);
    CHECK(std::abs(l.entries(0, 0) - cd(expect)) < 1e-12 * std::abs(expect));
    for (double r = 0.05; r <= 2.0 + 1e-9; r += 0.05) {
        auto a = lambda_of(blocks_at(r)).entries;
        auto b = lambda_closed(r * r).entries;
        CHECK((a - a.adjoint()).norm() == doctest::Approx(0));
        double scale = b.cwiseAbs().maxCoeff();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                CHECK(std::abs(a(i, j) - b(i, j)) <= 1e-10 * std::max(std::abs(b(i, j)), 1e-3 * scale));
    }
}

TEST_CASE("Lambda is positive definite on (0, 4]") {
    for (double t = 0.05; t <= 4.0 + 1e-9; t += 0.05) {
        Eigen::LLT<Eigen::Matrix<cd, 4, 4>> llt(lambda_closed(t).entries);
        CHECK(llt.info() == Eigen::Success);
    }
    // below 0.05 the smallest eigenvalue (about t^5/8640) needs extra digits
    for (mp t : {mp("0.001"), mp("0.004"), mp("0.01"), mp("0.03")}) {
        Eigen::Matrix<mp, 4, 4> m = lambda_closed(t).entries.real();
        Eigen::LLT<Eigen::Matrix<mp, 4, 4>> llt(m);
        CHECK(llt.info() == Eigen::Success);
    }
}

TEST_CASE("determinants") {
    CHECK(det_A(1.0) == doctest::Approx(M_E).epsilon(1e-15));
    CHECK_THROWS(det_A(0.0));
    CHECK_THROWS(det_lambda(-1.0));
    CHECK_THROWS(lambda_closed(0.0));
    for (double t : {1.0, 2.0, 4.0}) {
        double dl = det_lambda(t);
        CHECK(std::abs(dl - lambda_closed(t).entries.determinant().real()) <= 1e-10 * dl);
        double r = std::sqrt(t);
        double full = blocks_at(r).full().determinant().real();
        CHECK(std::abs(dl * det_A(t) - full) <= 1e-10 * std::abs(full));
    }
    for (const char* ts : {"0.1", "0.5"}) {
        mp t(ts);
        mp dl = det_lambda(t);
        Eigen::Matrix<mp, 4, 4> m = lambda_closed(t).entries.real();
        CHECK(static_cast<double>(abs(m.determinant() / dl - 1)) < 1e-20);
        mp r = sqrt(t);
        Eigen::Matrix<mp, 6, 6> full = blocks_at(r).full().real();
        CHECK(static_cast<double>(abs(dl * det_A(t) / full.determinant() - 1)) < 1e-20);
    }
    // small t in 50 digits: det Lambda ~ t^8/6480 with the displayed next terms
    for (const char* ts : {"0.001", "0.01"}) {
        mp t(ts);
        mp approx = pow(t, 8) / 6480 + pow(t, 9) / 3888 + 869 * pow(t, 10) / 4082400 +
                    37 * pow(t, 11) / 326592 + 1213 * pow(t, 12) / 29393280;
        mp dl = det_lambda(t);
        CHECK(static_cast<double>(abs(dl - approx) / dl) < 10 * static_cast<double>(pow(t, 5)));
        Eigen::Matrix<mp, 4, 4> m = lambda_closed(t).entries.real();
        CHECK(static_cast<double>(abs(m.determinant() / dl - 1)) < 1e-20);
    }
}

TEST_CASE("one-point blocks") {
    auto o = one_point_blocks<double>();
    CHECK(o.A1 == 1);
    CHECK(o.Lambda1(0, 0) == cd(2));
    CHECK(o.Lambda1(1, 1) == cd(1));
    CHECK(o.Lambda1(0, 1) == cd(0));
}

TEST_CASE("detA and detLambda series") {
    auto da = detA_series(5);
    CHECK(da == TruncatedSeries(1, {3, q(-1, 2), q(1, 6), q(1, 24)}, 5));
    auto dl = detLambda_series(13);
    CHECK(dl == TruncatedSeries(8, {q(1, 6480), q(1, 3888), q(869, 4082400), q(37, 326592), q(1213, 29393280)}, 13));
    // same determinant from the matrix series
    CHECK(cofactor_det(lambda_series(22)).truncated(13) == dl);
}

TEST_CASE("lambda_series equals C - B* A^-1 B assembled from block series") {
    using S = TruncatedSeries;
    const int prec = 14;
    const S t = S::t(), e = S::exp_t(prec + 4);
    // entries at (z, w) = (a r, b r), a, b in {0, 1}; B carries a factor r pulled out
    auto ex = [&](int a, int b) { return a * b ? e : S(1); };
    auto d2 = [&](int a, int b) { return S((a - b) * (a - b)) * t; };
    SeriesMatrix<2, 2> A;
    SeriesMatrix<2, 4> Bt;
    SeriesMatrix4 C;
    for (int p = 0; p < 2; ++p)
        for (int k = 0; k < 2; ++k) {
            S x = ex(p, k), dd = d2(p, k);
            A(p, k) = x * (1 - dd);
            Bt(p, 2 * k) = x * S(p - k) * (2 - dd);
            Bt(p, 2 * k + 1) = x * S(k - p);
            C(2 * p, 2 * k) = x * (2 - 4 * dd + dd * dd);
            C(2 * p, 2 * k + 1) = x * dd;
            C(2 * p + 1, 2 * k) = x * dd;
            C(2 * p + 1, 2 * k + 1) = x;
        }
    S det = cofactor_det(A);
    SeriesMatrix<2, 2> ainv = adjugate(A).unaryExpr([&](const S& s) { return s * inverse(det); });
    SeriesMatrix4 lam = C - SeriesMatrix4((Bt.transpose() * ainv * Bt).unaryExpr([&](const S& s) { return s * t; }));
    auto target = lambda_series(prec - 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            REQUIRE(*lam(i, j).precision() >= prec - 4);
            CHECK(lam(i, j).truncated(prec - 4) == target(i, j));
        }
    // and the numeric blocks agree with the same reduction
    auto b = blocks_at(0.8);
    CHECK(std::abs(b.C(0, 2) - cd(std::exp(0.0) * (2 - 4 * 0.64 + 0.64 * 0.64))) < 1e-14);
}

TEST_CASE("lambda_series evaluated near zero matches the closed form") {
    auto ls = truncated(lambda_series(13), 13);
    double t = 1e-2;
    Eigen::Matrix4d numeric = evaluate(ls, t);
    auto closed = lambda_closed(t).entries.real();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(numeric(i, j) - closed(i, j)) <= 1e-10 * std::max(1.0, std::abs(closed(i, j))));
}

TEST_CASE("Y series") {
    const int prec = 12;
    auto y = y_series(prec);
    auto lim = y_limit_matrix();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(*y(i, j).precision() == prec);
            CHECK(y(i, j) == y(j, i));
            CHECK(y(i, j).coeff(0) == ExtendedRational(lim(i, j)));
            for (int k = 0; k < 4; ++k)
                CHECK_MESSAGE(y(i, j).coeff(k) == ExtendedRational::parse(reference::kYDisplay[i][j][k]),
                              "y", i + 1, j + 1, " t^", k);
        }
    // independent route: the displayed closed form of Lambda^{-1}, times t^5
    using S = TruncatedSeries;
    const S t = S::t(), t2 = t * t, t3 = t2 * t, t4 = t3 * t, e = S::exp_t(prec + 12), e2 = e * e, e3 = e2 * e;
    S dfull = -t4 * e + t4 * e2 - 4 * t3 * e - 4 * t3 * e2 - 12 * t2 * e + 12 * t2 * e2 - 4 * e3 - 12 * e + 12 * e2 + 4;
    SeriesMatrix4 m3;
    S m11 = t3 * e2 - t2 * e2 - e * t2 + 4 * t * e2 - 4 * t * e - 2 * e3 + 4 * e2 - 2 * e;
    S m21 = -t3 * e - t3 * e2 + 2 * t2 * e2 - 2 * e * t2;
    S m31 = t3 * e + t2 * e2 + e * t2 + 4 * t * e - 4 * t * e2 + 2 * e2 - 4 * e + 2;
    S m41 = -2 * t3 * e + 2 * t * e2 - 4 * t * e + 2 * t;
    S m22 = e2 * t4 - e * t4 - 4 * t3 * e2 - 2 * e * t2 + 10 * t2 * e2 - 4 * t * e2 + 4 * t * e - 4 * e3 + 8 * e2 - 4 * e;
    S m42 = 4 * t3 * e + 2 * t2 - 10 * e * t2 + 4 * t * e - 4 * t + 4 * e2 - 8 * e + 4;
    S m33 = t3 * e - e * t2 - t2 + 4 * t * e - 4 * t - 2 * e2 + 4 * e - 2;
    S m43 = -t3 - t3 * e + 2 * e * t2 - 2 * t2;
    S m44 = e * t4 - t4 - 4 * t3 * e - 2 * t2 + 10 * e * t2 - 4 * t * e + 4 * t - 4 * e2 + 8 * e - 4;
    m3 << m11, m21, m31, m41,
          m21, m22, m41, m42,
          m31, m41, m33, m43,
          m41, m42, m43, m44;
    S scale = S::monomial(1, 5) * inverse(dfull);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            S alt = m3(i, j) * scale;
            REQUIRE(*alt.precision() >= prec);
            CHECK(alt.truncated(prec) == y(i, j));
        }
}
