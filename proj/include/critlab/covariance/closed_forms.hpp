#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/LU>

// Heisenberg-model covariance data in closed form.  Everything is templated on
// the real scalar so the same formulas can be evaluated in extended precision,
// where the small-t cancellations in det(Lambda) become harmless.

namespace critlab {

template <class Real>
using Cplx = std::complex<Real>;

template <class Real, int R, int C>
using CMatrix = Eigen::Matrix<Cplx<Real>, R, C, (C == 1 ? Eigen::ColMajor : Eigen::RowMajor)>;

template <class Real>
struct DerivativeEntries {
    Cplx<Real> a, b1, b2, c11, c12, c21, c22;
};

template <class Real>
struct CovarianceBlocks {
    CMatrix<Real, 2, 2> A;
    CMatrix<Real, 2, 4> B;
    CMatrix<Real, 4, 4> C;
    Real r{};

    // [[A, B], [B*, C]]
    CMatrix<Real, 6, 6> full() const {
        CMatrix<Real, 6, 6> d;
        d.template topLeftCorner<2, 2>() = A;
        d.template topRightCorner<2, 4>() = B;
        d.template bottomLeftCorner<4, 2>() = B.adjoint();
        d.template bottomRightCorner<4, 4>() = C;
        return d;
    }
};

template <class Real>
struct LambdaMatrix {
    CMatrix<Real, 4, 4> entries;
    Real t{};
};

// Coincident-point data used by the one-point density: A1 is 1x1 and B1 = 0,
// so Lambda1 = C1.
template <class Real>
struct OnePointBlocks {
    Real A1{};
    CMatrix<Real, 2, 2> Lambda1;
};

template <class Real>
Cplx<Real> kernel(const Cplx<Real>& z, const Cplx<Real>& w) {
    using std::exp;
    return exp(z * std::conj(w));
}

// Covariances of (s, D s) at z against (s, D s, D^2 s) at w for the connection
// D = d/dz - conj(z) of the model frame.
template <class Real>
DerivativeEntries<Real> derivative_entries(const Cplx<Real>& z, const Cplx<Real>& w) {
    const Cplx<Real> zb = std::conj(z), wb = std::conj(w);
    const Cplx<Real> e = kernel(z, w);
    const Cplx<Real> two(2), four(4);
    DerivativeEntries<Real> d;
    d.a = e * (Real(1) + z * wb - zb * z - w * wb + zb * w);
    d.b1 = e * (z - w) * (z * wb - zb * z + two + zb * w - w * wb);
    d.b2 = e * (wb - zb);
    d.c11 = e * (two - four * zb * z - four * w * wb + four * zb * w - two * wb * zb * z * z -
                 two * wb * wb * z * w - two * wb * zb * w * w - two * zb * zb * z * w + four * z * wb +
                 wb * wb * z * z + wb * wb * w * w + zb * zb * z * z + zb * zb * w * w +
                 four * wb * z * zb * w);
    d.c12 = e * (wb - zb) * (wb - zb);
    d.c21 = e * (z - w) * (z - w);
    d.c22 = e;
    return d;
}

// Blocks at the pair (0, r).  Points are ordered (0, r); within a point the
// derivative columns are ordered (first, second).
template <class Real>
CovarianceBlocks<Real> blocks_at(Real r) {
    if (!(r >= Real(0))) throw std::domain_error("blocks_at: separation must be >= 0");
    const Cplx<Real> pts[2] = {Cplx<Real>(0), Cplx<Real>(r)};
    CovarianceBlocks<Real> b;
    b.r = r;
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
            auto d = derivative_entries(pts[p], pts[q]);
            b.A(p, q) = d.a;
            b.B(p, 2 * q) = d.b1;
            b.B(p, 2 * q + 1) = d.b2;
            b.C(2 * p, 2 * q) = d.c11;
            b.C(2 * p, 2 * q + 1) = d.c12;
            b.C(2 * p + 1, 2 * q) = d.c21;
            b.C(2 * p + 1, 2 * q + 1) = d.c22;
        }
    return b;
}

template <class Real>
OnePointBlocks<Real> one_point_blocks() {
    auto d = derivative_entries(Cplx<Real>(0), Cplx<Real>(0));
    OnePointBlocks<Real> o;
    o.A1 = d.a.real();
    o.Lambda1 << d.c11, d.c12, d.c21, d.c22;
    return o;
}

// Lambda = C - B* A^{-1} B
template <class Real>
LambdaMatrix<Real> lambda_of(const CovarianceBlocks<Real>& b) {
    using std::abs;
    const Cplx<Real> det = b.A.determinant();
    if (b.r == Real(0) || abs(det) == Real(0))
        throw std::domain_error("coincident-point degeneracy: A is singular");
    LambdaMatrix<Real> l;
    l.t = b.r * b.r;
    l.entries = b.C - b.B.adjoint() * b.A.inverse() * b.B;
    l.entries = (l.entries + l.entries.adjoint()) / Real(2);
    return l;
}

namespace detail {
template <class Real>
void require_positive_t(Real t, const char* what) {
    if (!(t > Real(0))) throw std::domain_error(std::string(what) + ": t must be > 0");
}
}  // namespace detail

// Closed-form Lambda(t) = M(t) / (-e^t + 1 - 2t + t^2) with t = r^2.
template <class Real>
LambdaMatrix<Real> lambda_closed(Real t) {
    using std::exp;
    using std::expm1;
    detail::require_positive_t(t, "lambda_closed");
    const Real em1 = expm1(t), et = exp(t), t2 = t * t, t3 = t2 * t;
    const Real den = -em1 - Real(2) * t + t2;
    const Real m11 = Real(-2) * em1 - Real(2) * t2 + t3;
    const Real m12 = t * (t - Real(2));
    const Real m13 = Real(4) * t * em1 + Real(3) * t2 - t3 - t2 * et - Real(2) * em1;
    const Real m14 = t * (t - Real(2) - em1);
    const Real m22 = -em1 - t + t2;
    const Real m24 = -em1 - t;
    Eigen::Matrix<Real, 4, 4> m;
    m << m11, m12, m13, m14,
         m12, m22, m14, m24,
         m13, m14, et * m11, et * m12,
         m14, m24, et * m12, et * m22;
    LambdaMatrix<Real> l;
    l.t = t;
    l.entries = (m / den).template cast<Cplx<Real>>();
    return l;
}

// det Lambda(t) from its displayed quotient.  In double precision this loses
// roughly 9*log10(1/t) digits to cancellation; use an extended Real for small t.
template <class Real>
Real det_lambda(Real t) {
    using std::exp;
    using std::expm1;
    detail::require_positive_t(t, "det_lambda");
    const Real e = exp(t), e2 = e * e, e3 = e2 * e;
    const Real t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    const Real num = e2 * t4 - e * t4 - Real(4) * t3 * e - Real(4) * t3 * e2 + Real(12) * t2 * e2 -
                     Real(12) * e * t2 - Real(12) * e + Real(12) * e2 - Real(4) * e3 + Real(4);
    const Real den = -expm1(t) - Real(2) * t + t2;
    return num / den;
}

template <class Real>
Real det_A(Real t) {
    using std::expm1;
    detail::require_positive_t(t, "det_A");
    return expm1(t) + Real(2) * t - t * t;
}

}  // namespace critlab
