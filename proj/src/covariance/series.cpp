#include "critlab/covariance/series.hpp"

#include <stdexcept>

namespace critlab {

namespace {

using S = TruncatedSeries;

// Calls build(taylor_precision) with growing e^t precision until every entry
// of the result is known below t^precision, then truncates to exactly that.
template <class Build>
auto certified(int precision, int first_guess, Build build) {
    for (int p = first_guess; p < precision + 200; p += 4) {
        auto r = build(p);
        bool ok = true;
        if constexpr (std::is_same_v<decltype(r), S>) {
            ok = !r.precision() || *r.precision() >= precision;
            if (ok) return r.truncated(precision);
        } else {
            auto q = min_precision(r);
            ok = !q || *q >= precision;
            if (ok) return truncated(r, precision);
        }
    }
    throw std::logic_error("series precision did not converge");
}

S den_series(const S& e, const S& t) { return -e + 1 - 2 * t + t * t; }

SeriesMatrix4 lambda_from_exp(int taylor) {
    const S t = S::t(), t2 = t * t, t3 = t2 * t, e = S::exp_t(taylor);
    const S inv_den = inverse(den_series(e, t));
    const S m11 = -2 * e + 2 - 2 * t2 + t3;
    const S m12 = t * (t - 2);
    const S m13 = 4 * t * e - 4 * t + 3 * t2 - t3 - t2 * e - 2 * e + 2;
    const S m14 = t * (-e - 1 + t);
    const S m22 = -e + 1 - t + t2;
    const S m24 = -e + 1 - t;
    SeriesMatrix4 m;
    m << m11, m12, m13, m14,
         m12, m22, m14, m24,
         m13, m14, e * m11, e * m12,
         m14, m24, e * m12, e * m22;
    return m.unaryExpr([&](const S& x) { return x * inv_den; });
}

}  // namespace

TruncatedSeries detA_series(int precision) {
    return certified(precision, precision, [](int p) {
        const S t = S::t();
        return S::exp_t(p) - t * t + 2 * t - 1;
    });
}

SeriesMatrix4 lambda_series(int precision) {
    return certified(precision, precision + 1, lambda_from_exp);
}

TruncatedSeries detLambda_series(int precision) {
    return certified(precision, precision + 1, [](int p) {
        const S t = S::t(), t2 = t * t, t3 = t2 * t, t4 = t3 * t;
        const S e = S::exp_t(p), e2 = e * e, e3 = e2 * e;
        const S num = e2 * t4 - e * t4 - 4 * t3 * e - 4 * t3 * e2 + 12 * t2 * e2 - 12 * e * t2 -
                      12 * e + 12 * e2 - 4 * e3 + 4;
        return num * inverse(den_series(e, t));
    });
}

YMatrixSeries y_series(int precision) {
    return certified(precision, precision + 9, [](int p) {
        SeriesMatrix4 lam = lambda_from_exp(p);
        S scale = S::monomial(1, 5) * inverse(cofactor_det(lam));
        SeriesMatrix4 adj = adjugate(lam);
        return SeriesMatrix4(adj.unaryExpr([&](const S& x) { return x * scale; }));
    });
}

Eigen::Matrix4i y_limit_matrix() {
    Eigen::Matrix4i y;
    y << 0, 0, 0, 0,
         0, 4320, 0, -4320,
         0, 0, 0, 0,
         0, -4320, 0, 4320;
    return y;
}

}  // namespace critlab
