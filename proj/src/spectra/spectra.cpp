#include "critlab/spectra/spectra.hpp"

#include <algorithm>
#include <climits>

namespace critlab {

namespace {

using S = TruncatedSeries;

S checked_sqrt(const S& x, const char* name) {
    try {
        return sqrt(x);
    } catch (const std::domain_error& e) {
        throw SpectraError(std::string("sqrt precondition failed for radicand ") + name + ": " + e.what());
    }
}

void require_positive_leading(const S& x, const char* name) {
    if (x.is_zero() || x.leading().sign() <= 0)
        throw SpectraError(std::string("expected a positive leading coefficient in ") + name + ", got " +
                           (x.is_zero() ? std::string("zero") : x.leading().to_string()));
}

template <int N>
S principal_minor_sum(const YMatrixSeries& Y) {
    S sum;
    for (int mask = 0; mask < 16; ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) != N) continue;
        Eigen::Matrix<S, N, N> m;
        int idx[N], k = 0;
        for (int i = 0; i < 4; ++i)
            if (mask & (1 << i)) idx[k++] = i;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) m(i, j) = Y(idx[i], idx[j]);
        sum += cofactor_det(m);
    }
    return sum;
}

}  // namespace

int vanishing_order(const S& s) {
    if (s.is_zero() && s.is_exact()) return INT_MAX;
    return s.valuation();
}

CharPolySeries char_poly(const YMatrixSeries& Y) {
    CharPolySeries cp;
    cp.F3 = -principal_minor_sum<1>(Y);
    cp.F2 = principal_minor_sum<2>(Y);
    cp.F1 = -principal_minor_sum<3>(Y);
    cp.F0 = cofactor_det(Y);
    return cp;
}

QuarticResult quartic_eigenvalues(const CharPolySeries& cp) {
    const S& B = cp.F3;
    const S& C = cp.F2;
    const S& D = cp.F1;
    const S& E = cp.F0;
    const ExtendedRational q1_3 = ExtendedRational::fraction(1, 3);
    QuarticResult res;
    QuarticIntermediates& m = res.im;
    const S B2 = B * B;
    m.alpha = S(ExtendedRational::fraction(-3, 8)) * B2 + C;
    m.beta = S(ExtendedRational::fraction(1, 8)) * B2 * B - S(ExtendedRational::fraction(1, 2)) * B * C + D;
    m.gamma = S(ExtendedRational::fraction(-3, 256)) * B2 * B2 + S(ExtendedRational::fraction(1, 16)) * C * B2 -
              S(ExtendedRational::fraction(1, 4)) * B * D + E;
    m.P = S(ExtendedRational::fraction(-1, 12)) * m.alpha * m.alpha - m.gamma;
    m.Q = S(ExtendedRational::fraction(-1, 108)) * m.alpha * m.alpha * m.alpha + S(q1_3) * m.alpha * m.gamma -
          S(ExtendedRational::fraction(1, 8)) * m.beta * m.beta;
    m.disc = S(ExtendedRational::fraction(-1, 4)) * m.Q * m.Q - S(ExtendedRational::fraction(1, 27)) * m.P * m.P * m.P;

    const S minus_half_q = S(ExtendedRational::fraction(-1, 2)) * m.Q;
    const S minus_p = -m.P;
    require_positive_leading(minus_half_q, "-Q/2");
    require_positive_leading(minus_p, "-P");

    // R = -Q/2 + i sqrt(disc) in the first quadrant; the cube root enters only
    // through theta_U = arctan(x)/3, so every series stays real.
    m.x = checked_sqrt(m.disc, "-Q^2/4 - P^3/27") * inverse(minus_half_q);
    const S theta_u = S(q1_3) * compose(outer::arctan(), m.x);
    const S cos_theta = compose(outer::cos(), theta_u);
    const S two_over_sqrt3 = S(ExtendedRational::fraction(2, 3) * ExtendedRational::sqrt3());
    m.y = S(ExtendedRational::fraction(-5, 6)) * m.alpha + two_over_sqrt3 * checked_sqrt(minus_p, "-P") * cos_theta;
    m.W = checked_sqrt(m.alpha + 2 * m.y, "alpha + 2y");
    m.two_beta_over_W = 2 * m.beta * inverse(m.W);
    m.radicand_plus = -3 * m.alpha - 2 * m.y - m.two_beta_over_W;
    m.radicand_minus = -3 * m.alpha - 2 * m.y + m.two_beta_over_W;
    const S root_plus = checked_sqrt(m.radicand_plus, "-3 alpha - 2y - 2 beta/W");
    const S root_minus = checked_sqrt(m.radicand_minus, "-3 alpha - 2y + 2 beta/W");
    const S quarter(ExtendedRational::fraction(1, 4));
    res.lambda = {quarter * (-B + 2 * m.W + 2 * root_plus), quarter * (-B + 2 * m.W - 2 * root_plus),
                  quarter * (-B - 2 * m.W + 2 * root_minus), quarter * (-B - 2 * m.W - 2 * root_minus)};
    std::stable_sort(res.lambda.begin(), res.lambda.end(), [](const S& a, const S& b) {
        if (a.valuation() != b.valuation()) return a.valuation() < b.valuation();
        return a.leading() > b.leading();
    });
    return res;
}

SeriesVector4 eigenvector(const YMatrixSeries& Y, const S& lambda) {
    SeriesMatrix4 A = Y;
    for (int i = 0; i < 4; ++i) A(i, i) -= lambda;
    const SeriesMatrix<3, 3> B3 = A.topLeftCorner<3, 3>();
    const SeriesMatrix<3, 1> c = A.topRightCorner<3, 1>();
    const S detb = cofactor_det(B3);
    if (detb.is_zero()) throw SpectraError("eigenvector: elimination block is singular to the known order");
    SeriesVector4 v;
    v.head<3>() = -(adjugate(B3) * c);
    v(3) = detb;

    S norm2;
    for (int i = 0; i < 4; ++i) norm2 += v(i) * v(i);
    S inv_norm;
    try {
        inv_norm = inverse(sqrt(norm2));
    } catch (const std::domain_error& e) {
        throw SpectraError(std::string("eigenvector normalization: ") + e.what());
    }
    for (int i = 0; i < 4; ++i) v(i) *= inv_norm;
    for (int i = 3; i >= 0; --i) {
        if (v(i).is_zero()) continue;
        if (v(i).leading().sign() < 0) v = -v;
        break;
    }
    return v;
}

EigenSystemSeries eigensystem(const YMatrixSeries& Y) {
    EigenSystemSeries es;
    es.lambda = quartic_eigenvalues(char_poly(Y)).lambda;
    for (int i = 0; i < 4; ++i) es.U.row(i) = eigenvector(Y, es.lambda[static_cast<std::size_t>(i)]).transpose();
    return es;
}

ConsistencyReport consistency_checks(const YMatrixSeries& Y, const CharPolySeries& cp, const EigenSystemSeries& es) {
    ConsistencyReport r;
    const auto& l = es.lambda;
    const S e1 = l[0] + l[1] + l[2] + l[3];
    const S e2 = l[0] * l[1] + l[0] * l[2] + l[0] * l[3] + l[1] * l[2] + l[1] * l[3] + l[2] * l[3];
    const S e3 = l[0] * l[1] * l[2] + l[0] * l[1] * l[3] + l[0] * l[2] * l[3] + l[1] * l[2] * l[3];
    const S e4 = l[0] * l[1] * l[2] * l[3];
    r.symmetric = {vanishing_order(e1 + cp.F3), vanishing_order(e2 - cp.F2), vanishing_order(e3 + cp.F1),
                   vanishing_order(e4 - cp.F0)};

    for (int i = 0; i < 4; ++i) {
        SeriesVector4 v = es.U.row(i).transpose();
        SeriesVector4 res = Y * v - v.unaryExpr([&](const S& s) { return s * l[static_cast<std::size_t>(i)]; });
        int o = INT_MAX;
        for (int k = 0; k < 4; ++k) o = std::min(o, vanishing_order(res(k)));
        r.eigen_residual[static_cast<std::size_t>(i)] = o;
    }

    SeriesMatrix4 ut = es.U.unaryExpr([](const S& s) { return s.polynomial_part(3); });
    SeriesMatrix4 id = SeriesMatrix4::Identity();
    r.uustar_defect = ut * ut.transpose() - id;
    r.uustar_defect_order = INT_MAX;
    for (int k = 0; k < 16; ++k) r.uustar_defect_order = std::min(r.uustar_defect_order, vanishing_order(r.uustar_defect(k)));

    const S det = cofactor_det(ut);
    const S inv_det = inverse(det);
    SeriesMatrix4 uinv = adjugate(ut).unaryExpr([&](const S& s) { return s * inv_det; });
    SeriesMatrix4 d = uinv - SeriesMatrix4(ut.transpose());
    r.uinv_defect_order = INT_MAX;
    for (int k = 0; k < 16; ++k) r.uinv_defect_order = std::min(r.uinv_defect_order, vanishing_order(d(k)));

    SeriesMatrix4 full = es.U * es.U.transpose() - id;
    r.orthogonality_order = INT_MAX;
    for (int k = 0; k < 16; ++k) r.orthogonality_order = std::min(r.orthogonality_order, vanishing_order(full(k)));
    return r;
}

}  // namespace critlab
