#pragma once

#include <Eigen/Core>

#include "critlab/exactseries/truncated_series.hpp"

namespace Eigen {

template <>
struct NumTraits<critlab::TruncatedSeries> : GenericNumTraits<critlab::TruncatedSeries> {
    typedef critlab::TruncatedSeries Real;
    typedef critlab::TruncatedSeries NonInteger;
    typedef critlab::TruncatedSeries Literal;
    typedef critlab::TruncatedSeries Nested;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 100,
        MulCost = 1000
    };
};

}  // namespace Eigen

namespace critlab {

template <int R, int C>
using SeriesMatrix = Eigen::Matrix<TruncatedSeries, R, C>;
using SeriesMatrix4 = SeriesMatrix<4, 4>;
using SeriesVector4 = SeriesMatrix<4, 1>;

// Laplace expansion along the first row; division free, so it works for any
// ring-valued scalar including truncated series.
template <class Derived>
typename Derived::Scalar cofactor_det(const Eigen::MatrixBase<Derived>& m) {
    using S = typename Derived::Scalar;
    const Eigen::Index n = m.rows();
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    S det = S(0);
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> minor(n - 1, n - 1);
        for (Eigen::Index r = 1; r < n; ++r)
            for (Eigen::Index c = 0, cc = 0; c < n; ++c)
                if (c != j) minor(r - 1, cc++) = m(r, c);
        S term = m(0, j) * cofactor_det(minor);
        if (j % 2) det -= term;
        else det += term;
    }
    return det;
}

// adj(m) with m * adj(m) = det(m) * I.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>
adjugate(const Eigen::MatrixBase<Derived>& m) {
    using S = typename Derived::Scalar;
    const Eigen::Index n = m.rows();
    Eigen::Matrix<S, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime> adj(n, n);
    if (n == 1) {
        adj(0, 0) = S(1);
        return adj;
    }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> minor(n - 1, n - 1);
            for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (Eigen::Index c = 0, cc = 0; c < n; ++c)
                    if (c != j) minor(rr, cc++) = m(r, c);
                ++rr;
            }
            S cof = cofactor_det(minor);
            adj(j, i) = (i + j) % 2 ? S(-cof) : cof;
        }
    return adj;
}

template <int R, int C>
SeriesMatrix<R, C> truncated(const SeriesMatrix<R, C>& m, int precision) {
    return m.unaryExpr([precision](const TruncatedSeries& s) { return s.truncated(precision); });
}

template <int R, int C>
Eigen::Matrix<double, R, C> evaluate(const SeriesMatrix<R, C>& m, double t) {
    return m.unaryExpr([t](const TruncatedSeries& s) { return s.evaluate(t); });
}

// Smallest precision over all entries (nullopt when every entry is exact).
template <int R, int C>
std::optional<int> min_precision(const SeriesMatrix<R, C>& m) {
    std::optional<int> p;
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (auto q = m(i).precision()) p = p ? std::min(*p, *q) : *q;
    return p;
}

}  // namespace critlab
