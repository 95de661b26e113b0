#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "critlab/covariance/series.hpp"

namespace critlab {

class SpectraError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// det(Y - xI) = x^4 + F3 x^3 + F2 x^2 + F1 x + F0
struct CharPolySeries {
    TruncatedSeries F3, F2, F1, F0;
};

// Quantities of the real-trigonometric quartic path, kept for inspection.
struct QuarticIntermediates {
    TruncatedSeries alpha, beta, gamma, P, Q;
    TruncatedSeries disc;            // -Q^2/4 - P^3/27
    TruncatedSeries x;               // sqrt(disc) / (-Q/2)
    TruncatedSeries y, W, two_beta_over_W;
    TruncatedSeries radicand_plus;   // -3 alpha - 2y - 2 beta/W  (lambda_1, lambda_2)
    TruncatedSeries radicand_minus;  // -3 alpha - 2y + 2 beta/W  (lambda_3, lambda_4)
};

struct QuarticResult {
    std::array<TruncatedSeries, 4> lambda;  // by valuation, then leading coefficient descending
    QuarticIntermediates im;
};

struct EigenSystemSeries {
    std::array<TruncatedSeries, 4> lambda;
    SeriesMatrix4 U;  // row i is the unit eigenvector for lambda[i]
};

struct ConsistencyReport {
    // vanishing orders of e1 + F3, e2 - F2, e3 + F1, e4 - F0
    std::array<int, 4> symmetric;
    // vanishing order of Y v_i - lambda_i v_i (minimum over components)
    std::array<int, 4> eigen_residual;
    // Ut Ut^T - I with Ut = U cut to its t^0..t^2 terms, as exact polynomials
    SeriesMatrix4 uustar_defect;
    int uustar_defect_order = 0;
    // Ut^{-1} - Ut^T, vanishing order
    int uinv_defect_order = 0;
    // U U^T - I for the full series U
    int orthogonality_order = 0;
};

// Lowest exponent that is not known to vanish; huge for an exact zero.
int vanishing_order(const TruncatedSeries& s);

CharPolySeries char_poly(const YMatrixSeries& Y);
QuarticResult quartic_eigenvalues(const CharPolySeries& cp);

// Unit eigenvector for lambda, from the kernel vector [-adj(B) c ; det B] of
// the elimination block of Y - lambda I.  Sign: the last nonzero component has
// a positive leading coefficient.
SeriesVector4 eigenvector(const YMatrixSeries& Y, const TruncatedSeries& lambda);

EigenSystemSeries eigensystem(const YMatrixSeries& Y);

ConsistencyReport consistency_checks(const YMatrixSeries& Y, const CharPolySeries& cp,
                                     const EigenSystemSeries& es);

// Y precision used to certify the leading eigenvalue through O(t^order).
inline int y_precision_for(int order) { return order + 7; }

}  // namespace critlab
