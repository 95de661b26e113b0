#pragma once

#include "critlab/exactseries/series_matrix.hpp"

// Exact expansions in t = r^2 of the covariance data.  Every function takes an
// absolute precision p: the result is exact for all coefficients of t^k, k < p.
// The e^t Taylor data is lengthened internally until the requested precision is
// certified, so callers never see a result that claims more than it knows.

namespace critlab {

using YMatrixSeries = SeriesMatrix4;

TruncatedSeries detA_series(int precision = 5);
SeriesMatrix4 lambda_series(int precision = kDefaultOrder);
TruncatedSeries detLambda_series(int precision = 13);

// Y(t) = t^5 * Lambda(t)^{-1}, obtained by inverting lambda_series exactly.
YMatrixSeries y_series(int precision = kDefaultOrder);

// The displayed limit lim_{t->0+} Y(t).
Eigen::Matrix4i y_limit_matrix();

}  // namespace critlab
