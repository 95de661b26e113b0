#pragma once

#include <json.hpp>

#include "critlab/exactseries/series_matrix.hpp"

namespace critlab {

// Exact wire format.  Numerators and denominators are decimal strings because
// they routinely exceed 64 bits.
//   {"valuation": v, "order": n | null, "coeffs": [[a_num,a_den,b_num,b_den,c_num,c_den,d_num,d_den], ...]}
// "order" counts known coefficients from the valuation; null marks an exact series.
// A series that is zero up to order has empty coeffs and "valuation" equal to its precision.
nlohmann::json to_json(const ExtendedRational& x);
ExtendedRational extended_rational_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TruncatedSeries& s);
TruncatedSeries series_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SeriesMatrix4& m);

}  // namespace critlab
