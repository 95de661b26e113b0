#include "critlab/exactseries/series_json.hpp"

#include <stdexcept>

namespace critlab {

nlohmann::json to_json(const ExtendedRational& x) {
    nlohmann::json j = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
        j.push_back(x.component(i).get_num().get_str());
        j.push_back(x.component(i).get_den().get_str());
    }
    return j;
}

ExtendedRational extended_rational_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 8) throw std::invalid_argument("coefficient must be an array of 8 strings");
    mpq_class q[4];
    for (int i = 0; i < 4; ++i) {
        auto part = [&](int k) {
            const auto& e = j[static_cast<std::size_t>(2 * i + k)];
            return e.is_string() ? mpz_class(e.get<std::string>()) : mpz_class(e.get<long>());
        };
        mpz_class den = part(1);
        if (den == 0) throw std::invalid_argument("zero denominator in coefficient");
        q[i] = mpq_class(part(0), den);
        q[i].canonicalize();
    }
    return {q[0], q[1], q[2], q[3]};
}

nlohmann::json to_json(const TruncatedSeries& s) {
    nlohmann::json j;
    j["valuation"] = s.is_zero() && s.is_exact() ? 0 : s.valuation();
    if (auto n = s.order()) j["order"] = *n;
    else j["order"] = nullptr;
    nlohmann::json c = nlohmann::json::array();
    for (const auto& x : s.coeffs()) c.push_back(to_json(x));
    j["coeffs"] = c;
    return j;
}

TruncatedSeries series_from_json(const nlohmann::json& j) {
    int v = j.at("valuation").get<int>();
    std::vector<ExtendedRational> c;
    for (const auto& e : j.at("coeffs")) c.push_back(extended_rational_from_json(e));
    std::optional<int> p;
    if (!j.at("order").is_null()) p = v + j.at("order").get<int>();
    return TruncatedSeries(v, std::move(c), p);
}

nlohmann::json to_json(const SeriesMatrix4& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < 4; ++k) row.push_back(to_json(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace critlab
