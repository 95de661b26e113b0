#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "critlab/exactseries/extended_rational.hpp"

namespace critlab {

// Working order used when an exact input has to be expanded (inverse, sqrt, compose).
inline constexpr int kDefaultOrder = 25;

// Generator for the coefficients g_k of an outer series g(x) = sum g_k x^k.
using CoefficientGenerator = std::function<ExtendedRational(int k)>;

namespace outer {
CoefficientGenerator arctan();      // x - x^3/3 + x^5/5 - ...
CoefficientGenerator cos();         // 1 - x^2/2 + x^4/24 - ...
CoefficientGenerator sqrt1p();      // sqrt(1 + x)
CoefficientGenerator geometric();   // 1/(1 + x)
CoefficientGenerator exp();         // e^x
}  // namespace outer

// Laurent series in t with coefficients in Q(sqrt2, sqrt3).
//
// Known coefficients run from valuation() up to precision() - 1; everything from
// t^precision() on is unknown.  A series without a precision is exact (a Laurent
// polynomial).  A series with no nonzero known coefficient but a finite precision
// is zero up to order: it carries is_zero_to_order() instead of a made-up valuation.
class TruncatedSeries {
public:
    TruncatedSeries() = default;  // exact zero
    TruncatedSeries(long v) : TruncatedSeries(ExtendedRational(v)) {}
    TruncatedSeries(const ExtendedRational& c);

    // coeffs[i] is the coefficient of t^(valuation + i); precision is absolute.
    // Trailing zeros are dropped, so coeffs() may be shorter than order().
    TruncatedSeries(int valuation, std::vector<ExtendedRational> coeffs,
                    std::optional<int> precision = std::nullopt);

    static TruncatedSeries monomial(const ExtendedRational& c, int power);
    static TruncatedSeries t() { return monomial(1, 1); }
    static TruncatedSeries big_o(int power) { return TruncatedSeries(power, {}, power); }
    // Taylor polynomial of e^t with known coefficients below t^precision.
    static TruncatedSeries exp_t(int precision);

    bool is_exact() const { return !prec_; }
    bool is_zero() const { return c_.empty(); }  // exact zero or zero to order
    bool is_zero_to_order() const { return c_.empty() && prec_.has_value(); }

    // Lowest exponent with a nonzero known coefficient; for a zero-to-order
    // series this is the precision.  Exact zero has no valuation.
    int valuation() const;
    std::optional<int> precision() const { return prec_; }
    // Number of known coefficients counted from the valuation (nullopt when exact).
    std::optional<int> order() const;

    const ExtendedRational& leading() const;
    // Coefficient of t^k; throws if k is at or beyond the precision.
    ExtendedRational coeff(int k) const;
    const std::vector<ExtendedRational>& coeffs() const { return c_; }

    TruncatedSeries truncated(int precision) const;
    // The known terms below t^below as an exact Laurent polynomial.
    TruncatedSeries polynomial_part(int below) const;

    double evaluate(double t) const;

    TruncatedSeries operator-() const;
    TruncatedSeries& operator+=(const TruncatedSeries& o);
    TruncatedSeries& operator-=(const TruncatedSeries& o);
    TruncatedSeries& operator*=(const TruncatedSeries& o);
    TruncatedSeries& operator/=(const TruncatedSeries& o);

    friend TruncatedSeries operator+(TruncatedSeries x, const TruncatedSeries& y) { return x += y; }
    friend TruncatedSeries operator-(TruncatedSeries x, const TruncatedSeries& y) { return x -= y; }
    friend TruncatedSeries operator*(const TruncatedSeries& x, const TruncatedSeries& y);
    friend TruncatedSeries operator/(TruncatedSeries x, const TruncatedSeries& y) { return x /= y; }
    // Structural equality: same known coefficients and same precision.
    friend bool operator==(const TruncatedSeries& x, const TruncatedSeries& y);
    friend bool operator!=(const TruncatedSeries& x, const TruncatedSeries& y) { return !(x == y); }

    std::string to_string() const;

private:
    void normalize();

    int val_ = 0;
    std::vector<ExtendedRational> c_;
    std::optional<int> prec_;
};

// cap bounds the relative order produced from exact inputs.
TruncatedSeries inverse(const TruncatedSeries& a, int cap = kDefaultOrder);
TruncatedSeries sqrt(const TruncatedSeries& a, int cap = kDefaultOrder);
TruncatedSeries compose(const CoefficientGenerator& outer, const TruncatedSeries& inner,
                        int cap = kDefaultOrder);
TruncatedSeries pow(const TruncatedSeries& a, int n);

std::ostream& operator<<(std::ostream& os, const TruncatedSeries& s);

}  // namespace critlab
