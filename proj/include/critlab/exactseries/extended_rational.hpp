#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace critlab {

// Element a + b*sqrt2 + c*sqrt3 + d*sqrt6 of Q(sqrt2, sqrt3), exact.
class ExtendedRational {
public:
    ExtendedRational() = default;
    ExtendedRational(long v) : q_{mpq_class(v), 0, 0, 0} {}
    ExtendedRational(const mpq_class& a, const mpq_class& b = 0,
                     const mpq_class& c = 0, const mpq_class& d = 0);

    static ExtendedRational fraction(long num, long den);
    static ExtendedRational sqrt2() { return {0, 1, 0, 0}; }
    static ExtendedRational sqrt3() { return {0, 0, 1, 0}; }
    static ExtendedRational sqrt6() { return {0, 0, 0, 1}; }

    // Accepts sums of terms like "-5/288", "3/2*sqrt2", "sqrt6", "-1/24 sqrt3".
    static ExtendedRational parse(std::string_view text);

    const mpq_class& a() const { return q_[0]; }
    const mpq_class& b() const { return q_[1]; }
    const mpq_class& c() const { return q_[2]; }
    const mpq_class& d() const { return q_[3]; }
    const mpq_class& component(int i) const { return q_[i]; }

    bool is_zero() const;
    bool is_rational() const;
    // Exact sign of the real number represented.
    int sign() const;
    double to_double() const;

    ExtendedRational inverse() const;

    // Square root q*sqrt(k) of a positive rational q^2*k, k in {1,2,3,6}.
    // Throws if the element is not of that shape.
    ExtendedRational sqrt() const;
    bool has_field_sqrt() const;

    std::string to_string() const;

    ExtendedRational operator-() const;
    ExtendedRational& operator+=(const ExtendedRational& o);
    ExtendedRational& operator-=(const ExtendedRational& o);
    ExtendedRational& operator*=(const ExtendedRational& o);
    ExtendedRational& operator/=(const ExtendedRational& o) { return *this *= o.inverse(); }

    friend ExtendedRational operator+(ExtendedRational x, const ExtendedRational& y) { return x += y; }
    friend ExtendedRational operator-(ExtendedRational x, const ExtendedRational& y) { return x -= y; }
    friend ExtendedRational operator*(ExtendedRational x, const ExtendedRational& y) { return x *= y; }
    friend ExtendedRational operator/(ExtendedRational x, const ExtendedRational& y) { return x /= y; }
    friend bool operator==(const ExtendedRational& x, const ExtendedRational& y) { return x.q_ == y.q_; }
    friend bool operator!=(const ExtendedRational& x, const ExtendedRational& y) { return !(x == y); }
    friend bool operator<(const ExtendedRational& x, const ExtendedRational& y) { return (x - y).sign() < 0; }
    friend bool operator>(const ExtendedRational& x, const ExtendedRational& y) { return y < x; }

private:
    std::array<mpq_class, 4> q_;
};

std::ostream& operator<<(std::ostream& os, const ExtendedRational& x);

}  // namespace critlab
