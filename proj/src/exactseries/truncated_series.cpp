#include "critlab/exactseries/truncated_series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace critlab {

namespace outer {

CoefficientGenerator arctan() {
    return [](int k) -> ExtendedRational {
        if (k % 2 == 0) return {};
        return ExtendedRational::fraction(((k - 1) / 2) % 2 ? -1 : 1, k);
    };
}

CoefficientGenerator cos() {
    return [](int k) -> ExtendedRational {
        if (k % 2) return {};
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
        return {mpq_class((k / 2) % 2 ? -1 : 1, f)};
    };
}

CoefficientGenerator sqrt1p() {
    return [](int k) -> ExtendedRational {
        mpq_class c = 1;
        for (int j = 0; j < k; ++j) c *= mpq_class(1 - 2 * j, 2 * (j + 1));
        return {c};
    };
}

CoefficientGenerator geometric() {
    return [](int k) -> ExtendedRational { return k % 2 ? -1 : 1; };
}

CoefficientGenerator exp() {
    return [](int k) -> ExtendedRational {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
        return {mpq_class(1, f)};
    };
}

}  // namespace outer

TruncatedSeries::TruncatedSeries(const ExtendedRational& c) {
    if (!c.is_zero()) c_.push_back(c);
}

TruncatedSeries::TruncatedSeries(int valuation, std::vector<ExtendedRational> coeffs,
                                 std::optional<int> precision)
    : val_(valuation), c_(std::move(coeffs)), prec_(precision) {
    normalize();
}

TruncatedSeries TruncatedSeries::monomial(const ExtendedRational& c, int power) {
    return TruncatedSeries(power, {c});
}

TruncatedSeries TruncatedSeries::exp_t(int precision) {
    std::vector<ExtendedRational> c;
    auto g = outer::exp();
    for (int k = 0; k < precision; ++k) c.push_back(g(k));
    return TruncatedSeries(0, std::move(c), precision);
}

void TruncatedSeries::normalize() {
    if (prec_) {
        int keep = std::max(0, *prec_ - val_);
        if (static_cast<int>(c_.size()) > keep) c_.resize(keep);
    }
    std::size_t lead = 0;
    while (lead < c_.size() && c_[lead].is_zero()) ++lead;
    if (lead) {
        c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
        val_ += static_cast<int>(lead);
    }
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    if (c_.empty()) val_ = prec_ ? *prec_ : 0;
}

int TruncatedSeries::valuation() const {
    if (c_.empty() && !prec_) throw std::logic_error("exact zero series has no valuation");
    return val_;
}

std::optional<int> TruncatedSeries::order() const {
    if (!prec_) return std::nullopt;
    return *prec_ - val_;
}

const ExtendedRational& TruncatedSeries::leading() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of a zero series");
    return c_.front();
}

ExtendedRational TruncatedSeries::coeff(int k) const {
    if (prec_ && k >= *prec_)
        throw std::out_of_range("coefficient t^" + std::to_string(k) + " is beyond O(t^" +
                                std::to_string(*prec_) + ")");
    int i = k - val_;
    if (i < 0 || i >= static_cast<int>(c_.size())) return {};
    return c_[static_cast<std::size_t>(i)];
}

TruncatedSeries TruncatedSeries::truncated(int precision) const {
    int p = prec_ ? std::min(*prec_, precision) : precision;
    return TruncatedSeries(val_, c_, p);
}

TruncatedSeries TruncatedSeries::polynomial_part(int below) const {
    if (prec_ && below > *prec_)
        throw std::out_of_range("polynomial_part: t^" + std::to_string(below - 1) + " is beyond O(t^" +
                                std::to_string(*prec_) + ")");
    std::vector<ExtendedRational> c(c_.begin(), c_.begin() + std::clamp(below - val_, 0, static_cast<int>(c_.size())));
    return TruncatedSeries(val_, std::move(c));
}

double TruncatedSeries::evaluate(double t) const {
    double s = 0;
    for (std::size_t i = c_.size(); i-- > 0;) s = s * t + c_[i].to_double();
    return s * std::pow(t, val_);
}

TruncatedSeries TruncatedSeries::operator-() const {
    TruncatedSeries r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
    if (o.c_.empty() && !o.prec_) return *this;
    if (c_.empty() && !prec_) return *this = o;
    std::optional<int> p = prec_;
    if (o.prec_) p = p ? std::min(*p, *o.prec_) : *o.prec_;
    int v = std::min(val_, o.val_);
    int end = std::max(val_ + static_cast<int>(c_.size()), o.val_ + static_cast<int>(o.c_.size()));
    if (p) end = std::min(end, *p);
    std::vector<ExtendedRational> out(static_cast<std::size_t>(std::max(0, end - v)));
    for (std::size_t i = 0; i < c_.size(); ++i) {
        int k = val_ + static_cast<int>(i) - v;
        if (k < static_cast<int>(out.size())) out[static_cast<std::size_t>(k)] = c_[i];
    }
    for (std::size_t i = 0; i < o.c_.size(); ++i) {
        int k = o.val_ + static_cast<int>(i) - v;
        if (k < static_cast<int>(out.size())) out[static_cast<std::size_t>(k)] += o.c_[i];
    }
    *this = TruncatedSeries(v, std::move(out), p);
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) { return *this += -o; }

TruncatedSeries operator*(const TruncatedSeries& x, const TruncatedSeries& y) {
    if ((x.c_.empty() && !x.prec_) || (y.c_.empty() && !y.prec_)) return {};
    int v = x.val_ + y.val_;
    std::optional<int> p;
    if (x.prec_) p = *x.prec_ + y.val_;
    if (y.prec_) p = p ? std::min(*p, *y.prec_ + x.val_) : *y.prec_ + x.val_;
    int n = static_cast<int>(x.c_.size() + y.c_.size()) - 1;
    if (p) n = std::min(n, *p - v);
    std::vector<ExtendedRational> out(static_cast<std::size_t>(std::max(0, n)));
    for (int i = 0; i < static_cast<int>(x.c_.size()) && i < n; ++i) {
        const auto& xi = x.c_[static_cast<std::size_t>(i)];
        if (xi.is_zero()) continue;
        for (int j = 0; j < static_cast<int>(y.c_.size()) && i + j < n; ++j) {
            const auto& yj = y.c_[static_cast<std::size_t>(j)];
            if (!yj.is_zero()) out[static_cast<std::size_t>(i + j)] += xi * yj;
        }
    }
    return TruncatedSeries(v, std::move(out), p);
}

TruncatedSeries& TruncatedSeries::operator*=(const TruncatedSeries& o) { return *this = *this * o; }

TruncatedSeries& TruncatedSeries::operator/=(const TruncatedSeries& o) { return *this = *this * inverse(o); }

bool operator==(const TruncatedSeries& x, const TruncatedSeries& y) {
    return x.val_ == y.val_ && x.prec_ == y.prec_ && x.c_ == y.c_;
}

std::string TruncatedSeries::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        int k = val_ + static_cast<int>(i);
        std::string c = c_[i].to_string();
        bool compound = c.find(' ') != std::string::npos;
        if (!first) os << " + ";
        if (compound) os << "(" << c << ")";
        else os << c;
        if (k == 1) os << " t";
        else if (k != 0) os << " t^" << k;
        first = false;
    }
    if (prec_) os << (first ? "" : " + ") << "O(t^" << *prec_ << ")";
    else if (first) os << "0";
    return os.str();
}

TruncatedSeries inverse(const TruncatedSeries& a, int cap) {
    if (a.is_zero()) throw std::domain_error("non-invertible series");
    int v = a.valuation();
    int n = a.precision() ? *a.order() : cap;
    const auto& c = a.coeffs();
    auto cj = [&](int j) -> const ExtendedRational* {
        return j < static_cast<int>(c.size()) && !c[static_cast<std::size_t>(j)].is_zero()
                   ? &c[static_cast<std::size_t>(j)] : nullptr;
    };
    ExtendedRational inv0 = c[0].inverse();
    std::vector<ExtendedRational> b(static_cast<std::size_t>(n));
    if (n > 0) b[0] = inv0;
    for (int k = 1; k < n; ++k) {
        ExtendedRational s;
        for (int j = 1; j <= k; ++j)
            if (auto p = cj(j)) s += *p * b[static_cast<std::size_t>(k - j)];
        b[static_cast<std::size_t>(k)] = -(s * inv0);
    }
    return TruncatedSeries(-v, std::move(b), -v + n);
}

TruncatedSeries sqrt(const TruncatedSeries& a, int cap) {
    if (a.is_zero()) {
        if (a.is_exact()) return {};
        return TruncatedSeries::big_o(a.valuation() / 2);
    }
    int v = a.valuation();
    if (v % 2) throw std::domain_error("sqrt of a series with odd valuation " + std::to_string(v));
    if (!a.leading().has_field_sqrt())
        throw std::domain_error("sqrt: leading coefficient " + a.leading().to_string() +
                                " has no square root in Q(sqrt2,sqrt3)");
    int n = a.precision() ? *a.order() : cap;
    const auto& c = a.coeffs();
    std::vector<ExtendedRational> s(static_cast<std::size_t>(n));
    ExtendedRational s0 = a.leading().sqrt();
    ExtendedRational inv2s0 = (2 * s0).inverse();
    if (n > 0) s[0] = s0;
    for (int k = 1; k < n; ++k) {
        ExtendedRational acc = k < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(k)] : ExtendedRational();
        for (int j = 1; j < k; ++j) {
            const auto& sj = s[static_cast<std::size_t>(j)];
            if (!sj.is_zero()) acc -= sj * s[static_cast<std::size_t>(k - j)];
        }
        s[static_cast<std::size_t>(k)] = acc * inv2s0;
    }
    return TruncatedSeries(v / 2, std::move(s), v / 2 + n);
}

TruncatedSeries compose(const CoefficientGenerator& g, const TruncatedSeries& inner, int cap) {
    if (inner.is_zero()) {
        TruncatedSeries c0(g(0));
        if (inner.is_exact()) return c0;
        return c0 + TruncatedSeries::big_o(inner.valuation());
    }
    int v = inner.valuation();
    if (v < 1) throw std::domain_error("compose: inner series must have valuation >= 1, got " + std::to_string(v));
    int p = inner.precision() ? *inner.precision() : cap;
    TruncatedSeries x = inner.truncated(p);
    int top = (p - 1) / v;
    TruncatedSeries acc = TruncatedSeries(g(top)).truncated(p);
    for (int k = top - 1; k >= 0; --k) acc = (acc * x + TruncatedSeries(g(k))).truncated(p);
    return acc;
}

TruncatedSeries pow(const TruncatedSeries& a, int n) {
    if (n < 0) return inverse(pow(a, -n));
    TruncatedSeries r(1), base = a;
    while (n) {
        if (n & 1) r *= base;
        n >>= 1;
        if (n) base *= base;
    }
    return r;
}

std::ostream& operator<<(std::ostream& os, const TruncatedSeries& s) { return os << s.to_string(); }

}  // namespace critlab
