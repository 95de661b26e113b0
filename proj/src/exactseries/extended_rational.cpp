#include "critlab/exactseries/extended_rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace critlab {

namespace {

const char* kRadical[4] = {"", "sqrt2", "sqrt3", "sqrt6"};

bool perfect_square(const mpz_class& z) { return z >= 0 && mpz_perfect_square_p(z.get_mpz_t()) != 0; }

// flip sign of sqrt3 (and therefore sqrt6)
ExtendedRational conj3(const ExtendedRational& x) { return {x.a(), x.b(), -x.c(), -x.d()}; }
// flip sign of sqrt2 (and therefore sqrt6)
ExtendedRational conj2(const ExtendedRational& x) { return {x.a(), -x.b(), x.c(), -x.d()}; }

// sign of u + v*sqrt2
int sign_sqrt2(const mpq_class& u, const mpq_class& v) {
    int su = sgn(u), sv = sgn(v);
    if (su == sv || sv == 0) return su;
    if (su == 0) return sv;
    mpq_class diff = u * u - 2 * v * v;
    return sgn(diff) > 0 ? su : sv;
}

}  // namespace

ExtendedRational::ExtendedRational(const mpq_class& a, const mpq_class& b,
                                   const mpq_class& c, const mpq_class& d)
    : q_{a, b, c, d} {
    for (auto& x : q_) x.canonicalize();
}

ExtendedRational ExtendedRational::fraction(long num, long den) {
    if (den == 0) throw std::domain_error("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return {q};
}

bool ExtendedRational::is_zero() const {
    return sgn(q_[0]) == 0 && sgn(q_[1]) == 0 && sgn(q_[2]) == 0 && sgn(q_[3]) == 0;
}

bool ExtendedRational::is_rational() const {
    return sgn(q_[1]) == 0 && sgn(q_[2]) == 0 && sgn(q_[3]) == 0;
}

int ExtendedRational::sign() const {
    // x = p + q*sqrt3 with p = a + b*sqrt2, q = c + d*sqrt2
    int sp = sign_sqrt2(q_[0], q_[1]);
    int sq = sign_sqrt2(q_[2], q_[3]);
    if (sp == sq || sq == 0) return sp;
    if (sp == 0) return sq;
    // compare p^2 with 3 q^2, both in Q(sqrt2)
    mpq_class u = q_[0] * q_[0] + 2 * q_[1] * q_[1] - 3 * (q_[2] * q_[2] + 2 * q_[3] * q_[3]);
    mpq_class v = 2 * q_[0] * q_[1] - 6 * q_[2] * q_[3];
    return sign_sqrt2(u, v) > 0 ? sp : sq;
}

double ExtendedRational::to_double() const {
    static const double r2 = 1.41421356237309504880, r3 = 1.73205080756887729353,
                        r6 = 2.44948974278317809820;
    return q_[0].get_d() + q_[1].get_d() * r2 + q_[2].get_d() * r3 + q_[3].get_d() * r6;
}

ExtendedRational ExtendedRational::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero in Q(sqrt2,sqrt3)");
    ExtendedRational c3 = conj3(*this);
    ExtendedRational n = *this * c3;  // in Q(sqrt2)
    ExtendedRational c2 = conj2(n);
    ExtendedRational m = n * c2;  // rational
    ExtendedRational num = c3 * c2;
    mpq_class s = 1 / m.a();
    for (auto& x : num.q_) x *= s;
    return num;
}

bool ExtendedRational::has_field_sqrt() const {
    if (!is_rational() || sgn(q_[0]) <= 0) return false;
    for (int k : {1, 2, 3, 6}) {
        mpq_class r = q_[0] / k;
        if (perfect_square(r.get_num()) && perfect_square(r.get_den())) return true;
    }
    return false;
}

ExtendedRational ExtendedRational::sqrt() const {
    if (is_zero()) return {};
    if (is_rational() && sgn(q_[0]) > 0) {
        const int ks[4] = {1, 2, 3, 6};
        for (int i = 0; i < 4; ++i) {
            mpq_class r = q_[0] / ks[i];
            if (perfect_square(r.get_num()) && perfect_square(r.get_den())) {
                mpz_class n = ::sqrt(r.get_num()), d = ::sqrt(r.get_den());
                ExtendedRational out;
                out.q_[i] = mpq_class(n, d);
                out.q_[i].canonicalize();
                return out;
            }
        }
    }
    throw std::domain_error("no square root in Q(sqrt2,sqrt3) for " + to_string());
}

ExtendedRational ExtendedRational::parse(std::string_view text) {
    ExtendedRational out;
    std::size_t i = 0;
    auto skip = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    auto digits = [&] {
        std::size_t s = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        return std::string(text.substr(s, i - s));
    };
    skip();
    if (i == text.size()) throw std::invalid_argument("empty number");
    while (i < text.size()) {
        int sign = 1;
        skip();
        while (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            if (text[i] == '-') sign = -sign;
            ++i;
            skip();
        }
        mpq_class coef = 1;
        bool have_coef = false;
        std::string num = digits();
        if (!num.empty()) {
            have_coef = true;
            mpz_class n(num), d(1);
            skip();
            if (i < text.size() && text[i] == '/') {
                ++i;
                skip();
                std::string den = digits();
                if (den.empty()) throw std::invalid_argument("bad fraction in '" + std::string(text) + "'");
                d = mpz_class(den);
            }
            coef = mpq_class(n, d);
            coef.canonicalize();
        }
        skip();
        if (i < text.size() && text[i] == '*') {
            ++i;
            skip();
        }
        int slot = 0;
        if (text.substr(i, 4) == "sqrt") {
            i += 4;
            char k = i < text.size() ? text[i] : '\0';
            slot = k == '2' ? 1 : k == '3' ? 2 : k == '6' ? 3 : -1;
            if (slot < 0) throw std::invalid_argument("unsupported radical in '" + std::string(text) + "'");
            ++i;
        } else if (!have_coef) {
            throw std::invalid_argument("cannot parse '" + std::string(text) + "'");
        }
        out.q_[slot] += sign * coef;
        skip();
    }
    return out;
}

std::string ExtendedRational::to_string() const {
    std::string s;
    for (int i = 0; i < 4; ++i) {
        if (sgn(q_[i]) == 0) continue;
        mpq_class v = q_[i];
        if (s.empty()) {
            if (sgn(v) < 0) s += "-";
        } else {
            s += sgn(v) < 0 ? " - " : " + ";
        }
        v = abs(v);
        if (i == 0 || v != 1) s += v.get_str();
        if (i > 0) s += (v != 1 ? "*" : "") + std::string(kRadical[i]);
    }
    return s.empty() ? "0" : s;
}

ExtendedRational ExtendedRational::operator-() const {
    ExtendedRational r = *this;
    for (auto& x : r.q_) x = -x;
    return r;
}

ExtendedRational& ExtendedRational::operator+=(const ExtendedRational& o) {
    for (int i = 0; i < 4; ++i) q_[i] += o.q_[i];
    return *this;
}

ExtendedRational& ExtendedRational::operator-=(const ExtendedRational& o) {
    for (int i = 0; i < 4; ++i) q_[i] -= o.q_[i];
    return *this;
}

ExtendedRational& ExtendedRational::operator*=(const ExtendedRational& o) {
    if (is_rational() && o.is_rational()) {
        q_[0] *= o.q_[0];
        return *this;
    }
    const auto& [a, b, c, d] = q_;
    const auto& [e, f, g, h] = o.q_;
    mpq_class r1 = a * e + 2 * b * f + 3 * c * g + 6 * d * h;
    mpq_class r2 = a * f + b * e + 3 * (c * h + d * g);
    mpq_class r3 = a * g + c * e + 2 * (b * h + d * f);
    mpq_class r6 = a * h + d * e + b * g + c * f;
    q_ = {r1, r2, r3, r6};
    return *this;
}

std::ostream& operator<<(std::ostream& os, const ExtendedRational& x) { return os << x.to_string(); }

}  // namespace critlab
