#include "critlab/verify/verify_series.hpp"

#include <algorithm>

#include "critlab/covariance/series.hpp"
#include "critlab/spectra/spectra.hpp"
#include "critlab/verify/reference.hpp"

namespace critlab {

namespace {

std::string entry(const char* what, int i, int j) {
    return std::string(what) + std::to_string(i + 1) + std::to_string(j + 1);
}

class Collector {
public:
    explicit Collector(std::vector<SeriesCheck>& out) : out_(out) {}

    void coeff(const std::string& name, const TruncatedSeries& s, int k, const ExtendedRational& want) {
        const auto p = s.precision();
        if (p && k >= *p) {
            out_.push_back({name, want.to_string(), "O(t^" + std::to_string(*p) + ")", CheckStatus::skipped});
            return;
        }
        const ExtendedRational got = s.coeff(k);
        out_.push_back({name, want.to_string(), got.to_string(), got == want ? CheckStatus::pass : CheckStatus::fail});
    }

    void at_least(const std::string& name, int got, int want) {
        out_.push_back({name, ">= " + std::to_string(want), std::to_string(got),
                        got >= want ? CheckStatus::pass : CheckStatus::fail});
    }

    void equal(const std::string& name, int got, int want) {
        out_.push_back({name, std::to_string(want), std::to_string(got),
                        got == want ? CheckStatus::pass : CheckStatus::fail});
    }

    void failure(const std::string& name, const std::string& what) {
        out_.push_back({name, "completes", what, CheckStatus::fail});
    }

private:
    std::vector<SeriesCheck>& out_;
};

ExtendedRational er(const char* s) { return ExtendedRational::parse(s); }

}  // namespace

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "PASS";
        case CheckStatus::fail: return "FAIL";
        case CheckStatus::skipped: return "SKIP";
    }
    return "?";
}

bool VerifyReport::all_pass() const { return count(CheckStatus::fail) == 0; }

int VerifyReport::count(CheckStatus s) const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [&](const auto& c) { return c.status == s; }));
}

VerifyReport verify_series(const VerifyOptions& opt) {
    if (opt.order < 8) throw std::invalid_argument("verify_series: order must be at least 8");
    VerifyReport rep;
    rep.order = opt.order;
    Collector c(rep.checks);
    const int shift = std::max(0, kDefaultOrder - opt.order);

    const auto dl = detLambda_series(13);
    for (int k = 0; k < 5; ++k)
        c.coeff("detLambda t^" + std::to_string(8 + k), dl, 8 + k, er(reference::kDetLambdaDisplay[k]));
    const auto da = detA_series(5);
    for (int k = 0; k < 4; ++k) c.coeff("detA t^" + std::to_string(1 + k), da, 1 + k, er(reference::kDetADisplay[k]));

    YMatrixSeries Y = y_series(y_precision_for(opt.order));
    if (opt.perturb) {
        const auto& p = *opt.perturb;
        if (p.i < 0 || p.i > 3 || p.j < 0 || p.j > 3 || p.power < 0)
            throw std::invalid_argument("verify_series: perturbation outside Y");
        Y(p.i, p.j) += TruncatedSeries::monomial(ExtendedRational(p.delta), p.power);
    }

    const auto lim = y_limit_matrix();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            c.coeff(entry("Y(0) ", i, j), Y(i, j), 0, ExtendedRational(lim(i, j)));
            for (int k = 1; k < 4; ++k)
                c.coeff(entry("y", i, j) + " t^" + std::to_string(k), Y(i, j), k, er(reference::kYDisplay[i][j][k]));
        }

    EigenSystemSeries es;
    ConsistencyReport cr;
    try {
        const auto cp = char_poly(Y);
        es = eigensystem(Y);
        cr = consistency_checks(Y, cp, es);
    } catch (const std::exception& e) {
        c.failure("eigen decomposition", e.what());
        return rep;
    }

    for (int i = 0; i < 4; ++i) {
        rep.lambda_precision[i] = es.lambda[i].precision().value_or(1 << 20);
        for (int k = 0; k < 12; ++k)
            c.coeff("lambda" + std::to_string(i + 1) + " t^" + std::to_string(k), es.lambda[i], k,
                    er(reference::kLambdaDisplay[i][k]));
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 3; ++k)
                c.coeff(entry("u", i, j) + " t^" + std::to_string(k), es.U(i, j), k, er(reference::kUDisplay[i][j][k]));

    c.equal("UU*-I vanishing order", cr.uustar_defect_order, 3);
    for (const auto& e : reference::kUUDefect) {
        const auto& s = cr.uustar_defect(e.i - 1, e.j - 1);
        c.coeff(entry("(UU*-I)", e.i - 1, e.j - 1) + " t^3", s, 3, er(e.c3));
        c.coeff(entry("(UU*-I)", e.i - 1, e.j - 1) + " t^4", s, 4, er(e.c4));
    }
    c.at_least("U^-1 - U* vanishing order", cr.uinv_defect_order, 3);

    rep.symmetric = cr.symmetric;
    const char* names[4] = {"e1 + F3", "e2 - F2", "e3 + F1", "e4 - F0"};
    for (int i = 0; i < 4; ++i)
        c.at_least(std::string("order of ") + names[i], cr.symmetric[i], reference::kSymmetricOrders[i] - shift);
    return rep;
}

}  // namespace critlab
