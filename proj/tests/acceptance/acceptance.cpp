// One PASS/FAIL line per acceptance criterion.  Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "critlab/ensemble/ensemble.hpp"
#include "critlab/kacrice/kacrice.hpp"
#include "critlab/verify/verify_series.hpp"

using namespace critlab;

namespace {

const double kJ0 = 2.0 / (3.0 * M_PI * M_PI);
const double kK1 = 5.0 / (3.0 * M_PI);

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += !pass;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void exact_coefficients() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = verify_series();
    const double s = seconds_since(t0);
    std::string detail = std::to_string(rep.count(CheckStatus::pass)) + "/" + std::to_string(rep.checks.size()) +
                         " checks, symmetric orders";
    for (int o : rep.symmetric) detail += " " + std::to_string(o);
    detail += fmt(", %.1f s", s);
    for (const auto& c : rep.checks)
        if (c.status != CheckStatus::pass) detail += "; " + c.name + " " + to_string(c.status);
    report(1, rep.all_pass() && rep.count(CheckStatus::skipped) == 0 && s < 60, "exact coefficients", detail);
}

void headline_limit(std::int64_t n, int workers) {
    const auto pts = j_curve({0.04, 0.02, 0.01}, n, 20240601, workers);
    const auto x = extrapolate_to_zero(pts);
    const double rel = x.intercept / kJ0 - 1;
    bool pass = std::abs(rel) <= 0.01;
    std::string detail = fmt("J(0) = %.6f +- %.6f (%+.2f%%)", x.intercept, x.std_error, 100 * rel);
    for (const auto& p : pts) {
        const bool ok = std::abs(p.value - kJ0) <= 3 * p.std_error + 0.5 * p.t;
        pass = pass && ok;
        detail += fmt("; t=%.2f J=%.6f+-%.6f", p.t, p.value, p.std_error);
    }
    report(2, pass, "headline limit 2/(3 pi^2)", detail + fmt("; n=%.0e", double(n)));
}

void gaussian_moment_check(int workers) {
    const auto m = gaussian_moment_alpha4(1000000, 777, workers);
    report(3, std::abs(m.mean + 2) <= 3 * m.std_error, "E[alpha4] = -2",
           fmt("%.5f +- %.5f at 1e6 samples", m.mean, m.std_error));
}

void one_point(int workers) {
    const double quad = abs_exponential_integral(2.0);
    const double k1 = one_point_density();
    const auto mc = one_point_density_mc(4000000, 4242, workers);
    const bool pass = std::abs(quad - 5.0 / 3) < 1e-8 && std::abs(k1 - kK1) <= 1e-14 * kK1 &&
                      std::abs(mc.value - kK1) <= 3 * mc.std_error;
    report(4, pass, "one-point density 5/(3 pi)",
           fmt("quadrature %.3e off 5/3; K1 = %.12f; MC %.5f +- %.5f", std::abs(quad - 5.0 / 3), k1, mc.value,
               mc.std_error));
}

void factorization(std::int64_t n, int workers) {
    const auto e = two_point_J(16.0, n, 99, workers);
    const double ratio = e.value / (kK1 * kK1);
    report(5, ratio >= 0.98 && ratio <= 1.02, "factorization at r = 4",
           fmt("J/K1^2 = %.5f +- %.5f", ratio, e.std_error / (kK1 * kK1)));
}

void ensemble(int sections, int workers) {
    const auto model = RandomSectionModel::bargmann_fock(60);
    const auto edges = parse_bins("0:0.1:3");
    const auto t0 = std::chrono::steady_clock::now();
    const auto cats = simulate_catalogs(model, sections, 7, {max_window(model), 0}, {}, workers);
    const auto dens = estimate_density(cats);
    const auto h = estimate_pair_correlation(cats, edges, EdgeCorrection::border);
    const double dev_density = dens.density / kK1 - 1;

    double worst = 0, worst_r = 0;
    for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
        const double mid = 0.5 * (edges[b] + edges[b + 1]);
        if (edges[b] < 1.5 - 1e-9 || edges[b + 1] > 3 + 1e-9) continue;
        const double ref = two_point_J(mid * mid, 1000000, 5000 + b, workers).value / (kK1 * kK1);
        const double got = h.k2_hat[b] / (dens.density * dens.density);
        const double dev = got / ref - 1;
        if (std::abs(dev) > std::abs(worst)) {
            worst = dev;
            worst_r = mid;
        }
    }
    std::size_t first = 0;
    while (first < h.counts.size() && h.counts[first] == 0) ++first;
    const double small = first < h.counts.size() ? h.k2_hat[first] : 0;
    int n_deg = 0;
    for (const auto& c : cats) n_deg += c.degenerate;

    const bool pass = std::abs(dev_density) <= 0.05 && std::abs(worst) <= 0.10 && small > 0 && small < kK1 * kK1;
    report(6, pass, "Bargmann-Fock ensemble, K = 60",
           fmt("%.0f sections; density %.5f (%+.2f%%); worst ratio deviation on [1.5, 3] ", double(sections), dens.density,
               100 * dev_density) +
               fmt("%+.2f%% at r = %.2f; ", 100 * worst, worst_r) +
               fmt("smallest populated bin [%.1f, %.1f) K2 = %.4f vs K1^2 = %.4f", edges[first], edges[first + 1],
                   small, kK1 * kK1) +
               fmt("; %.0f degenerate; %.1f s", double(n_deg), seconds_since(t0)));
}

void identities() {
    std::mt19937_64 g(31337);
    std::normal_distribution<double> nd(0.0, 1.0);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        Vector4c w;
        for (int k = 0; k < 4; ++k) w(k) = {nd(g), nd(g)};
        const auto d = integrand_terms(w);
        const auto e = expansion_terms(w);
        const double sc = 1 + w.squaredNorm() * w.squaredNorm();
        auto rel = [&](double a, double b) { return std::abs(a - b) / sc; };
        worst = std::max({worst, std::abs(e.alpha2) / sc, std::abs(e.alpha3) / sc, rel(e.beta3, -e.beta2),
                          rel(e.gamma3, e.gamma2), rel(e.alpha4, -e.beta2 * e.beta2), rel(d.alpha4, -d.beta2 * d.beta2),
                          rel(e.beta4, d.beta4), rel(beta4_expanded(w), beta4_compact(w))});
    }
    report(7, worst < 1e-12, "integrand identities", fmt("max scaled defect %.2e over 1e4 points", worst));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int workers = 0;
    double samples = 1e7;
    int sections = 500;
    app.add_option("--workers", workers, "Worker threads (default CRITLAB_WORKERS or all cores)");
    app.add_option("--samples", samples, "Monte Carlo samples for criteria 2 and 5");
    app.add_option("--sections", sections, "Sections for criterion 6");
    CLI11_PARSE(app, argc, argv);
    if (workers <= 0) {
        const char* env = std::getenv("CRITLAB_WORKERS");
        workers = env ? std::max(1, std::atoi(env)) : std::max(1u, std::thread::hardware_concurrency());
    }
    const auto n = static_cast<std::int64_t>(samples);

    exact_coefficients();
    headline_limit(n, workers);
    gaussian_moment_check(workers);
    one_point(workers);
    factorization(n, workers);
    ensemble(sections, workers);
    identities();
    std::printf("%d of 7 criteria failed\n", failures);
    return failures;
}
