#include "critlab/ensemble/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <json.hpp>

namespace critlab {

namespace {

using cd = std::complex<double>;

constexpr double kStartSpacing = 0.35;
constexpr double kDegenerateRatio = 1e-8;
constexpr double kMaxLogScale = 600;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Map between the scaled window coordinate and the section coordinate.
cd to_scaled(const RandomSectionModel& m, const WindowSpec& w, cd z) {
    if (m.kind == ModelKind::bargmann_fock) return z - w.center;
    return std::sqrt(double(m.degree)) * (z - w.center) / (1.0 + std::conj(w.center) * z);
}

cd from_scaled(const RandomSectionModel& m, const WindowSpec& w, cd zeta) {
    if (m.kind == ModelKind::bargmann_fock) return zeta + w.center;
    cd u = zeta / std::sqrt(double(m.degree));
    return (u + w.center) / (1.0 - std::conj(w.center) * u);
}

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(static_cast<std::size_t>(n)) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[static_cast<std::size_t>(x)] != x) x = p[static_cast<std::size_t>(x)] = p[static_cast<std::size_t>(p[static_cast<std::size_t>(x)])];
        return x;
    }
    void unite(int a, int b) { p[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

RandomSectionModel RandomSectionModel::bargmann_fock(int K) {
    if (K < 8) throw EnsembleError("Bargmann-Fock truncation K must be >= 8");
    return {ModelKind::bargmann_fock, K};
}

RandomSectionModel RandomSectionModel::su2(int N) {
    if (N < 2) throw EnsembleError("SU(2) degree N must be >= 2");
    return {ModelKind::su2, N};
}

std::string RandomSectionModel::name() const { return kind == ModelKind::bargmann_fock ? "bf" : "su2"; }

std::uint64_t section_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(splitmix64(seed) ^ index); }

Coefficients sample_section(const RandomSectionModel& model, std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5ec7u};
    std::mt19937_64 eng(seq);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    Coefficients c(model.degree + 1);
    for (int k = 0; k <= model.degree; ++k) {
        double re = normal(eng);
        double im = normal(eng);
        c(k) = cd(re, im);
    }
    return c;
}

Coefficients monomial_coefficients(const RandomSectionModel& model, const Coefficients& c) {
    Coefficients a(c.size());
    const int n = static_cast<int>(c.size()) - 1;
    for (int k = 0; k <= n; ++k) {
        double w = model.kind == ModelKind::bargmann_fock
                       ? std::exp(-0.5 * std::lgamma(k + 1.0))
                       : std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
        a(k) = w * c(k);
    }
    return a;
}

namespace {

// a holds the monomial coefficients of the section.
CriticalJet jet_from_monomials(const RandomSectionModel& model, const Coefficients& a, cd z) {
    const double r2 = std::norm(z);
    const int n = static_cast<int>(a.size()) - 1;
    double log_scale;
    if (model.kind == ModelKind::bargmann_fock) log_scale = 0.5 * r2;
    else log_scale = 0.5 * std::log(double(model.degree)) + (0.5 * model.degree - 1) * std::log1p(r2);
    if (log_scale > kMaxLogScale) throw EnsembleError("critical equation would overflow at |z| = " + std::to_string(std::abs(z)));

    cd f = 0, f1 = 0, f2 = 0;
    for (int k = n; k >= 0; --k) {
        f2 = f2 * z + 2.0 * f1;
        f1 = f1 * z + f;
        f = f * z + a(k);
    }
    CriticalJet j;
    j.scale = std::exp(log_scale);
    const cd zb = std::conj(z);
    if (model.kind == ModelKind::bargmann_fock) {
        j.F = f1 - zb * f;
        j.Fz = f2 - zb * f1;
        j.Fzbar = -f;
    } else {
        const double N = model.degree, q = 1 + r2;
        j.F = f1 - N * zb * f / q;
        j.Fz = f2 - N * zb * f1 / q + N * zb * zb * f / (q * q);
        j.Fzbar = -N * f / (q * q);
    }
    return j;
}

}  // namespace

CriticalJet critical_jet(const RandomSectionModel& model, const Coefficients& c, cd z) {
    return jet_from_monomials(model, monomial_coefficients(model, c), z);
}

cd critical_equation(const RandomSectionModel& model, const Coefficients& c, cd z) {
    return critical_jet(model, c, z).F;
}

double max_window(const RandomSectionModel& model) {
    if (model.kind == ModelKind::bargmann_fock) return std::sqrt(double(model.degree)) - 3;
    return std::sqrt(double(model.degree));
}

namespace {

// d/dz log scale(z)
cd dlog_scale(const RandomSectionModel& model, cd z) {
    if (model.kind == ModelKind::bargmann_fock) return 0.5 * std::conj(z);
    return (0.5 * model.degree - 1) * std::conj(z) / (1 + std::norm(z));
}

enum class NewtonStatus { converged, degenerate, failed };

struct NewtonResult {
    NewtonStatus status = NewtonStatus::failed;
    cd z;
    double residual = 0;
};

NewtonResult newton(const RandomSectionModel& model, const Coefficients& a, cd z, const FinderOptions& opt,
                    const WindowSpec& window, double max_step, double z_limit) {
    NewtonResult r;
    bool polishing = false;
    for (int it = 0; it < opt.max_iter; ++it) {
        if (std::abs(z) > z_limit) return r;
        CriticalJet j;
        try {
            j = jet_from_monomials(model, a, z);
        } catch (const EnsembleError&) {
            return r;
        }
        // Newton on G = F / scale: same zeros, but the basins are not distorted
        // by the growth of F away from the origin
        const cd lam = dlog_scale(model, z);
        const cd a = (j.Fz - j.F * lam) / j.scale, b = (j.Fzbar - j.F * std::conj(lam)) / j.scale;
        const cd G = j.F / j.scale;
        Eigen::Matrix2d J;
        J << (a + b).real(), -(a - b).imag(), (a + b).imag(), (a - b).real();
        Eigen::Vector2d rhs(-G.real(), -G.imag());
        const double den = std::norm(a) + std::norm(b) + 1;
        // minimum-norm step where the Jacobian is (nearly) singular
        Eigen::Vector2d step = std::abs(J.determinant()) < kDegenerateRatio * den
                                   ? Eigen::Vector2d(J.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(rhs))
                                   : Eigen::Vector2d(J.partialPivLu().solve(rhs));
        if (!step.allFinite()) return r;
        cd dz(step(0), step(1));
        // trust region: at most one start spacing per step, so each start
        // explores its own neighbourhood instead of jumping across the window
        const double moved = std::abs(to_scaled(model, window, z + dz) - to_scaled(model, window, z));
        if (moved > max_step) dz *= max_step / moved;
        z += dz;
        if (polishing) break;
        polishing = std::abs(dz) < 1e-3 * opt.tol * (1 + std::abs(z));
    }
    // acceptance is decided by the residual and the Jacobian at the final point
    CriticalJet j;
    try {
        j = jet_from_monomials(model, a, z);
    } catch (const EnsembleError&) {
        return r;
    }
    r.z = z;
    r.residual = std::abs(j.F) / j.scale;
    if (!(r.residual <= opt.tol)) return r;
    const double den = std::norm(j.Fz) + std::norm(j.Fzbar) + j.scale * j.scale;
    const double det = std::norm(j.Fz) - std::norm(j.Fzbar);
    r.status = std::abs(det) < kDegenerateRatio * den ? NewtonStatus::degenerate : NewtonStatus::converged;
    return r;
}

}  // namespace

PointCatalog find_critical_points(const RandomSectionModel& model, const Coefficients& c, const WindowSpec& window,
                                  const FinderOptions& opt, std::uint64_t seed) {
    if (!(window.radius > 0)) throw EnsembleError("window radius must be > 0");
    if (model.kind == ModelKind::bargmann_fock && window.radius > max_window(model) + 1e-12)
        throw EnsembleError("window radius " + std::to_string(window.radius) + " exceeds sqrt(K) - 3 = " +
                            std::to_string(max_window(model)));
    if (!(opt.grid_density > 0) || !(opt.tol > 0)) throw EnsembleError("grid density and tol must be > 0");

    PointCatalog cat;
    cat.model = model;
    cat.seed = seed;
    cat.window = window;

    const Coefficients a = monomial_coefficients(model, c);
    const double h = kStartSpacing / opt.grid_density;
    const double reach = window.radius + h;
    const double z_limit = std::abs(from_scaled(model, window, 0)) + 4 * (reach + 2) *
                                                                         (model.kind == ModelKind::su2 ? 1 + std::norm(window.center) : 1.0);
    std::vector<NewtonResult> found;
    const double dy = h * std::sqrt(3.0) / 2;
    const int rows = static_cast<int>(std::ceil(reach / dy));
    for (int jy = -rows; jy <= rows; ++jy) {
        const double y = jy * dy;
        const double shift = (jy & 1) ? h / 2 : 0.0;
        const int cols = static_cast<int>(std::ceil(reach / h)) + 1;
        for (int ix = -cols; ix <= cols; ++ix) {
            const cd zeta(ix * h + shift, y);
            if (std::abs(zeta) > reach) continue;
            NewtonResult r = newton(model, a, from_scaled(model, window, zeta), opt, window, h, z_limit);
            // Newton can run outside the window into the truncation zone, where the
            // polynomial has its own near-degenerate zero set; only flag inside.
            if (r.status == NewtonStatus::degenerate && std::abs(to_scaled(model, window, r.z)) <= window.radius) {
                cat.degenerate = true;
                ++cat.n_degenerate;
            }
            if (r.status == NewtonStatus::converged) found.push_back(r);
        }
    }

    // deduplicate in scaled coordinates at radius 10 tol
    const int n = static_cast<int>(found.size());
    std::vector<cd> zs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) zs[static_cast<std::size_t>(i)] = to_scaled(model, window, found[static_cast<std::size_t>(i)].z);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return zs[static_cast<std::size_t>(a)].real() < zs[static_cast<std::size_t>(b)].real(); });
    UnionFind uf(n);
    const double dedup = 10 * opt.tol;
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k) {
            const cd a = zs[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
            const cd b = zs[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
            if (b.real() - a.real() > dedup) break;
            if (std::abs(a - b) <= dedup) uf.unite(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(k)]);
        }
    std::vector<int> best(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        int root = uf.find(i);
        int& b = best[static_cast<std::size_t>(root)];
        if (b < 0 || found[static_cast<std::size_t>(i)].residual < found[static_cast<std::size_t>(b)].residual) b = i;
    }
    for (int i = 0; i < n; ++i) {
        int b = best[static_cast<std::size_t>(i)];
        if (b < 0) continue;
        const cd zeta = zs[static_cast<std::size_t>(b)];
        if (std::abs(zeta) > window.radius) continue;
        cat.points.push_back({zeta, found[static_cast<std::size_t>(b)].z, found[static_cast<std::size_t>(b)].residual});
    }
    std::sort(cat.points.begin(), cat.points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        return a.z.real() != b.z.real() ? a.z.real() < b.z.real() : a.z.imag() < b.z.imag();
    });
    return cat;
}

std::vector<PointCatalog> simulate_catalogs(const RandomSectionModel& model, int n_sections, std::uint64_t seed,
                                            const WindowSpec& window, const FinderOptions& opt, int workers) {
    if (n_sections < 1) throw EnsembleError("n_sections must be >= 1");
    std::vector<PointCatalog> out(static_cast<std::size_t>(n_sections));
    auto run = [&](int w, int nw) {
        for (int s = w; s < n_sections; s += nw) {
            const std::uint64_t ss = section_seed(seed, static_cast<std::uint64_t>(s));
            out[static_cast<std::size_t>(s)] = find_critical_points(model, sample_section(model, ss), window, opt, ss);
        }
    };
    if (workers <= 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const int nw = std::min(workers, n_sections);
    if (nw <= 1) {
        run(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(run, w, nw);
        for (auto& t : pool) t.join();
    }
    return out;
}

DensityEstimate estimate_density(const std::vector<PointCatalog>& catalogs) {
    if (catalogs.empty()) throw EnsembleError("no catalogs");
    std::vector<double> per;
    DensityEstimate d;
    for (const auto& c : catalogs) {
        per.push_back(static_cast<double>(c.points.size()) / (M_PI * c.window.radius * c.window.radius));
        d.n_points += static_cast<std::int64_t>(c.points.size());
    }
    const double n = static_cast<double>(per.size());
    const double mean = std::accumulate(per.begin(), per.end(), 0.0) / n;
    double ss = 0;
    for (double v : per) ss += (v - mean) * (v - mean);
    d.density = mean;
    d.std_error = per.size() > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
    return d;
}

PairCorrHistogram estimate_pair_correlation(const std::vector<std::vector<cd>>& point_sets, double radius,
                                            const std::vector<double>& edges, EdgeCorrection ec) {
    if (point_sets.empty()) throw EnsembleError("empty catalog list");
    if (edges.size() < 2) throw EnsembleError("need at least one bin");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        if (!(edges[i] >= 0 && edges[i + 1] > edges[i])) throw EnsembleError("bin edges must be increasing and >= 0");
    const std::size_t nb = edges.size() - 1;
    const double r_max = edges.back();
    if (!(r_max < radius)) throw EnsembleError("largest bin edge must be below the window radius");

    PairCorrHistogram h;
    h.edges = edges;
    h.counts.assign(nb, 0);
    h.k2_hat.assign(nb, 0);
    h.std_error.assign(nb, 0);
    h.normalization.assign(nb, 0);
    h.n_sections = static_cast<int>(point_sets.size());
    std::vector<double> inner(nb), per_area(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        inner[b] = radius - (ec == EdgeCorrection::border ? r_max : edges[b + 1]);
        per_area[b] = M_PI * inner[b] * inner[b] * M_PI * (edges[b + 1] * edges[b + 1] - edges[b] * edges[b]);
        h.normalization[b] = h.n_sections * per_area[b];
    }
    std::vector<double> sum(nb, 0), sum2(nb, 0);
    std::vector<std::int64_t> local(nb);
    for (const auto& pts : point_sets) {
        std::fill(local.begin(), local.end(), 0);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double r1 = std::abs(pts[i]);
            for (std::size_t k = 0; k < pts.size(); ++k) {
                if (k == i) continue;
                const double d = std::abs(pts[i] - pts[k]);
                if (d >= r_max) continue;
                auto it = std::upper_bound(edges.begin(), edges.end(), d);
                if (it == edges.begin()) continue;
                const std::size_t b = static_cast<std::size_t>(it - edges.begin()) - 1;
                if (b >= nb || r1 > inner[b]) continue;
                ++local[b];
            }
        }
        for (std::size_t b = 0; b < nb; ++b) {
            h.counts[b] += local[b];
            const double v = static_cast<double>(local[b]) / per_area[b];
            sum[b] += v;
            sum2[b] += v * v;
        }
    }
    const double n = h.n_sections;
    for (std::size_t b = 0; b < nb; ++b) {
        h.k2_hat[b] = sum[b] / n;
        const double var = n > 1 ? std::max(0.0, (sum2[b] - n * h.k2_hat[b] * h.k2_hat[b]) / (n - 1)) : 0.0;
        h.std_error[b] = std::sqrt(var / n);
    }
    return h;
}

PairCorrHistogram estimate_pair_correlation(const std::vector<PointCatalog>& catalogs, const std::vector<double>& edges,
                                            EdgeCorrection ec) {
    if (catalogs.empty()) throw EnsembleError("empty catalog list");
    const double radius = catalogs.front().window.radius;
    std::vector<std::vector<cd>> sets;
    for (const auto& c : catalogs) {
        if (c.window.radius != radius) throw EnsembleError("catalogs have different windows");
        std::vector<cd> z;
        for (const auto& p : c.points) z.push_back(p.z);
        sets.push_back(std::move(z));
    }
    return estimate_pair_correlation(sets, radius, edges, ec);
}

std::vector<double> parse_bins(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw EnsembleError("bad bin spec '" + spec + "', expected a:h:b");
        }
    }
    if (parts.size() != 3 || !(parts[1] > 0) || !(parts[2] > parts[0]) || parts[0] < 0)
        throw EnsembleError("bad bin spec '" + spec + "', expected a:h:b with h > 0 and b > a >= 0");
    std::vector<double> edges;
    const long n = std::lround((parts[2] - parts[0]) / parts[1]);
    for (long i = 0; i <= n; ++i) edges.push_back(parts[0] + static_cast<double>(i) * parts[1]);
    return edges;
}

std::vector<ScalingCurve> su2_scaling_check(const std::vector<int>& N_list, int n_sections, std::uint64_t seed,
                                            const std::vector<double>& edges, double window_radius,
                                            const std::vector<double>& reference_ratio, cd center,
                                            const FinderOptions& opt, int workers) {
    std::vector<ScalingCurve> out;
    for (int N : N_list) {
        if (N < 8) throw EnsembleError("su2 scaling check needs N >= 8");
        auto model = RandomSectionModel::su2(N);
        auto cats = simulate_catalogs(model, n_sections, seed, {window_radius, center}, opt, workers);
        ScalingCurve c;
        c.N = N;
        c.hist = estimate_pair_correlation(cats, edges);
        c.density = estimate_density(cats);
        const double k1sq = c.density.density * c.density.density;
        for (std::size_t b = 0; b < c.hist.k2_hat.size(); ++b) {
            c.ratio.push_back(k1sq > 0 ? c.hist.k2_hat[b] / k1sq : 0.0);
            if (b < reference_ratio.size())
                c.sup_distance = std::max(c.sup_distance, std::abs(c.ratio.back() - reference_ratio[b]));
        }
        out.push_back(std::move(c));
    }
    return out;
}

void write_catalog_jsonl(std::ostream& os, const std::vector<PointCatalog>& catalogs) {
    for (const auto& c : catalogs) {
        nlohmann::json j;
        j["seed"] = c.seed;
        j["model"] = c.model.name();
        j["degree"] = c.model.degree;
        j["window"] = c.window.radius;
        j["degenerate"] = c.degenerate;
        auto pts = nlohmann::json::array();
        for (const auto& p : c.points) pts.push_back({p.z.real(), p.z.imag(), p.residual});
        j["points"] = std::move(pts);
        os << j.dump() << '\n';
    }
}

}  // namespace critlab
