#include "critlab/kacrice/kacrice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

#include "critlab/covariance/closed_forms.hpp"

namespace critlab {

namespace {

using cd = std::complex<double>;

struct Welford {
    std::int64_t n = 0;
    double mean = 0, m2 = 0;

    void add(double x) {
        ++n;
        double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    void merge(const Welford& o) {
        if (!o.n) return;
        if (!n) {
            *this = o;
            return;
        }
        double nn = static_cast<double>(n + o.n);
        double d = o.mean - mean;
        mean += d * static_cast<double>(o.n) / nn;
        m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / nn;
        n += o.n;
    }
};

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32), 0x6b72u};
    return std::mt19937_64(seq);
}

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void require_samples(std::int64_t n) {
    if (n < 1) throw KacRiceError("n_samples must be >= 1");
}

double re_prod(const cd& a, const cd& b) { return (a * std::conj(b)).real(); }

}  // namespace

template <int N>
Eigen::Matrix<cd, N, N> whitening_factor(const Eigen::Matrix<cd, N, N>& sigma, double tol) {
    const double scale = tol * sigma.trace().real();
    Eigen::Matrix<cd, N, N> L = Eigen::Matrix<cd, N, N>::Zero();
    for (int j = 0; j < N; ++j) {
        cd s = sigma(j, j);
        for (int k = 0; k < j; ++k) s -= L(j, k) * std::conj(L(j, k));
        double piv = s.real();
        if (piv < -scale)
            throw KacRiceError("covariance is not positive semidefinite (pivot " + std::to_string(j) + " = " +
                               std::to_string(piv) + ")");
        if (piv <= scale) continue;
        double d = std::sqrt(piv);
        L(j, j) = d;
        for (int i = j + 1; i < N; ++i) {
            cd v = sigma(i, j);
            for (int k = 0; k < j; ++k) v -= L(i, k) * std::conj(L(j, k));
            L(i, j) = v / d;
        }
    }
    return L;
}

template Eigen::Matrix<cd, 2, 2> whitening_factor<2>(const Eigen::Matrix<cd, 2, 2>&, double);
template Eigen::Matrix<cd, 4, 4> whitening_factor<4>(const Eigen::Matrix<cd, 4, 4>&, double);

MeanEstimate gaussian_mean(const std::function<double(const Vector4c&)>& f, const Matrix4c& L,
                           std::int64_t n_samples, std::uint64_t seed, int workers) {
    require_samples(n_samples);
    const std::int64_t chunks = (n_samples + kChunkSize - 1) / kChunkSize;
    std::vector<Welford> part(static_cast<std::size_t>(chunks));
    auto run = [&](int w, int nw) {
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        for (std::int64_t c = w; c < chunks; c += nw) {
            auto eng = chunk_engine(seed, static_cast<std::uint64_t>(c));
            normal.reset();
            std::int64_t m = std::min(kChunkSize, n_samples - c * kChunkSize);
            Welford acc;
            Vector4c g;
            for (std::int64_t i = 0; i < m; ++i) {
                for (int k = 0; k < 4; ++k) {
                    double re = normal(eng);
                    double im = normal(eng);
                    g(k) = cd(re, im);
                }
                acc.add(f(L * g));
            }
            part[static_cast<std::size_t>(c)] = acc;
        }
    };
    const int nw = std::min<std::int64_t>(resolve_workers(workers), chunks);
    if (nw <= 1) {
        run(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(run, w, nw);
        for (auto& th : pool) th.join();
    }
    Welford total;
    for (const auto& p : part) total.merge(p);
    MeanEstimate e;
    e.n = total.n;
    e.mean = total.mean;
    e.std_error = total.n > 1 ? std::sqrt(total.m2 / static_cast<double>(total.n - 1) / static_cast<double>(total.n)) : 0.0;
    return e;
}

double two_point_integrand(const Vector4c& v) {
    return std::abs(std::norm(v(0)) - std::norm(v(1))) * std::abs(std::norm(v(2)) - std::norm(v(3)));
}

CorrelationEstimate two_point_J(const Matrix4c& lambda, double det_a, std::int64_t n_samples, std::uint64_t seed,
                                int workers) {
    if (!(det_a > 0)) throw KacRiceError("det A must be positive");
    Eigen::Matrix<cd, 4, 4> sigma = lambda;
    Matrix4c L = whitening_factor<4>(sigma);
    MeanEstimate m = gaussian_mean(two_point_integrand, L, n_samples, seed, workers);
    const double norm = M_PI * M_PI * det_a;
    CorrelationEstimate e;
    e.value = m.mean / norm;
    e.std_error = m.std_error / norm;
    e.n_samples = m.n;
    e.seed = seed;
    return e;
}

CorrelationEstimate two_point_J(double t, std::int64_t n_samples, std::uint64_t seed, int workers,
                                LambdaSource source) {
    if (!(t > 0)) throw KacRiceError("t must be > 0");
    if (t < kMinT)
        throw KacRiceError("t = " + std::to_string(t) + " is below the supported minimum " + std::to_string(kMinT));
    Matrix4c lambda;
    if (source == LambdaSource::closed_form) lambda = lambda_closed<double>(t).entries;
    else lambda = lambda_of(blocks_at<double>(std::sqrt(t))).entries;
    CorrelationEstimate e = two_point_J(lambda, det_A<double>(t), n_samples, seed, workers);
    e.t = t;
    return e;
}

std::vector<CorrelationEstimate> j_curve(const std::vector<double>& t_grid, std::int64_t n_samples,
                                         std::uint64_t seed, int workers) {
    for (double t : t_grid)
        if (!(t > 0)) throw KacRiceError("t grid values must be > 0");
    std::vector<CorrelationEstimate> out;
    // common random numbers: one seed for every t, so the curve is smooth in t
    for (double t : t_grid) out.push_back(two_point_J(t, n_samples, seed, workers));
    return out;
}

Extrapolation extrapolate_to_zero(const std::vector<CorrelationEstimate>& pts) {
    if (pts.size() < 2) throw KacRiceError("extrapolation needs at least two points");
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : pts) {
        double w = p.std_error > 0 ? 1.0 / (p.std_error * p.std_error) : 1.0;
        sw += w;
        sx += w * p.t;
        sy += w * p.value;
        sxx += w * p.t * p.t;
        sxy += w * p.t * p.value;
    }
    const double det = sw * sxx - sx * sx;
    if (det == 0) throw KacRiceError("extrapolation needs distinct t values");
    Extrapolation e;
    e.slope = (sw * sxy - sx * sy) / det;
    e.intercept = (sxx * sy - sx * sxy) / det;
    // independent points: var(intercept) = sxx / det with the 1/stderr^2 weights
    e.std_error = std::sqrt(sxx / det);
    return e;
}

double abs_difference_expectation(const Matrix2c& sigma) {
    Eigen::Matrix2cd js;
    js << sigma(0, 0), sigma(0, 1), -sigma(1, 0), -sigma(1, 1);
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(js);
    double a = es.eigenvalues()(0).real(), b = es.eigenvalues()(1).real();
    double mu1 = std::max(a, b), mu2 = -std::min(a, b);
    if (!(mu1 >= 0 && mu2 >= 0) || mu1 + mu2 == 0) throw KacRiceError("covariance is not positive definite");
    return (mu1 * mu1 + mu2 * mu2) / (mu1 + mu2);
}

double one_point_density(const Matrix2c& lambda1, double a1) {
    return abs_difference_expectation(lambda1) / (M_PI * a1);
}

double one_point_density() {
    auto b = one_point_blocks<double>();
    Matrix2c l = b.Lambda1;
    return one_point_density(l, b.A1);
}

CorrelationEstimate one_point_density_mc(std::int64_t n_samples, std::uint64_t seed, int workers,
                                         const Matrix2c* lambda1) {
    auto b = one_point_blocks<double>();
    Eigen::Matrix<cd, 2, 2> sigma = lambda1 ? Eigen::Matrix<cd, 2, 2>(*lambda1) : Eigen::Matrix<cd, 2, 2>(b.Lambda1);
    Matrix4c L = Matrix4c::Zero();
    L.topLeftCorner<2, 2>() = whitening_factor<2>(sigma);
    auto f = [](const Vector4c& v) { return std::abs(std::norm(v(0)) - std::norm(v(1))); };
    MeanEstimate m = gaussian_mean(f, L, n_samples, seed, workers);
    CorrelationEstimate e;
    e.value = m.mean / (M_PI * b.A1);
    e.std_error = m.std_error / (M_PI * b.A1);
    e.n_samples = m.n;
    e.seed = seed;
    return e;
}

namespace {

QuadratureRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, double mu0) {
    const int n = static_cast<int>(diag.size());
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) j(i, i) = diag(i);
    for (int i = 0; i + 1 < n; ++i) j(i, i + 1) = j(i + 1, i) = off(i);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    QuadratureRule q;
    for (int i = 0; i < n; ++i) {
        q.nodes.push_back(es.eigenvalues()(i));
        double v0 = es.eigenvectors()(0, i);
        q.weights.push_back(mu0 * v0 * v0);
    }
    return q;
}

}  // namespace

QuadratureRule gauss_laguerre(int n) {
    Eigen::VectorXd d(n), o(std::max(n - 1, 0));
    for (int i = 0; i < n; ++i) d(i) = 2 * i + 1;
    for (int i = 0; i + 1 < n; ++i) o(i) = i + 1;
    return golub_welsch(d, o, 1.0);
}

QuadratureRule gauss_legendre(int n) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n), o(std::max(n - 1, 0));
    for (int i = 0; i + 1 < n; ++i) {
        double k = i + 1;
        o(i) = k / std::sqrt(4 * k * k - 1);
    }
    return golub_welsch(d, o, 2.0);
}

double abs_exponential_integral(double a, int n) {
    const auto lag = gauss_laguerre(n);
    const auto leg = gauss_legendre(n);
    double outer = 0;
    for (std::size_t i = 0; i < lag.nodes.size(); ++i) {
        const double x = lag.nodes[i], k = a * x;
        // y in [0, k]: (k - y) e^{-y}
        double below = 0;
        for (std::size_t m = 0; m < leg.nodes.size(); ++m) {
            double y = 0.5 * k * (leg.nodes[m] + 1);
            below += leg.weights[m] * (k - y) * std::exp(-y);
        }
        below *= 0.5 * k;
        // y = k + u, u >= 0: u e^{-k} e^{-u}
        double above = 0;
        for (std::size_t m = 0; m < lag.nodes.size(); ++m) above += lag.weights[m] * lag.nodes[m];
        above *= std::exp(-k);
        outer += lag.weights[i] * (below + above);
    }
    return outer;
}

IntegrandTerms integrand_terms(const Vector4c& w) {
    const double r34 = re_prod(w(2), w(3)), r24 = re_prod(w(1), w(3)), r23 = re_prod(w(1), w(2));
    const double n3 = std::norm(w(2)), n4 = std::norm(w(3));
    IntegrandTerms t;
    t.beta2 = 2 * r34;
    t.gamma2 = (-4 * r24 + 9 * n3 - 2 * n4) / 6;
    t.delta2 = -(6 * r23 + 8 * r34) / 12;
    t.delta3 = (6 * r23 - 16 * r34) / 12;
    t.alpha4 = -4 * r34 * r34;
    t.beta4 = t.beta2 * t.delta3 + t.gamma2 * t.gamma2 - t.delta2 * t.beta2;
    return t;
}

double beta4_expanded(const Vector4c& w) {
    const double r34 = re_prod(w(2), w(3)), r24 = re_prod(w(1), w(3)), r23 = re_prod(w(1), w(2));
    const double n3 = std::norm(w(2)), n4 = std::norm(w(3));
    return 2 * r34 * r23 - 4.0 / 3 * r34 * r34 + 4.0 / 9 * r24 * r24 - 2 * r24 * n3 + 4.0 / 9 * r24 * n4 +
           9.0 / 4 * n3 * n3 - n3 * n4 + n4 * n4 / 9;
}

double beta4_compact(const Vector4c& w) {
    const double r34 = re_prod(w(2), w(3)), r24 = re_prod(w(1), w(3)), r23 = re_prod(w(1), w(2));
    const double n3 = std::norm(w(2)), n4 = std::norm(w(3));
    const double q = 9 * n3 - 2 * n4;
    return 2 * r23 * r34 - 4.0 / 3 * r34 * r34 + r24 * (4 * r24 - 18 * n3 + 4 * n4) / 9 + q * q / 36;
}

namespace {

// c_jk(s) = sum_i coef_i s^{power_i}, coefficients in units of the radical.
struct HalfPowerTerm {
    int power;
    double num, den;
};
struct HattedEntry {
    double radical;  // sqrt(30) for j = 1, sqrt(6) otherwise
    std::array<HalfPowerTerm, 3> terms;
    int count;
    int known_below;
};

const std::array<std::array<HattedEntry, 4>, 4>& hatted_table() {
    static const double r30 = std::sqrt(30.0), r6 = std::sqrt(6.0);
    static const std::array<std::array<HattedEntry, 4>, 4> tab = {{
        {{{r30, {{{7, -1, 8640}, {9, -7, 69120}, {}}}, 2, 11},
          {r30, {{{5, -1, 720}, {7, -1, 1152}, {}}}, 2, 9},
          {r30, {{{7, 1, 8640}, {9, 1, 23040}, {}}}, 2, 11},
          {r30, {{{5, 1, 720}, {7, 1, 5760}, {}}}, 2, 9}}},
        {{{r6, {{{2, -1, 12}, {4, -5, 96}, {}}}, 2, 6},
          {r6, {{{2, 1, 12}, {4, -1, 96}, {}}}, 2, 6},
          {r6, {{{2, -1, 12}, {4, -1, 96}, {}}}, 2, 6},
          {r6, {{{2, 1, 12}, {4, 1, 32}, {}}}, 2, 6}}},
        {{{r6, {{{1, 1, 2}, {3, 1, 16}, {}}}, 2, 5},
          {r6, {{{3, 1, 12}, {5, 67, 576}, {}}}, 2, 7},
          {r6, {{{1, -1, 2}, {3, -1, 16}, {}}}, 2, 5},
          {r6, {{{3, 1, 6}, {5, 121, 576}, {}}}, 2, 7}}},
        {{{r6, {{{0, 1, 3}, {2, -7, 72}, {4, -473, 3456}}}, 3, 6},
          {r6, {{{0, 1, 3}, {2, -1, 72}, {4, -29, 3456}}}, 3, 6},
          {r6, {{{0, 1, 3}, {2, 5, 72}, {4, 799, 3456}}}, 3, 6},
          {r6, {{{0, 1, 3}, {2, 11, 72}, {4, 91, 3456}}}, 3, 6}}},
    }};
    return tab;
}

// Coefficients of c_jk as a polynomial in s, indices 0..kMaxPower.
constexpr int kMaxPower = 9;
using SPoly = std::array<double, kMaxPower + 1>;

SPoly hatted_poly(int j, int k) {
    const auto& e = hatted_table()[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
    SPoly p{};
    for (int i = 0; i < e.count; ++i) {
        const auto& h = e.terms[static_cast<std::size_t>(i)];
        p[static_cast<std::size_t>(h.power)] += e.radical * h.num / h.den;
    }
    return p;
}

// |sum_j c_{j,k1} w_j|^2 - |sum_j c_{j,k2} w_j|^2 as coefficients of s^0..s^4,
// summed as complex numbers; the imaginary parts cancel between (j,l) and (l,j).
std::array<double, 5> difference_form(const Vector4c& w, int k1, int k2, double& imag_max) {
    std::array<cd, 5> acc{};
    for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 4; ++l) {
            const SPoly aj = hatted_poly(j, k1), al = hatted_poly(l, k1);
            const SPoly bj = hatted_poly(j, k2), bl = hatted_poly(l, k2);
            const cd wjl = w(j) * std::conj(w(l));
            for (int p = 0; p <= 4; ++p) {
                double c = 0;
                for (int i = 0; i <= p; ++i)
                    c += aj[static_cast<std::size_t>(i)] * al[static_cast<std::size_t>(p - i)] -
                         bj[static_cast<std::size_t>(i)] * bl[static_cast<std::size_t>(p - i)];
                acc[static_cast<std::size_t>(p)] += c * wjl;
            }
        }
    std::array<double, 5> out{};
    for (std::size_t p = 0; p < 5; ++p) {
        out[p] = acc[p].real();
        imag_max = std::max(imag_max, std::abs(acc[p].imag()));
    }
    return out;
}

}  // namespace

double hatted_coefficient(int j, int k, double s) {
    const SPoly p = hatted_poly(j, k);
    double v = 0;
    for (int i = kMaxPower; i >= 0; --i) v = v * s + p[static_cast<std::size_t>(i)];
    return v;
}

int hatted_known_below(int j, int k) {
    return hatted_table()[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].known_below;
}

ExpansionTerms expansion_terms(const Vector4c& w) {
    ExpansionTerms e;
    const auto f1 = difference_form(w, 0, 1, e.imag_max);
    const auto f2 = difference_form(w, 2, 3, e.imag_max);
    e.alpha2 = f1[0];
    e.beta2 = f1[1];
    e.gamma2 = f1[2];
    e.delta2 = f1[3];
    e.alpha3 = f2[0];
    e.beta3 = f2[1];
    e.gamma3 = f2[2];
    e.delta3 = f2[3];
    auto prod = [&](int p) {
        double c = 0;
        for (int i = 0; i <= p; ++i) c += f1[static_cast<std::size_t>(i)] * f2[static_cast<std::size_t>(p - i)];
        return c;
    };
    e.alpha4 = prod(2);
    e.odd3 = prod(3);
    e.beta4 = prod(4);
    return e;
}

MeanEstimate gaussian_moment(const std::function<double(const Vector4c&)>& f, std::int64_t n_samples,
                             std::uint64_t seed, int workers) {
    return gaussian_mean(f, Matrix4c::Identity(), n_samples, seed, workers);
}

MeanEstimate gaussian_moment_alpha4(std::int64_t n_samples, std::uint64_t seed, int workers) {
    return gaussian_moment([](const Vector4c& w) { return integrand_terms(w).alpha4; }, n_samples, seed, workers);
}

}  // namespace critlab
