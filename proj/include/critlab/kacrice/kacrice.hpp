#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace critlab {

class KacRiceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Vector4c = Eigen::Matrix<std::complex<double>, 4, 1>;
using Matrix4c = Eigen::Matrix<std::complex<double>, 4, 4, Eigen::RowMajor>;
using Matrix2c = Eigen::Matrix<std::complex<double>, 2, 2, Eigen::RowMajor>;

// Smallest t accepted by the two-point estimator.  Below it Lambda spans more
// than 13 decades and the whitening is no longer meaningful in double.
inline constexpr double kMinT = 1e-3;
inline constexpr double kPivotTolerance = 1e-13;  // relative to trace

struct MeanEstimate {
    double mean = 0;
    double std_error = 0;
    std::int64_t n = 0;
};

struct CorrelationEstimate {
    double t = 0;  // 0 marks a one-point estimate
    double value = 0;
    double std_error = 0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
};

// Lower-triangular L with L L* = sigma.  Pivots below tol*trace are set to
// zero (their column is dropped); a pivot below -tol*trace throws.
template <int N>
Eigen::Matrix<std::complex<double>, N, N> whitening_factor(const Eigen::Matrix<std::complex<double>, N, N>& sigma,
                                                           double tol = kPivotTolerance);

// E[f(L g)] for g a standard complex Gaussian in C^N (E|g_j|^2 = 1).
// Samples are drawn in fixed-size chunks with a stream per (seed, chunk) and
// merged in chunk order, so the result does not depend on the worker count.
inline constexpr std::int64_t kChunkSize = 1 << 16;
MeanEstimate gaussian_mean(const std::function<double(const Vector4c&)>& f, const Matrix4c& L,
                           std::int64_t n_samples, std::uint64_t seed, int workers = 1);

// ||v1|^2 - |v2|^2| * ||v3|^2 - |v4|^2|
double two_point_integrand(const Vector4c& v);

enum class LambdaSource { closed_form, blocks };

// J(t) = E[f(L g)] / (pi^2 det A(t)), L L* = Lambda(t).
CorrelationEstimate two_point_J(double t, std::int64_t n_samples, std::uint64_t seed, int workers = 1,
                                LambdaSource source = LambdaSource::closed_form);
// Same estimator for caller-supplied covariance data.
CorrelationEstimate two_point_J(const Matrix4c& lambda, double det_a, std::int64_t n_samples, std::uint64_t seed,
                                int workers = 1);

std::vector<CorrelationEstimate> j_curve(const std::vector<double>& t_grid, std::int64_t n_samples,
                                         std::uint64_t seed, int workers = 1);

struct Extrapolation {
    double intercept = 0;
    double std_error = 0;
    double slope = 0;
};
// Weighted least-squares line through (t, J); weights 1/stderr^2.
Extrapolation extrapolate_to_zero(const std::vector<CorrelationEstimate>& pts);

// E[||xi1|^2 - |xi2|^2|] for xi ~ CN(0, sigma): with mu1, -mu2 the eigenvalues
// of diag(1,-1) sigma, it is (mu1^2 + mu2^2) / (mu1 + mu2).
double abs_difference_expectation(const Matrix2c& sigma);

// K1 = E[||xi1|^2 - |xi2|^2|] / (pi A1) from the coincident-point blocks.
double one_point_density();
double one_point_density(const Matrix2c& lambda1, double a1 = 1.0);
CorrelationEstimate one_point_density_mc(std::int64_t n_samples, std::uint64_t seed, int workers = 1,
                                         const Matrix2c* lambda1 = nullptr);

// Gauss-Laguerre / Gauss-Legendre rules by Golub-Welsch.
struct QuadratureRule {
    std::vector<double> nodes, weights;
};
QuadratureRule gauss_laguerre(int n);
QuadratureRule gauss_legendre(int n);  // on [-1, 1]

// int_0^inf int_0^inf |a x - y| e^{-x-y} dy dx by quadrature, splitting the
// inner integral at the kink y = a x.
double abs_exponential_integral(double a, int n = 64);

// Terms of the small-t expansion of the integrand, as displayed.
struct IntegrandTerms {
    double beta2 = 0, gamma2 = 0, delta2 = 0, delta3 = 0, alpha4 = 0, beta4 = 0;
};
IntegrandTerms integrand_terms(const Vector4c& w);
// The fully expanded and the compact alternative forms of beta4.
double beta4_expanded(const Vector4c& w);
double beta4_compact(const Vector4c& w);

// Coefficients of the same expansion recomputed from the hatted coefficient
// tables: first factor alpha2 + beta2 s + gamma2 s^2 + delta2 s^3, second
// alpha3 + ..., and the product alpha4 s^2 + odd3 s^3 + beta4 s^4 (s = sqrt t).
struct ExpansionTerms {
    double alpha2 = 0, beta2 = 0, gamma2 = 0, delta2 = 0;
    double alpha3 = 0, beta3 = 0, gamma3 = 0, delta3 = 0;
    double alpha4 = 0, odd3 = 0, beta4 = 0;
    double imag_max = 0;  // largest |Im| met while forming the quadratic forms
};
ExpansionTerms expansion_terms(const Vector4c& w);

// Hatted coefficient c_jk(s) = u_jk(t) t^{5/2} / sqrt(lambda_j(t)) as a
// polynomial in s = sqrt t; exact for powers below known_below(j, k).
double hatted_coefficient(int j, int k, double s);
int hatted_known_below(int j, int k);

MeanEstimate gaussian_moment_alpha4(std::int64_t n_samples, std::uint64_t seed, int workers = 1);
MeanEstimate gaussian_moment(const std::function<double(const Vector4c&)>& f, std::int64_t n_samples,
                             std::uint64_t seed, int workers = 1);

}  // namespace critlab
