#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace critlab {

class EnsembleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ModelKind { bargmann_fock, su2 };

struct RandomSectionModel {
    ModelKind kind = ModelKind::bargmann_fock;
    int degree = 60;  // truncation K for Bargmann-Fock, N for SU(2)

    static RandomSectionModel bargmann_fock(int K);
    static RandomSectionModel su2(int N);
    std::string name() const;
};

using Coefficients = Eigen::VectorXcd;

// iid standard complex Gaussians c_0..c_degree, E|c|^2 = 1.
Coefficients sample_section(const RandomSectionModel& model, std::uint64_t seed);
// Coefficients of z^k in the section: c_k / sqrt(k!) or sqrt(binom(N, k)) c_k.
Coefficients monomial_coefficients(const RandomSectionModel& model, const Coefficients& c);

// The critical equation F and its Wirtinger derivatives at z.
struct CriticalJet {
    std::complex<double> F, Fz, Fzbar;
    double scale = 1;  // typical size of F at z, used to normalise residuals
};
CriticalJet critical_jet(const RandomSectionModel& model, const Coefficients& c, std::complex<double> z);
std::complex<double> critical_equation(const RandomSectionModel& model, const Coefficients& c,
                                       std::complex<double> z);

struct CriticalPoint {
    std::complex<double> z;      // scaled window coordinate
    std::complex<double> z_raw;  // coordinate of the section
    double residual = 0;         // |F| / scale after refinement
};

// Scaled window: Bargmann-Fock uses z itself; SU(2) uses
// zeta = sqrt(N) (z - z0) / (1 + conj(z0) z), an isometry of the sphere moving z0 to 0.
struct WindowSpec {
    double radius = 4;
    std::complex<double> center = 0;
};

struct FinderOptions {
    double grid_density = 1;  // start spacing 0.35 / grid_density in scaled units
    double tol = 1e-10;
    int max_iter = 60;
};

struct PointCatalog {
    RandomSectionModel model;
    std::uint64_t seed = 0;
    WindowSpec window;
    std::vector<CriticalPoint> points;
    bool degenerate = false;  // a non-isolated zero set was met
    int n_degenerate = 0;
};

// Largest Bargmann-Fock window that keeps truncation error negligible.
double max_window(const RandomSectionModel& model);

PointCatalog find_critical_points(const RandomSectionModel& model, const Coefficients& c, const WindowSpec& window,
                                  const FinderOptions& opt = {}, std::uint64_t seed = 0);

// Sample and solve n_sections sections with seeds derived from (seed, index).
std::vector<PointCatalog> simulate_catalogs(const RandomSectionModel& model, int n_sections, std::uint64_t seed,
                                            const WindowSpec& window, const FinderOptions& opt = {}, int workers = 1);
std::uint64_t section_seed(std::uint64_t seed, std::uint64_t index);

struct DensityEstimate {
    double density = 0;
    double std_error = 0;
    std::int64_t n_points = 0;
};
DensityEstimate estimate_density(const std::vector<PointCatalog>& catalogs);

enum class EdgeCorrection { border, border_per_bin };

struct PairCorrHistogram {
    std::vector<double> edges;
    std::vector<std::int64_t> counts;
    std::vector<double> k2_hat, std_error;
    std::vector<double> normalization;  // n_sections * centre area * annulus area
    int n_sections = 0;
};

// Ordered pairs (z1, z2) with |z1| <= R - r and |z1 - z2| in a bin, divided by
// n_sections * pi (R - r)^2 * pi (r_hi^2 - r_lo^2).  border: r is the largest
// edge; border_per_bin: r is the bin's upper edge.
PairCorrHistogram estimate_pair_correlation(const std::vector<PointCatalog>& catalogs, const std::vector<double>& edges,
                                            EdgeCorrection ec = EdgeCorrection::border);
// Same estimator on bare point sets in a disk of the given radius.
PairCorrHistogram estimate_pair_correlation(const std::vector<std::vector<std::complex<double>>>& point_sets,
                                            double radius, const std::vector<double>& edges,
                                            EdgeCorrection ec = EdgeCorrection::border);

// "a:h:b" -> a, a+h, ..., b
std::vector<double> parse_bins(const std::string& spec);

struct ScalingCurve {
    int N = 0;
    PairCorrHistogram hist;
    DensityEstimate density;
    std::vector<double> ratio;  // k2_hat / density^2 per bin
    double sup_distance = 0;    // against the reference ratio curve
};
std::vector<ScalingCurve> su2_scaling_check(const std::vector<int>& N_list, int n_sections, std::uint64_t seed,
                                            const std::vector<double>& edges, double window_radius,
                                            const std::vector<double>& reference_ratio,
                                            std::complex<double> center = 0, const FinderOptions& opt = {},
                                            int workers = 1);

// One JSON object per line: {"seed":..,"points":[[re,im,residual],..]}.
void write_catalog_jsonl(std::ostream& os, const std::vector<PointCatalog>& catalogs);

}  // namespace critlab
