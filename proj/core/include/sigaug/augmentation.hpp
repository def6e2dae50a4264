#pragma once

#include "sigaug/rng.hpp"
#include "sigaug/series.hpp"

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace sigaug {

enum class GridStrategy { midpoints, extended };

/// Original sampling times plus the new time instants where values will be
/// generated. new_times is kept sorted ascending; the merged grid must be
/// strictly increasing.
struct TimeGrid {
    std::vector<double> original;
    std::vector<double> new_times;
    GridStrategy strategy = GridStrategy::midpoints;

    int new_count() const { return static_cast<int>(new_times.size()); }
};

/// Midpoints of the N-1 sub-intervals; merged grid has length 2N-1.
TimeGrid new_times_midpoints(const std::vector<double>& times);

/// Midpoints plus n_before equally spaced points in [t_1 - margin, t_1) and
/// n_after in (t_N, t_N + margin]. With both counts zero this reduces to the
/// midpoints strategy; margin must be positive when points are requested.
TimeGrid new_times_extended(const std::vector<double>& times, int n_before, int n_after,
                            double margin);

/// Grid construction from strategy parameters; margin <= 0 selects one
/// average inter-sample gap.
TimeGrid make_grid(const std::vector<double>& times, GridStrategy strategy, int n_before = 0,
                   int n_after = 0, double margin = 0.0);

/// Linear maps producing the mean vector m (length M' = M d) and the packed
/// lower triangle of V (length M'' = M'(M'+1)/2) from the flattened feature
/// vector [values; times; new times] of length F = N d + N + M.
struct AugmenterParams {
    Eigen::MatrixXd W_m;  // M' x F
    Eigen::VectorXd b_m;  // M'
    Eigen::MatrixXd W_V;  // M'' x F
    Eigen::VectorXd b_V;  // M''
};

/// Flattened input [values row-major; times; new times].
Eigen::VectorXd augmenter_features(const TimeSeries& x, const TimeGrid& grid);

/// m = W_m f + b_m and V = unpack(W_V f + b_V), V lower-triangular M' x M'.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> augmenter_forward(const AugmenterParams& p,
                                                              const TimeSeries& x,
                                                              const TimeGrid& grid);

/// Packed lower triangle (row-major: row i holds i+1 entries) <-> matrix.
Eigen::MatrixXd unpack_lower_triangular(const Eigen::VectorXd& packed, int n);
Eigen::VectorXd pack_lower_triangular(const Eigen::MatrixXd& V);

/// K draws y_k = V eps_k + m with eps_k standard normal, each drawn from the
/// child stream rng.fork(k); deterministic for any evaluation order.
std::vector<Eigen::VectorXd> sample_series(const Eigen::VectorXd& m, const Eigen::MatrixXd& V,
                                           int K, const Rng& rng);
/// Same, also returning the eps draws (needed for the pathwise gradient).
std::pair<std::vector<Eigen::VectorXd>, std::vector<Eigen::VectorXd>> sample_series_with_eps(
    const Eigen::VectorXd& m, const Eigen::MatrixXd& V, int K, const Rng& rng);

/// Keeps V(i,j) only when 0 <= i-j < alpha, so (V V^T)(l,m) = 0 whenever
/// |l-m| >= alpha. alpha >= rows leaves a lower-triangular V unchanged.
Eigen::MatrixXd band_mask(const Eigen::MatrixXd& V, int alpha);

/// Merged-grid row index of each new time (two-pointer merge by time stamp).
/// Throws on duplicate stamps.
std::vector<int> merged_new_positions(const std::vector<double>& original,
                                      const std::vector<double>& new_times);

/// One series over the merged grid: original values at original times,
/// sampled values (packed time-major, M x d) at new times.
TimeSeries interleave(const TimeSeries& x, const Eigen::VectorXd& sample, const TimeGrid& grid);

struct GpPosterior {
    Eigen::VectorXd mean;  // M
    Eigen::MatrixXd cov;   // M x M
};

/// Classic Gaussian-process posterior at the new times under a constant
/// prior mean (the sample mean of x) and the squared-exponential kernel
/// sigma * exp(-(t-s)^2 / (2 l^2)); noise is added to the kernel diagonal.
/// Univariate series only.
GpPosterior gp_posterior(const TimeSeries& x, const TimeGrid& grid, double sigma, double l,
                         double noise);

struct GpHyper {
    double sigma = 1.0;
    double length = 1.0;
    double noise = 1e-4;
};

/// Deterministic log-marginal-likelihood grid search for (sigma, l, noise).
GpHyper fit_gp_hyper(const TimeSeries& x);

}  // namespace sigaug
