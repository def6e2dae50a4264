#pragma once

#include "sigaug/rng.hpp"
#include "sigaug/series.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sigaug {

/// Labelled collection of series sharing one dimension. Labels run over
/// 0..class_count-1 and every class must be nonempty.
struct Dataset {
    std::string name;
    int class_count = 0;
    std::vector<TimeSeries> series;
    std::vector<int> labels;

    std::size_t size() const { return series.size(); }
    void validate() const;
};

// Synthetic path generators. Each call is deterministic in the seed; path i
// is drawn from the derived stream mix_seed(seed, i), so paths are
// independent of generation order.

/// Standard Brownian motion started at 0 on a uniform grid over [0, horizon].
std::vector<TimeSeries> gen_bm(int count, int n_points, double horizon, std::uint64_t seed);

/// Fractional Brownian motion via Cholesky factorization of the exact
/// covariance (s^{2H} + t^{2H} - |t-s|^{2H}) / 2. Throws if the covariance
/// fails to factorize for the requested grid.
std::vector<TimeSeries> gen_fbm(double hurst, int count, int n_points, double horizon,
                                std::uint64_t seed);

/// Geometric Brownian motion, exact log-normal transition.
std::vector<TimeSeries> gen_gbm(double mu, double sigma, double x0, int count, int n_points,
                                double horizon, std::uint64_t seed);

/// Ornstein-Uhlenbeck, exact Gaussian transition; alpha must be positive.
std::vector<TimeSeries> gen_ou(double alpha, double gamma, double beta, double x0, int count,
                               int n_points, double horizon, std::uint64_t seed);

/// dX = (sqrt(1+X^2) + X/2) dt + scale * sqrt(1+X^2) dB via Euler-Maruyama
/// on an internal grid refined by the given factor (>= 1), subsampled to
/// n_points.
std::vector<TimeSeries> gen_nonlinear_sde(double x0, double diffusion_scale, int count,
                                          int n_points, double horizon, int refine,
                                          std::uint64_t seed);

/// White-noise perturbations of 6 sin^3(4 pi t) cos^2(4 pi t) on [0, 1].
std::vector<TimeSeries> gen_noisy_smooth(double noise_std, int count, int n_points,
                                         std::uint64_t seed);

/// Two ensembles of 2-d linear paths t -> (t m_1, t m_2) on [0, 1] whose
/// endpoint laws share all integer moments: lognormal components vs the
/// sine-perturbed density p(m) (1 + sin(2 pi log m_1)) (1 + sin(2 pi log m_2)),
/// the latter drawn per component by rejection against the envelope 2 p.
struct MomentMatchedPair {
    std::vector<TimeSeries> lognormal;
    std::vector<TimeSeries> perturbed;
    long long proposals = 0;  // rejection-sampler draws (perturbed ensemble)
    long long accepted = 0;
};
MomentMatchedPair gen_moment_matched_pair(int count, std::uint64_t seed);

/// Sizes and process parameters of the synthetic tasks; every field has a
/// desk-scale default and is overridable.
struct TaskConfig {
    int n_points = 50;
    double horizon = 1.0;
    int train_per_class = 200;
    int test_per_class = 200;

    // FBM task: one class per Hurst exponent
    double fbm_hurst_a = 0.3;
    double fbm_hurst_b = 0.7;

    // OU task: one class per (alpha, gamma, beta)
    double ou_alpha_a = 1.0, ou_gamma_a = 0.0, ou_beta_a = 0.5;
    double ou_alpha_b = 4.0, ou_gamma_b = 0.0, ou_beta_b = 0.5;
    double ou_x0 = 0.0;

    // Bidim task: fixed parameters of the six component processes
    double bidim_fbm_hurst = 0.25;
    double bidim_gbm_mu = 0.5, bidim_gbm_sigma = 0.5, bidim_gbm_x0 = 1.0;
    double bidim_ou_alpha = 2.0, bidim_ou_gamma = 0.0, bidim_ou_beta = 0.5;
    double bidim_smooth_noise = 0.5;
    int sde_refine = 10;
};

struct TaskSplit {
    Dataset train;
    Dataset test;
};

TaskSplit make_fbm_task(const TaskConfig& cfg, std::uint64_t seed);
TaskSplit make_ou_task(const TaskConfig& cfg, std::uint64_t seed);
/// Six classes of bidimensional series; the two channels of each series are
/// independent trajectories of the same process.
TaskSplit make_bidim_task(const TaskConfig& cfg, std::uint64_t seed);

struct TaskBundle {
    TaskSplit fbm;
    TaskSplit ou;
    TaskSplit bidim;
};
TaskBundle assemble_tasks(std::uint64_t seed, const TaskConfig& cfg = {});

/// Tab- or comma-separated rows: integer label first, then N*d values
/// (time-major). Optional leading "# key value" comment lines may carry
/// name / dim / classes metadata. Times are the implicit uniform grid on
/// [0, 1]. Distinct labels are remapped to 0..D-1 in sorted order.
Dataset load_tsv(const std::string& path);
void save_tsv(const Dataset& ds, const std::string& path);

}  // namespace sigaug
