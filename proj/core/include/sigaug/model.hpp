#pragma once

#include "sigaug/augmentation.hpp"
#include "sigaug/datasets.hpp"
#include "sigaug/expected_signature.hpp"
#include "sigaug/normalization.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sigaug {

/// Hyperparameters of the end-to-end classifier.
struct Hyper {
    int L = 3;  // signature truncation level
    int K = 8;  // augmented sample count
    GridStrategy strategy = GridStrategy::midpoints;
    int n_before = 0;
    int n_after = 0;
    double margin = 0.0;  // <= 0: one average inter-sample gap
    double C = 4.0;       // normalization shape
    double a = 1.0;       // normalization tail exponent
    int alpha = -1;       // band width of V; < 0 disables the mask
    bool rescale_time = true;
    std::uint64_t seed = 42;

    NormConfig norm() const { return NormConfig{C, a, 1e-12, 200}; }
};

/// Trainable state: augmenter linear maps plus the linear readout. A model
/// is built for series of one fixed length and dimension.
struct ModelParams {
    int dim = 1;       // d
    int n_points = 0;  // N
    int classes = 2;   // D
    Hyper hyper;
    AugmenterParams augmenter;
    Eigen::MatrixXd readout_W;  // D x P
    Eigen::VectorXd readout_b;  // D

    /// M, the number of new time instants implied by the strategy.
    int new_count() const;
    /// P = sum_{n=1..L} (d+1)^n; level 0 is excluded from the features.
    long long feature_length() const;
};

/// Gradient accumulator mirroring the trainable fields of ModelParams.
struct GradBundle {
    Eigen::MatrixXd W_m, W_V, readout_W;
    Eigen::VectorXd b_m, b_V, readout_b;

    static GradBundle zeros_like(const ModelParams& p);
    void add_scaled(const GradBundle& g, double scale);
    double squared_norm() const;
};

/// Mean starts at the linear interpolation of the reference grid; packed-V
/// weights start at small random values; readout starts at zero.
ModelParams init_model(int dim, const std::vector<double>& ref_times, int classes,
                       const Hyper& hyper, Rng& rng);

TimeGrid model_grid(const ModelParams& p, const std::vector<double>& times);

/// Class probabilities for one series; deterministic given the stream seed.
Eigen::VectorXd forward(const ModelParams& p, const TimeSeries& x, const Rng& rng);

/// Cross-entropy loss and the exact pathwise gradient for the eps draws of
/// this stream (the draws depend only on the stream seed, so re-evaluating
/// with the same seed freezes them).
std::pair<double, GradBundle> loss_and_grad(const ModelParams& p, const TimeSeries& x, int label,
                                            const Rng& rng);

void sgd_step(ModelParams& p, const GradBundle& g, double lr);

struct TrainConfig {
    double lr = 1e-2;
    int batch = 16;
    int epochs = 30;
    double val_fraction = 0.0;   // > 0 carves a stratified validation split
    bool freeze_samples = false; // reuse the epoch-0 eps draws every epoch
    std::uint64_t seed = 42;
};

struct EpochStats {
    int epoch = 0;
    double loss = 0.0;
    double train_wacc = 0.0;
    double val_wacc = 0.0;  // NaN when no validation split
};

struct TrainResult {
    ModelParams params;
    std::vector<EpochStats> history;
};

/// Minibatch SGD with per-epoch shuffling; every stochastic choice is
/// derived from cfg.seed. Aborts with a diagnostic on NaN loss.
TrainResult train_sgd(const ModelParams& init, const Dataset& data, const TrainConfig& cfg);

/// Mean over classes of per-class recall. Throws when some class in
/// 0..class_count-1 has no representative in truth.
double weighted_accuracy(const std::vector<int>& preds, const std::vector<int>& truth,
                         int class_count);

/// Argmax predictions over a dataset; run-specific streams are derived from
/// (seed, series index).
std::vector<int> predict(const ModelParams& p, const Dataset& data, std::uint64_t seed);

struct CvEntry {
    Hyper hyper;
    std::vector<double> fold_scores;
    double mean_score = 0.0;
};

struct CvResult {
    Hyper best;
    std::vector<CvEntry> table;
};

/// Stratified k-fold cross-validation over a hyperparameter grid; selects
/// the entry with the best mean validation weighted accuracy. Fold
/// assignment and training are deterministic in cfg.seed and do not depend
/// on the position of an entry in the grid.
CvResult grid_search_cv(const std::vector<Hyper>& space, const Dataset& data, int folds,
                        const TrainConfig& cfg);

struct VarianceReport {
    std::vector<double> norms;  // spectral norm of the D x D covariance, per series
    std::vector<double> bin_edges;
    std::vector<int> bin_counts;
};

/// Feeds every test series `runs` times, forms the D x D covariance of the
/// output probability vectors, and reports its 2-norm per series plus a
/// histogram summary.
VarianceReport output_variance_analysis(const ModelParams& p, const Dataset& test, int runs = 50,
                                        std::uint64_t seed = 0);

}  // namespace sigaug
