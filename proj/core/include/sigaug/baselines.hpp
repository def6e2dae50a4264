#pragma once

#include "sigaug/augmentation.hpp"
#include "sigaug/datasets.hpp"
#include "sigaug/model.hpp"
#include "sigaug/normalization.hpp"

#include <vector>

namespace sigaug {

/// Linear layer + softmax over fixed feature vectors.
struct LinearSoftmax {
    Eigen::MatrixXd W;  // D x P
    Eigen::VectorXd b;  // D
};

Eigen::VectorXd linear_softmax_probs(const LinearSoftmax& head, const Eigen::VectorXd& features);

struct LinearSoftmaxResult {
    LinearSoftmax head;
    std::vector<EpochStats> history;
};

/// Minibatch SGD cross-entropy training of the linear head on cached
/// features (one row per sample). Deterministic in cfg.seed.
LinearSoftmaxResult train_linear_softmax(const Eigen::MatrixXd& features,
                                         const std::vector<int>& labels, int class_count,
                                         const TrainConfig& cfg);

/// Classifier without augmentation: time-augment, sign, normalize, then the
/// linear head. Fully deterministic.
struct NoAugModel {
    int classes = 2;
    int L = 3;
    NormConfig norm;
    bool rescale_time = true;
    LinearSoftmax head;
};

Eigen::VectorXd noaug_features(const TimeSeries& x, int L, const NormConfig& cfg,
                               bool rescale_time = true);
Eigen::VectorXd noaug_classify(const TimeSeries& x, const NoAugModel& m);

struct NoAugResult {
    NoAugModel model;
    std::vector<EpochStats> history;
};

NoAugResult train_noaug(const Dataset& data, int L, const NormConfig& norm, bool rescale_time,
                        const TrainConfig& cfg);

/// Trigonometric interpolation onto a factor-times-finer uniform grid via a
/// zero-padded discrete spectrum. A non-uniform input grid is first
/// resampled to a uniform one by linear interpolation.
TimeSeries fft_augment(const TimeSeries& x, int factor);

/// Natural cubic spline through all original points, evaluated over the
/// merged grid. Needs N >= 3.
TimeSeries cubic_spline_augment(const TimeSeries& x, const TimeGrid& grid);

/// Posterior-mean augmentation: new-time values are the Gaussian-process
/// posterior mean (per channel), original values are kept at original times.
/// The first overload fits (sigma, l, noise) by the marginal-likelihood grid.
TimeSeries gp_mean_augment(const TimeSeries& x, const TimeGrid& grid);
TimeSeries gp_mean_augment(const TimeSeries& x, const TimeGrid& grid, const GpHyper& hyper);

}  // namespace sigaug
