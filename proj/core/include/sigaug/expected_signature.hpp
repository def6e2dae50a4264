#pragma once

#include "sigaug/normalization.hpp"
#include "sigaug/series.hpp"
#include "sigaug/tensor.hpp"

#include <vector>

namespace sigaug {

struct ExpSigEstimate {
    TruncTensor mean_tensor;      // component-wise average of normalized signatures
    int sample_count = 0;         // K
    std::vector<double> lambdas;  // per-sample normalization scale
};

/// Component-wise sum with a fixed pairwise tree shape (determined only by
/// the item count), then scaled by 1/K. The fixed shape keeps the result
/// stable under permutations of the inputs to near machine precision.
TruncTensor pairwise_tree_mean(const std::vector<TruncTensor>& items);

/// Each series is time-augmented, signed to the given level, normalized,
/// and the normalized signatures are averaged component-wise.
ExpSigEstimate expected_signature(const std::vector<TimeSeries>& batch, int level,
                                  const NormConfig& cfg, bool rescale_time = true);

/// Smallest K with exp(-2 sigma^2 K / (2R)^2) <= delta, i.e.
/// ceil(2 R^2 ln(1/delta) / sigma^2). Returns 0 when the bound is vacuous
/// (delta >= 1).
long long hoeffding_sample_size(double R, double sigma, double delta);

}  // namespace sigaug
