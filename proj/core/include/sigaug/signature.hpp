#pragma once

#include "sigaug/series.hpp"
#include "sigaug/tensor.hpp"

namespace sigaug {

/// Signature of a time series up to the given level, computed as the
/// left-to-right product of increment exponentials. The evaluation order is
/// fixed, so repeated calls are bit-identical. Requires N >= 2 and level >= 1.
TruncTensor signature(const TimeSeries& x, int level);

/// Appends the time stamps as an extra channel. With rescale_to_unit the
/// appended channel is affinely mapped onto [0, 1] so increment magnitudes
/// stay commensurate with the values.
TimeSeries time_augment(const TimeSeries& x, bool rescale_to_unit = true);

/// Product of two signatures of adjacent path pieces; both inputs must be
/// group-like.
TruncTensor chen_concat(const TruncTensor& left, const TruncTensor& right);

/// Gradient of <signature(x, level), cotangent> with respect to every series
/// value, as an N x d matrix. Implemented as a prefix/suffix product sweep
/// over the increment exponentials; no tape is stored.
Eigen::MatrixXd signature_vjp(const TimeSeries& x, int level, const TruncTensor& cotangent);

}  // namespace sigaug
