#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sigaug {

/// Sampled path: strictly increasing time stamps with one d-dimensional
/// value row per stamp.
struct TimeSeries {
    std::vector<double> times;  // N stamps
    Eigen::MatrixXd values;     // N x d

    int length() const { return static_cast<int>(times.size()); }
    int dim() const { return static_cast<int>(values.cols()); }

    /// Throws std::invalid_argument on shape mismatch or non-increasing times.
    void validate() const;
};

/// Uniform grid of n points covering [0, horizon].
std::vector<double> uniform_times(int n, double horizon = 1.0);

}  // namespace sigaug
