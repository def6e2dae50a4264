#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace sigaug {

/// Element of the truncated tensor algebra over R^d with levels 0..L.
///
/// Level n is a dense block of d^n coefficients in row-major multi-index
/// order (the first index varies slowest). Level 0 is stored explicitly so
/// norms and dilations treat every level uniformly. All operations on
/// TruncTensor are pure; instances are safe to share across threads.
class TruncTensor {
public:
    TruncTensor(int dim, int level);

    /// Algebra unit (1, 0, ..., 0).
    static TruncTensor unit(int dim, int level);

    int dim() const { return dim_; }
    int level() const { return level_; }

    std::span<double> lev(int n) {
        return {data_.data() + offsets_[n], static_cast<std::size_t>(sizes_[n])};
    }
    std::span<const double> lev(int n) const {
        return {data_.data() + offsets_[n], static_cast<std::size_t>(sizes_[n])};
    }
    int lev_size(int n) const { return sizes_[n]; }

    double scalar() const { return data_[0]; }
    double& scalar() { return data_[0]; }
    bool group_like() const { return data_[0] == 1.0; }

    std::span<const double> raw() const { return data_; }
    std::span<double> raw() { return data_; }

    TruncTensor& operator+=(const TruncTensor& rhs);
    TruncTensor& operator-=(const TruncTensor& rhs);
    TruncTensor& operator*=(double c);

private:
    int dim_;
    int level_;
    std::vector<int> offsets_;  // level n starts at offsets_[n]
    std::vector<int> sizes_;    // d^n
    std::vector<double> data_;
};

TruncTensor operator+(TruncTensor a, const TruncTensor& b);
TruncTensor operator-(TruncTensor a, const TruncTensor& b);
TruncTensor operator*(TruncTensor a, double c);
TruncTensor operator*(double c, TruncTensor a);

/// Truncated tensor product: level n of the result is
/// sum_{i=0..n} a^{n-i} (x) b^i; terms above the truncation level are dropped.
TruncTensor mul(const TruncTensor& a, const TruncTensor& b);
inline TruncTensor operator*(const TruncTensor& a, const TruncTensor& b) { return mul(a, b); }

/// exp(v) truncated at the given level: level n = v^{(x)n} / n!.
TruncTensor tensor_exp(const Eigen::VectorXd& v, int level);

/// Dilation: level n scaled by lambda^n. Requires a group-like input
/// (level-0 coefficient exactly 1).
TruncTensor dilate(const TruncTensor& t, double lambda);

/// Euclidean norm over all levels, level 0 included.
double tensor_norm(const TruncTensor& t);

double tensor_dot(const TruncTensor& a, const TruncTensor& b);

/// |t^n|^2 for n = 0..L.
std::vector<double> level_squared_norms(const TruncTensor& t);

/// Largest absolute coefficient difference between two tensors.
double max_abs_diff(const TruncTensor& a, const TruncTensor& b);

/// Cotangent of the left factor of c = a (x) b, given the cotangent of c.
TruncTensor mul_vjp_left(const TruncTensor& cot, const TruncTensor& b);
/// Cotangent of the right factor of c = a (x) b.
TruncTensor mul_vjp_right(const TruncTensor& a, const TruncTensor& cot);

/// Cotangent of v in tensor_exp(v, cot.level()).
Eigen::VectorXd exp_vjp(const Eigen::VectorXd& v, const TruncTensor& cot);

/// Number of coefficients in levels 1..L: sum_{n=1..L} d^n.
long long feature_count(int dim, int level);

/// Levels from..L concatenated into one vector, each level row-major.
Eigen::VectorXd flatten_levels(const TruncTensor& t, int from_level = 1);

/// Inverse of flatten_levels(., 1): builds a tensor with level-0 set to 0.
TruncTensor unflatten_levels(const Eigen::VectorXd& v, int dim, int level);

}  // namespace sigaug
