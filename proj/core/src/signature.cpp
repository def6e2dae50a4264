#include "sigaug/signature.hpp"

#include <stdexcept>

namespace sigaug {

TruncTensor signature(const TimeSeries& x, int level) {
    x.validate();
    if (x.length() < 2) throw std::invalid_argument("signature needs at least two samples");
    if (level < 1) throw std::invalid_argument("signature level must be >= 1");
    TruncTensor s = TruncTensor::unit(x.dim(), level);
    for (int i = 0; i + 1 < x.length(); ++i) {
        Eigen::VectorXd inc = x.values.row(i + 1) - x.values.row(i);
        s = mul(s, tensor_exp(inc, level));
    }
    return s;
}

TimeSeries time_augment(const TimeSeries& x, bool rescale_to_unit) {
    x.validate();
    const int n = x.length();
    const int d = x.dim();
    TimeSeries out;
    out.times = x.times;
    out.values.resize(n, d + 1);
    out.values.leftCols(d) = x.values;
    if (rescale_to_unit && n > 1) {
        const double t0 = x.times.front();
        const double span = x.times.back() - t0;
        for (int i = 0; i < n; ++i) out.values(i, d) = (x.times[i] - t0) / span;
    } else {
        for (int i = 0; i < n; ++i) out.values(i, d) = x.times[i];
    }
    return out;
}

TruncTensor chen_concat(const TruncTensor& left, const TruncTensor& right) {
    if (!left.group_like() || !right.group_like())
        throw std::invalid_argument("chen_concat requires group-like inputs (level-0 == 1)");
    return mul(left, right);
}

Eigen::MatrixXd signature_vjp(const TimeSeries& x, int level, const TruncTensor& cotangent) {
    x.validate();
    if (x.length() < 2) throw std::invalid_argument("signature needs at least two samples");
    if (cotangent.dim() != x.dim() || cotangent.level() != level)
        throw std::invalid_argument("signature_vjp: cotangent shape does not match");
    const int n = x.length();
    const int d = x.dim();
    const int inc_count = n - 1;

    std::vector<TruncTensor> exps;
    exps.reserve(inc_count);
    for (int i = 0; i < inc_count; ++i) {
        Eigen::VectorXd inc = x.values.row(i + 1) - x.values.row(i);
        exps.push_back(tensor_exp(inc, level));
    }

    // prefix[i] = product of exps[0..i-1]
    std::vector<TruncTensor> prefix;
    prefix.reserve(inc_count);
    prefix.push_back(TruncTensor::unit(d, level));
    for (int i = 1; i < inc_count; ++i) prefix.push_back(mul(prefix[i - 1], exps[i - 1]));

    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, d);
    TruncTensor suffix = TruncTensor::unit(d, level);
    for (int i = inc_count - 1; i >= 0; --i) {
        // S = prefix[i] (x) exps[i] (x) suffix
        TruncTensor cot_tail = mul_vjp_right(prefix[i], cotangent);
        TruncTensor cot_exp = mul_vjp_left(cot_tail, suffix);
        Eigen::VectorXd inc = x.values.row(i + 1) - x.values.row(i);
        Eigen::VectorXd g = exp_vjp(inc, cot_exp);
        grad.row(i + 1) += g.transpose();
        grad.row(i) -= g.transpose();
        if (i > 0) suffix = mul(exps[i], suffix);
    }
    return grad;
}

}  // namespace sigaug
