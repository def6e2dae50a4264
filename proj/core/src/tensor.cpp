#include "sigaug/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace sigaug {

namespace {

void require_same_shape(const TruncTensor& a, const TruncTensor& b) {
    if (a.dim() != b.dim() || a.level() != b.level())
        throw std::invalid_argument("tensor shape mismatch (dim or level differ)");
}

}  // namespace

TruncTensor::TruncTensor(int dim, int level) : dim_(dim), level_(level) {
    if (dim < 1) throw std::invalid_argument("tensor dimension must be >= 1");
    if (level < 0) throw std::invalid_argument("tensor level must be >= 0");
    offsets_.resize(level + 1);
    sizes_.resize(level + 1);
    int off = 0, sz = 1;
    for (int n = 0; n <= level; ++n) {
        offsets_[n] = off;
        sizes_[n] = sz;
        off += sz;
        sz *= dim;
    }
    data_.assign(off, 0.0);
}

TruncTensor TruncTensor::unit(int dim, int level) {
    TruncTensor t(dim, level);
    t.scalar() = 1.0;
    return t;
}

TruncTensor& TruncTensor::operator+=(const TruncTensor& rhs) {
    require_same_shape(*this, rhs);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

TruncTensor& TruncTensor::operator-=(const TruncTensor& rhs) {
    require_same_shape(*this, rhs);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

TruncTensor& TruncTensor::operator*=(double c) {
    for (double& x : data_) x *= c;
    return *this;
}

TruncTensor operator+(TruncTensor a, const TruncTensor& b) { return a += b; }
TruncTensor operator-(TruncTensor a, const TruncTensor& b) { return a -= b; }
TruncTensor operator*(TruncTensor a, double c) { return a *= c; }
TruncTensor operator*(double c, TruncTensor a) { return a *= c; }

TruncTensor mul(const TruncTensor& a, const TruncTensor& b) {
    require_same_shape(a, b);
    const int L = a.level();
    TruncTensor out(a.dim(), L);
    for (int n = 0; n <= L; ++n) {
        auto on = out.lev(n);
        for (int i = 0; i <= n; ++i) {
            auto al = a.lev(n - i);
            auto bl = b.lev(i);
            const int bs = static_cast<int>(bl.size());
            for (int p = 0; p < static_cast<int>(al.size()); ++p) {
                const double av = al[p];
                if (av == 0.0) continue;
                double* dst = on.data() + static_cast<std::size_t>(p) * bs;
                for (int q = 0; q < bs; ++q) dst[q] += av * bl[q];
            }
        }
    }
    return out;
}

TruncTensor tensor_exp(const Eigen::VectorXd& v, int level) {
    const int d = static_cast<int>(v.size());
    TruncTensor e(d, level);
    e.scalar() = 1.0;
    for (int n = 1; n <= level; ++n) {
        auto prev = e.lev(n - 1);
        auto cur = e.lev(n);
        const double inv = 1.0 / n;
        for (int p = 0; p < static_cast<int>(prev.size()); ++p) {
            const double pv = prev[p] * inv;
            for (int j = 0; j < d; ++j) cur[p * d + j] = pv * v[j];
        }
    }
    return e;
}

TruncTensor dilate(const TruncTensor& t, double lambda) {
    if (!t.group_like())
        throw std::invalid_argument("dilation requires a group-like tensor (level-0 == 1)");
    TruncTensor out = t;
    double f = 1.0;
    for (int n = 1; n <= t.level(); ++n) {
        f *= lambda;
        for (double& x : out.lev(n)) x *= f;
    }
    return out;
}

double tensor_norm(const TruncTensor& t) {
    double s = 0.0;
    for (double x : t.raw()) s += x * x;
    return std::sqrt(s);
}

double tensor_dot(const TruncTensor& a, const TruncTensor& b) {
    require_same_shape(a, b);
    double s = 0.0;
    auto ra = a.raw();
    auto rb = b.raw();
    for (std::size_t i = 0; i < ra.size(); ++i) s += ra[i] * rb[i];
    return s;
}

std::vector<double> level_squared_norms(const TruncTensor& t) {
    std::vector<double> out(t.level() + 1, 0.0);
    for (int n = 0; n <= t.level(); ++n) {
        double s = 0.0;
        for (double x : t.lev(n)) s += x * x;
        out[n] = s;
    }
    return out;
}

double max_abs_diff(const TruncTensor& a, const TruncTensor& b) {
    require_same_shape(a, b);
    double m = 0.0;
    auto ra = a.raw();
    auto rb = b.raw();
    for (std::size_t i = 0; i < ra.size(); ++i) m = std::max(m, std::abs(ra[i] - rb[i]));
    return m;
}

TruncTensor mul_vjp_left(const TruncTensor& cot, const TruncTensor& b) {
    require_same_shape(cot, b);
    const int L = cot.level();
    TruncTensor out(cot.dim(), L);
    for (int m = 0; m <= L; ++m) {
        auto om = out.lev(m);
        for (int q = 0; q + m <= L; ++q) {
            auto c = cot.lev(m + q);
            auto bq = b.lev(q);
            const int bs = static_cast<int>(bq.size());
            for (int p = 0; p < static_cast<int>(om.size()); ++p) {
                const double* src = c.data() + static_cast<std::size_t>(p) * bs;
                double s = 0.0;
                for (int j = 0; j < bs; ++j) s += src[j] * bq[j];
                om[p] += s;
            }
        }
    }
    return out;
}

TruncTensor mul_vjp_right(const TruncTensor& a, const TruncTensor& cot) {
    require_same_shape(a, cot);
    const int L = cot.level();
    TruncTensor out(cot.dim(), L);
    for (int q = 0; q <= L; ++q) {
        auto oq = out.lev(q);
        const int bs = static_cast<int>(oq.size());
        for (int m = 0; m + q <= L; ++m) {
            auto c = cot.lev(m + q);
            auto am = a.lev(m);
            for (int p = 0; p < static_cast<int>(am.size()); ++p) {
                const double av = am[p];
                if (av == 0.0) continue;
                const double* src = c.data() + static_cast<std::size_t>(p) * bs;
                for (int j = 0; j < bs; ++j) oq[j] += av * src[j];
            }
        }
    }
    return out;
}

Eigen::VectorXd exp_vjp(const Eigen::VectorXd& v, const TruncTensor& cot) {
    const int d = cot.dim();
    const int L = cot.level();
    if (static_cast<int>(v.size()) != d)
        throw std::invalid_argument("exp_vjp: direction length does not match tensor dimension");
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
    std::vector<double> cur, tmp, scratch;
    double fact = 1.0;
    for (int n = 1; n <= L; ++n) {
        fact *= n;
        auto h = cot.lev(n);
        cur.assign(h.begin(), h.end());
        int cur_len = static_cast<int>(cur.size());  // d^{n-p+1} while p advances
        for (int p = 1; p <= n; ++p) {
            tmp.assign(cur.begin(), cur.begin() + cur_len);
            int len = cur_len;
            for (int q = 0; q < n - p; ++q) {
                // contract the trailing index with v
                const int out_len = len / d;
                for (int r = 0; r < out_len; ++r) {
                    double s = 0.0;
                    for (int j = 0; j < d; ++j) s += tmp[r * d + j] * v[j];
                    tmp[r] = s;
                }
                len = out_len;
            }
            for (int j = 0; j < d; ++j) g[j] += tmp[j] / fact;
            if (p < n) {
                // contract the leading index with v
                const int out_len = cur_len / d;
                scratch.assign(out_len, 0.0);
                for (int j = 0; j < d; ++j) {
                    const double vj = v[j];
                    const double* src = cur.data() + static_cast<std::size_t>(j) * out_len;
                    for (int r = 0; r < out_len; ++r) scratch[r] += vj * src[r];
                }
                cur.swap(scratch);
                cur_len = out_len;
            }
        }
    }
    return g;
}

long long feature_count(int dim, int level) {
    long long total = 0, sz = 1;
    for (int n = 1; n <= level; ++n) {
        sz *= dim;
        total += sz;
    }
    return total;
}

Eigen::VectorXd flatten_levels(const TruncTensor& t, int from_level) {
    long long len = 0;
    for (int n = from_level; n <= t.level(); ++n) len += t.lev_size(n);
    Eigen::VectorXd out(len);
    long long pos = 0;
    for (int n = from_level; n <= t.level(); ++n) {
        for (double x : t.lev(n)) out[pos++] = x;
    }
    return out;
}

TruncTensor unflatten_levels(const Eigen::VectorXd& v, int dim, int level) {
    if (static_cast<long long>(v.size()) != feature_count(dim, level))
        throw std::invalid_argument("unflatten_levels: length does not match (dim, level)");
    TruncTensor t(dim, level);
    long long pos = 0;
    for (int n = 1; n <= level; ++n) {
        for (double& x : t.lev(n)) x = v[pos++];
    }
    return t;
}

}  // namespace sigaug
