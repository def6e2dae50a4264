#include "sigaug/augmentation.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sigaug {

namespace {

void require_increasing(const std::vector<double>& times) {
    if (times.size() < 2)
        throw std::invalid_argument("grid construction needs at least two time stamps");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (!(times[i + 1] > times[i]))
            throw std::invalid_argument("time stamps must be strictly increasing");
}

}  // namespace

TimeGrid new_times_midpoints(const std::vector<double>& times) {
    require_increasing(times);
    TimeGrid g;
    g.original = times;
    g.strategy = GridStrategy::midpoints;
    g.new_times.reserve(times.size() - 1);
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        g.new_times.push_back(0.5 * (times[i] + times[i + 1]));
    return g;
}

TimeGrid new_times_extended(const std::vector<double>& times, int n_before, int n_after,
                            double margin) {
    require_increasing(times);
    if (n_before < 0 || n_after < 0)
        throw std::invalid_argument("extended grid counts must be >= 0");
    if ((n_before + n_after > 0) && !(margin > 0.0))
        throw std::invalid_argument("extended grid needs a positive margin");
    TimeGrid g;
    g.original = times;
    g.strategy = GridStrategy::extended;
    for (int k = 0; k < n_before; ++k)
        g.new_times.push_back(times.front() - margin + k * margin / n_before);
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        g.new_times.push_back(0.5 * (times[i] + times[i + 1]));
    for (int k = 1; k <= n_after; ++k)
        g.new_times.push_back(times.back() + k * margin / n_after);
    return g;
}

TimeGrid make_grid(const std::vector<double>& times, GridStrategy strategy, int n_before,
                   int n_after, double margin) {
    if (strategy == GridStrategy::midpoints) return new_times_midpoints(times);
    if (margin <= 0.0)
        margin = (times.back() - times.front()) / (static_cast<double>(times.size()) - 1.0);
    return new_times_extended(times, n_before, n_after, margin);
}

Eigen::VectorXd augmenter_features(const TimeSeries& x, const TimeGrid& grid) {
    const int n = x.length();
    const int d = x.dim();
    const int m = grid.new_count();
    Eigen::VectorXd f(n * d + n + m);
    long long pos = 0;
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < d; ++c) f[pos++] = x.values(i, c);
    for (int i = 0; i < n; ++i) f[pos++] = x.times[i];
    for (int i = 0; i < m; ++i) f[pos++] = grid.new_times[i];
    return f;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> augmenter_forward(const AugmenterParams& p,
                                                              const TimeSeries& x,
                                                              const TimeGrid& grid) {
    const Eigen::VectorXd f = augmenter_features(x, grid);
    if (p.W_m.cols() != f.size() || p.W_V.cols() != f.size())
        throw std::invalid_argument("augmenter_forward: feature length does not match weights");
    if (p.W_m.rows() != p.b_m.size() || p.W_V.rows() != p.b_V.size())
        throw std::invalid_argument("augmenter_forward: bias length does not match weights");
    const int m_len = static_cast<int>(p.W_m.rows());
    if (m_len != grid.new_count() * x.dim())
        throw std::invalid_argument("augmenter_forward: mean length must be M*d");
    if (p.W_V.rows() != static_cast<Eigen::Index>(m_len) * (m_len + 1) / 2)
        throw std::invalid_argument("augmenter_forward: packed V length must be M'(M'+1)/2");
    Eigen::VectorXd mean = p.W_m * f + p.b_m;
    Eigen::VectorXd packed = p.W_V * f + p.b_V;
    return {std::move(mean), unpack_lower_triangular(packed, m_len)};
}

Eigen::MatrixXd unpack_lower_triangular(const Eigen::VectorXd& packed, int n) {
    if (packed.size() != static_cast<Eigen::Index>(n) * (n + 1) / 2)
        throw std::invalid_argument("unpack_lower_triangular: packed length must be n(n+1)/2");
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
    long long k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) v(i, j) = packed[k++];
    return v;
}

Eigen::VectorXd pack_lower_triangular(const Eigen::MatrixXd& V) {
    if (V.rows() != V.cols())
        throw std::invalid_argument("pack_lower_triangular: matrix must be square");
    const int n = static_cast<int>(V.rows());
    Eigen::VectorXd packed(static_cast<Eigen::Index>(n) * (n + 1) / 2);
    long long k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) packed[k++] = V(i, j);
    return packed;
}

std::vector<Eigen::VectorXd> sample_series(const Eigen::VectorXd& m, const Eigen::MatrixXd& V,
                                           int K, const Rng& rng) {
    return sample_series_with_eps(m, V, K, rng).first;
}

std::pair<std::vector<Eigen::VectorXd>, std::vector<Eigen::VectorXd>> sample_series_with_eps(
    const Eigen::VectorXd& m, const Eigen::MatrixXd& V, int K, const Rng& rng) {
    if (K < 1) throw std::invalid_argument("sample_series needs K >= 1");
    if (V.rows() != m.size() || V.cols() != m.size())
        throw std::invalid_argument("sample_series: V must be square and match m");
    std::vector<Eigen::VectorXd> ys, eps;
    ys.reserve(K);
    eps.reserve(K);
    for (int k = 0; k < K; ++k) {
        Rng stream = rng.fork(static_cast<std::uint64_t>(k));
        Eigen::VectorXd e(m.size());
        for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = stream.normal();
        ys.push_back(V * e + m);
        eps.push_back(std::move(e));
    }
    return {std::move(ys), std::move(eps)};
}

Eigen::MatrixXd band_mask(const Eigen::MatrixXd& V, int alpha) {
    if (alpha < 0) throw std::invalid_argument("band_mask needs alpha >= 0");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(V.rows(), V.cols());
    for (Eigen::Index i = 0; i < V.rows(); ++i)
        for (Eigen::Index j = 0; j <= std::min(i, V.cols() - 1); ++j)
            if (i - j < alpha) out(i, j) = V(i, j);
    return out;
}

std::vector<int> merged_new_positions(const std::vector<double>& original,
                                      const std::vector<double>& new_times) {
    std::vector<int> pos(new_times.size());
    std::size_t i = 0, j = 0;
    int row = 0;
    while (i < original.size() || j < new_times.size()) {
        if (i < original.size() && j < new_times.size() && original[i] == new_times[j])
            throw std::invalid_argument("grid collision: duplicate time stamp in merged grid");
        if (j >= new_times.size() || (i < original.size() && original[i] < new_times[j])) {
            ++i;
        } else {
            pos[j] = row;
            ++j;
        }
        ++row;
    }
    return pos;
}

TimeSeries interleave(const TimeSeries& x, const Eigen::VectorXd& sample, const TimeGrid& grid) {
    x.validate();
    const int d = x.dim();
    const int m = grid.new_count();
    if (sample.size() != static_cast<Eigen::Index>(m) * d)
        throw std::invalid_argument("interleave: sample length must be M*d");
    const int total = x.length() + m;
    TimeSeries out;
    out.times.reserve(total);
    out.values.resize(total, d);
    std::size_t i = 0, j = 0;
    int row = 0;
    while (i < x.times.size() || j < grid.new_times.size()) {
        if (i < x.times.size() && j < grid.new_times.size() &&
            x.times[i] == grid.new_times[j])
            throw std::invalid_argument("grid collision: duplicate time stamp in merged grid");
        if (j >= grid.new_times.size() ||
            (i < x.times.size() && x.times[i] < grid.new_times[j])) {
            out.times.push_back(x.times[i]);
            out.values.row(row) = x.values.row(i);
            ++i;
        } else {
            out.times.push_back(grid.new_times[j]);
            for (int c = 0; c < d; ++c) out.values(row, c) = sample[j * d + c];
            ++j;
        }
        ++row;
    }
    return out;
}

namespace {

double sq_exp_kernel(double s, double t, double sigma, double l) {
    const double diff = t - s;
    return sigma * std::exp(-diff * diff / (2.0 * l * l));
}

}  // namespace

GpPosterior gp_posterior(const TimeSeries& x, const TimeGrid& grid, double sigma, double l,
                         double noise) {
    x.validate();
    if (x.dim() != 1) throw std::invalid_argument("gp_posterior expects a univariate series");
    const int n = x.length();
    const int m = grid.new_count();
    const double prior_mean = x.values.col(0).mean();

    Eigen::MatrixXd ktt(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            ktt(i, j) = sq_exp_kernel(x.times[i], x.times[j], sigma, l);
    ktt.diagonal().array() += noise;

    Eigen::MatrixXd kst(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            kst(i, j) = sq_exp_kernel(grid.new_times[i], x.times[j], sigma, l);

    Eigen::MatrixXd kss(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            kss(i, j) = sq_exp_kernel(grid.new_times[i], grid.new_times[j], sigma, l);

    Eigen::VectorXd centered = x.values.col(0).array() - prior_mean;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(ktt);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("gp_posterior: kernel matrix factorization failed");
    Eigen::VectorXd alpha = ldlt.solve(centered);
    if (!alpha.allFinite() ||
        (ktt * alpha - centered).norm() > 1e-6 * std::max(1.0, centered.norm()))
        throw std::runtime_error("gp_posterior: kernel matrix is singular or ill-conditioned");

    GpPosterior post;
    post.mean = kst * alpha;
    post.mean.array() += prior_mean;
    post.cov = kss - kst * ldlt.solve(kst.transpose());
    post.cov = 0.5 * (post.cov + post.cov.transpose()).eval();
    return post;
}

GpHyper fit_gp_hyper(const TimeSeries& x) {
    x.validate();
    if (x.dim() != 1) throw std::invalid_argument("fit_gp_hyper expects a univariate series");
    const int n = x.length();
    const Eigen::VectorXd y = x.values.col(0);
    const double mean = y.mean();
    Eigen::VectorXd r = y.array() - mean;
    double var = r.squaredNorm() / std::max(1, n - 1);
    var = std::max(var, 1e-8);
    const double span = x.times.back() - x.times.front();

    const double sigma_grid[] = {0.25 * var, var, 4.0 * var};
    const double len_grid[] = {0.05 * span, 0.1 * span, 0.2 * span, 0.4 * span};
    const double noise_grid[] = {1e-6, 1e-4, 1e-2};

    GpHyper best;
    double best_lml = -std::numeric_limits<double>::infinity();
    for (double sigma : sigma_grid) {
        for (double len : len_grid) {
            for (double nf : noise_grid) {
                const double noise = nf * sigma;
                Eigen::MatrixXd k(n, n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        k(i, j) = sq_exp_kernel(x.times[i], x.times[j], sigma, len);
                k.diagonal().array() += noise;
                Eigen::LDLT<Eigen::MatrixXd> ldlt(k);
                if (ldlt.info() != Eigen::Success) continue;
                Eigen::VectorXd d = ldlt.vectorD();
                if ((d.array() <= 0.0).any()) continue;
                Eigen::VectorXd alpha = ldlt.solve(r);
                if (!alpha.allFinite()) continue;
                const double lml = -0.5 * r.dot(alpha) - 0.5 * d.array().log().sum() -
                                   0.5 * n * std::log(2.0 * std::numbers::pi);
                if (lml > best_lml) {
                    best_lml = lml;
                    best = {sigma, len, noise};
                }
            }
        }
    }
    if (!std::isfinite(best_lml))
        throw std::runtime_error("fit_gp_hyper: no stable hyperparameter candidate");
    return best;
}

}  // namespace sigaug
