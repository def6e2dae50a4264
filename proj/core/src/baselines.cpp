#include "sigaug/baselines.hpp"

#include "sigaug/signature.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace sigaug {

Eigen::VectorXd linear_softmax_probs(const LinearSoftmax& head, const Eigen::VectorXd& features) {
    Eigen::VectorXd logits = head.W * features + head.b;
    Eigen::VectorXd z = (logits.array() - logits.maxCoeff()).exp();
    return z / z.sum();
}

LinearSoftmaxResult train_linear_softmax(const Eigen::MatrixXd& features,
                                         const std::vector<int>& labels, int class_count,
                                         const TrainConfig& cfg) {
    const Eigen::Index n = features.rows();
    if (n != static_cast<Eigen::Index>(labels.size()))
        throw std::invalid_argument("train_linear_softmax: feature/label count mismatch");
    if (cfg.batch < 1) throw std::invalid_argument("train_linear_softmax: batch must be >= 1");

    LinearSoftmaxResult result;
    result.head.W = Eigen::MatrixXd::Zero(class_count, features.cols());
    result.head.b = Eigen::VectorXd::Zero(class_count);

    std::vector<std::size_t> base(n);
    for (Eigen::Index i = 0; i < n; ++i) base[i] = i;
    std::vector<int> truth = labels;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<std::size_t> order = base;
        Rng shuffle_rng(mix_seed(cfg.seed, 0x5348u, epoch));
        shuffle(order, shuffle_rng);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch);
            Eigen::MatrixXd gw = Eigen::MatrixXd::Zero(class_count, features.cols());
            Eigen::VectorXd gb = Eigen::VectorXd::Zero(class_count);
            for (std::size_t pos = start; pos < stop; ++pos) {
                const std::size_t i = order[pos];
                const Eigen::VectorXd feat = features.row(i).transpose();
                Eigen::VectorXd probs = linear_softmax_probs(result.head, feat);
                loss_sum += -std::log(std::max(probs[labels[i]], 1e-300));
                probs[labels[i]] -= 1.0;
                gw += probs * feat.transpose();
                gb += probs;
            }
            const double scale = cfg.lr / static_cast<double>(stop - start);
            result.head.W -= scale * gw;
            result.head.b -= scale * gb;
        }
        std::vector<int> preds(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::VectorXd probs = linear_softmax_probs(result.head, features.row(i).transpose());
            Eigen::Index best;
            probs.maxCoeff(&best);
            preds[i] = static_cast<int>(best);
        }
        EpochStats stats;
        stats.epoch = epoch;
        stats.loss = loss_sum / static_cast<double>(n);
        stats.train_wacc = weighted_accuracy(preds, truth, class_count);
        stats.val_wacc = std::numeric_limits<double>::quiet_NaN();
        result.history.push_back(stats);
    }
    return result;
}

Eigen::VectorXd noaug_features(const TimeSeries& x, int L, const NormConfig& cfg,
                               bool rescale_time) {
    const TimeSeries augmented = time_augment(x, rescale_time);
    auto [nrm, lam] = normalize(signature(augmented, L), cfg);
    (void)lam;
    return flatten_levels(nrm, 1);
}

Eigen::VectorXd noaug_classify(const TimeSeries& x, const NoAugModel& m) {
    return linear_softmax_probs(m.head, noaug_features(x, m.L, m.norm, m.rescale_time));
}

NoAugResult train_noaug(const Dataset& data, int L, const NormConfig& norm, bool rescale_time,
                        const TrainConfig& cfg) {
    data.validate();
    const long long p = feature_count(data.series.front().dim() + 1, L);
    Eigen::MatrixXd features(data.size(), p);
    for (std::size_t i = 0; i < data.size(); ++i)
        features.row(i) = noaug_features(data.series[i], L, norm, rescale_time).transpose();
    LinearSoftmaxResult trained = train_linear_softmax(features, data.labels, data.class_count,
                                                       cfg);
    NoAugResult result;
    result.model = NoAugModel{data.class_count, L, norm, rescale_time, std::move(trained.head)};
    result.history = std::move(trained.history);
    return result;
}

namespace {

bool is_uniform(const std::vector<double>& times) {
    const double span = times.back() - times.front();
    const double dt = span / (static_cast<double>(times.size()) - 1.0);
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (std::abs(times[i + 1] - times[i] - dt) > 1e-9 * std::max(1.0, std::abs(span)))
            return false;
    return true;
}

double lerp_at(const TimeSeries& x, int channel, double t) {
    const auto& ts = x.times;
    if (t <= ts.front()) return x.values(0, channel);
    if (t >= ts.back()) return x.values(x.length() - 1, channel);
    std::size_t seg = 0;
    while (seg + 2 < ts.size() && ts[seg + 1] <= t) ++seg;
    const double w = (t - ts[seg]) / (ts[seg + 1] - ts[seg]);
    return (1.0 - w) * x.values(seg, channel) + w * x.values(seg + 1, channel);
}

}  // namespace

TimeSeries fft_augment(const TimeSeries& x, int factor) {
    x.validate();
    if (factor < 1) throw std::invalid_argument("fft_augment needs factor >= 1");
    if (x.length() < 2) throw std::invalid_argument("fft_augment needs at least two samples");

    const int n = x.length();
    const int d = x.dim();
    const double t0 = x.times.front();
    const double dt = (x.times.back() - t0) / (n - 1);

    // trigonometric interpolation needs uniform sampling
    TimeSeries input = x;
    if (!is_uniform(x.times)) {
        input.times = uniform_times(n, x.times.back() - t0);
        for (auto& t : input.times) t += t0;
        input.values.resize(n, d);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < d; ++c) input.values(i, c) = lerp_at(x, c, input.times[i]);
    }

    const int out_len = (n - 1) * factor + 1;
    TimeSeries out;
    out.times.resize(out_len);
    for (int j = 0; j < out_len; ++j) out.times[j] = t0 + j * dt / factor;
    out.values.resize(out_len, d);

    using cd = std::complex<double>;
    const double two_pi = 2.0 * std::numbers::pi;
    const int padded = n * factor;
    std::vector<cd> spectrum(n);
    std::vector<cd> padded_spectrum(padded);
    for (int c = 0; c < d; ++c) {
        for (int k = 0; k < n; ++k) {
            cd acc(0.0, 0.0);
            for (int i = 0; i < n; ++i)
                acc += input.values(i, c) * std::polar(1.0, -two_pi * k * i / n);
            spectrum[k] = acc;
        }
        std::fill(padded_spectrum.begin(), padded_spectrum.end(), cd(0.0, 0.0));
        const int half = n / 2;
        for (int k = 0; k <= (n - 1) / 2; ++k) padded_spectrum[k] = spectrum[k];
        for (int k = half + 1; k < n; ++k) padded_spectrum[padded - n + k] = spectrum[k];
        if (n % 2 == 0) {
            // split the Nyquist bin to keep the interpolant real
            padded_spectrum[half] = 0.5 * spectrum[half];
            padded_spectrum[padded - half] = 0.5 * spectrum[half];
        }
        for (int j = 0; j < out_len; ++j) {
            cd acc(0.0, 0.0);
            for (int k = 0; k < padded; ++k) {
                if (padded_spectrum[k] == cd(0.0, 0.0)) continue;
                acc += padded_spectrum[k] * std::polar(1.0, two_pi * k * j / padded);
            }
            out.values(j, c) = acc.real() / n;
        }
    }
    return out;
}

TimeSeries cubic_spline_augment(const TimeSeries& x, const TimeGrid& grid) {
    x.validate();
    const int n = x.length();
    if (n < 3) throw std::invalid_argument("cubic_spline_augment needs at least three samples");
    const int d = x.dim();

    // natural spline: second derivatives z, z_0 = z_{n-1} = 0
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, d);
    std::vector<double> h(n - 1);
    for (int i = 0; i + 1 < n; ++i) h[i] = x.times[i + 1] - x.times[i];
    {
        const int m = n - 2;
        std::vector<double> diag(m), sub(m), sup(m);
        Eigen::MatrixXd rhs(m, d);
        for (int i = 1; i <= m; ++i) {
            diag[i - 1] = 2.0 * (h[i - 1] + h[i]);
            sub[i - 1] = h[i - 1];
            sup[i - 1] = h[i];
            for (int c = 0; c < d; ++c)
                rhs(i - 1, c) = 6.0 * ((x.values(i + 1, c) - x.values(i, c)) / h[i] -
                                       (x.values(i, c) - x.values(i - 1, c)) / h[i - 1]);
        }
        // Thomas algorithm
        for (int i = 1; i < m; ++i) {
            const double w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs.row(i) -= w * rhs.row(i - 1);
        }
        for (int c = 0; c < d; ++c) {
            z(m, c) = rhs(m - 1, c) / diag[m - 1];
            for (int i = m - 1; i >= 1; --i)
                z(i, c) = (rhs(i - 1, c) - sup[i - 1] * z(i + 1, c)) / diag[i - 1];
        }
    }

    auto eval = [&](double t, int c) -> double {
        int seg = 0;
        while (seg + 2 < n && x.times[seg + 1] <= t) ++seg;
        const double hi = h[seg];
        const double u = x.times[seg + 1] - t;
        const double v = t - x.times[seg];
        return z(seg, c) * u * u * u / (6.0 * hi) + z(seg + 1, c) * v * v * v / (6.0 * hi) +
               (x.values(seg, c) / hi - z(seg, c) * hi / 6.0) * u +
               (x.values(seg + 1, c) / hi - z(seg + 1, c) * hi / 6.0) * v;
    };

    Eigen::VectorXd sample(static_cast<Eigen::Index>(grid.new_count()) * d);
    for (int i = 0; i < grid.new_count(); ++i)
        for (int c = 0; c < d; ++c) sample[i * d + c] = eval(grid.new_times[i], c);
    return interleave(x, sample, grid);
}

TimeSeries gp_mean_augment(const TimeSeries& x, const TimeGrid& grid) {
    x.validate();
    TimeSeries first_channel;
    first_channel.times = x.times;
    first_channel.values = x.values.col(0);
    GpHyper hyper = fit_gp_hyper(first_channel);
    return gp_mean_augment(x, grid, hyper);
}

TimeSeries gp_mean_augment(const TimeSeries& x, const TimeGrid& grid, const GpHyper& hyper) {
    x.validate();
    const int d = x.dim();
    Eigen::VectorXd sample(static_cast<Eigen::Index>(grid.new_count()) * d);
    for (int c = 0; c < d; ++c) {
        TimeSeries channel;
        channel.times = x.times;
        channel.values = x.values.col(c);
        const GpPosterior post =
            gp_posterior(channel, grid, hyper.sigma, hyper.length, hyper.noise);
        for (int i = 0; i < grid.new_count(); ++i) sample[i * d + c] = post.mean[i];
    }
    return interleave(x, sample, grid);
}

}  // namespace sigaug
