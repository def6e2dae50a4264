#include "sigaug/model.hpp"

#include "sigaug/signature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sigaug {

int ModelParams::new_count() const {
    int m = n_points - 1;
    if (hyper.strategy == GridStrategy::extended) m += hyper.n_before + hyper.n_after;
    return m;
}

long long ModelParams::feature_length() const { return feature_count(dim + 1, hyper.L); }

GradBundle GradBundle::zeros_like(const ModelParams& p) {
    GradBundle g;
    g.W_m = Eigen::MatrixXd::Zero(p.augmenter.W_m.rows(), p.augmenter.W_m.cols());
    g.b_m = Eigen::VectorXd::Zero(p.augmenter.b_m.size());
    g.W_V = Eigen::MatrixXd::Zero(p.augmenter.W_V.rows(), p.augmenter.W_V.cols());
    g.b_V = Eigen::VectorXd::Zero(p.augmenter.b_V.size());
    g.readout_W = Eigen::MatrixXd::Zero(p.readout_W.rows(), p.readout_W.cols());
    g.readout_b = Eigen::VectorXd::Zero(p.readout_b.size());
    return g;
}

void GradBundle::add_scaled(const GradBundle& g, double scale) {
    W_m += scale * g.W_m;
    b_m += scale * g.b_m;
    W_V += scale * g.W_V;
    b_V += scale * g.b_V;
    readout_W += scale * g.readout_W;
    readout_b += scale * g.readout_b;
}

double GradBundle::squared_norm() const {
    return W_m.squaredNorm() + b_m.squaredNorm() + W_V.squaredNorm() + b_V.squaredNorm() +
           readout_W.squaredNorm() + readout_b.squaredNorm();
}

TimeGrid model_grid(const ModelParams& p, const std::vector<double>& times) {
    return make_grid(times, p.hyper.strategy, p.hyper.n_before, p.hyper.n_after, p.hyper.margin);
}

ModelParams init_model(int dim, const std::vector<double>& ref_times, int classes,
                       const Hyper& hyper, Rng& rng) {
    if (classes < 2) throw std::invalid_argument("init_model needs at least two classes");
    hyper.norm().validate();
    ModelParams p;
    p.dim = dim;
    p.n_points = static_cast<int>(ref_times.size());
    p.classes = classes;
    p.hyper = hyper;

    const TimeGrid grid = model_grid(p, ref_times);
    const int n = p.n_points;
    const int m = grid.new_count();
    const int m1 = m * dim;
    const long long m2 = static_cast<long long>(m1) * (m1 + 1) / 2;
    const int f_len = n * dim + n + m;

    // m starts at the linear interpolation of the reference grid: each new
    // time pulls the two bracketing original values (clamped outside).
    p.augmenter.W_m = Eigen::MatrixXd::Zero(m1, f_len);
    p.augmenter.b_m = Eigen::VectorXd::Zero(m1);
    for (int i = 0; i < m; ++i) {
        const double s = grid.new_times[i];
        int seg = 0;
        while (seg + 2 < n && ref_times[seg + 1] <= s) ++seg;
        double w_right = (s - ref_times[seg]) / (ref_times[seg + 1] - ref_times[seg]);
        w_right = std::clamp(w_right, 0.0, 1.0);
        for (int c = 0; c < dim; ++c) {
            p.augmenter.W_m(i * dim + c, seg * dim + c) = 1.0 - w_right;
            p.augmenter.W_m(i * dim + c, (seg + 1) * dim + c) = w_right;
        }
    }

    const double v_scale = 1e-2 / std::sqrt(static_cast<double>(f_len));
    p.augmenter.W_V = Eigen::MatrixXd(m2, f_len);
    for (long long i = 0; i < m2; ++i)
        for (int j = 0; j < f_len; ++j) p.augmenter.W_V(i, j) = v_scale * rng.normal();
    p.augmenter.b_V = Eigen::VectorXd::Zero(m2);

    p.readout_W = Eigen::MatrixXd::Zero(classes, p.feature_length());
    p.readout_b = Eigen::VectorXd::Zero(classes);
    return p;
}

namespace {

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
    Eigen::VectorXd z = (logits.array() - logits.maxCoeff()).exp();
    return z / z.sum();
}

struct ForwardTrace {
    TimeGrid grid;
    std::vector<int> new_positions;
    Eigen::VectorXd f;
    Eigen::VectorXd mean;
    Eigen::MatrixXd V;  // after the band mask
    std::vector<Eigen::VectorXd> eps;
    std::vector<TimeSeries> augmented;   // interleaved + time channel, per sample
    std::vector<TruncTensor> sigs;
    std::vector<TruncTensor> normalized;
    std::vector<double> lambdas;
    Eigen::VectorXd features;
    Eigen::VectorXd probs;
};

ForwardTrace run_forward(const ModelParams& p, const TimeSeries& x, const Rng& rng) {
    x.validate();
    if (x.dim() != p.dim || x.length() != p.n_points)
        throw std::invalid_argument("forward: series shape does not match the model");
    ForwardTrace tr;
    tr.grid = model_grid(p, x.times);
    tr.new_positions = merged_new_positions(x.times, tr.grid.new_times);
    tr.f = augmenter_features(x, tr.grid);
    auto [mean, v_raw] = augmenter_forward(p.augmenter, x, tr.grid);
    tr.mean = std::move(mean);
    tr.V = p.hyper.alpha >= 0 ? band_mask(v_raw, p.hyper.alpha) : std::move(v_raw);

    auto [ys, eps] = sample_series_with_eps(tr.mean, tr.V, p.hyper.K, rng);
    tr.eps = std::move(eps);

    const NormConfig norm_cfg = p.hyper.norm();
    tr.augmented.reserve(ys.size());
    tr.sigs.reserve(ys.size());
    tr.normalized.reserve(ys.size());
    for (const Eigen::VectorXd& y : ys) {
        TimeSeries merged = interleave(x, y, tr.grid);
        TimeSeries aug = time_augment(merged, p.hyper.rescale_time);
        TruncTensor sig = signature(aug, p.hyper.L);
        auto [nrm, lam] = normalize(sig, norm_cfg);
        tr.augmented.push_back(std::move(aug));
        tr.sigs.push_back(std::move(sig));
        tr.normalized.push_back(std::move(nrm));
        tr.lambdas.push_back(lam);
    }

    tr.features = flatten_levels(pairwise_tree_mean(tr.normalized), 1);
    tr.probs = softmax(p.readout_W * tr.features + p.readout_b);
    return tr;
}

}  // namespace

Eigen::VectorXd forward(const ModelParams& p, const TimeSeries& x, const Rng& rng) {
    return run_forward(p, x, rng).probs;
}

std::pair<double, GradBundle> loss_and_grad(const ModelParams& p, const TimeSeries& x, int label,
                                            const Rng& rng) {
    if (label < 0 || label >= p.classes) throw std::invalid_argument("loss_and_grad: bad label");
    const ForwardTrace tr = run_forward(p, x, rng);
    const double loss = -std::log(std::max(tr.probs[label], 1e-300));

    GradBundle g = GradBundle::zeros_like(p);
    Eigen::VectorXd dlogits = tr.probs;
    dlogits[label] -= 1.0;
    g.readout_W = dlogits * tr.features.transpose();
    g.readout_b = dlogits;

    const Eigen::VectorXd dfeat = p.readout_W.transpose() * dlogits;
    const TruncTensor dphi = unflatten_levels(dfeat, p.dim + 1, p.hyper.L);

    const NormConfig norm_cfg = p.hyper.norm();
    const int k_count = p.hyper.K;
    const int d = p.dim;
    const double inv_k = 1.0 / static_cast<double>(k_count);
    Eigen::VectorXd dmean = Eigen::VectorXd::Zero(tr.mean.size());
    Eigen::MatrixXd dv = Eigen::MatrixXd::Zero(tr.V.rows(), tr.V.cols());

    for (int k = 0; k < k_count; ++k) {
        const TruncTensor& sig = tr.sigs[k];
        const double lam = tr.lambdas[k];

        // cotangent through the dilation: levels carry lambda^n directly,
        // plus the lambda-path A * grad(lambda)
        double a_scalar = 0.0;
        {
            double lpow = 1.0;  // lambda^{n-1}
            for (int n = 1; n <= p.hyper.L; ++n) {
                auto gl = dphi.lev(n);
                auto sl = sig.lev(n);
                double dot = 0.0;
                for (std::size_t i = 0; i < gl.size(); ++i) dot += gl[i] * sl[i];
                a_scalar += n * lpow * dot * inv_k;
                lpow *= lam;
            }
        }
        const TruncTensor dlam = lambda_gradient(sig, norm_cfg, lam);

        TruncTensor dsig(sig.dim(), sig.level());
        double lpow = 1.0;
        for (int n = 1; n <= p.hyper.L; ++n) {
            lpow *= lam;
            auto dst = dsig.lev(n);
            auto gl = dphi.lev(n);
            auto dl = dlam.lev(n);
            for (std::size_t i = 0; i < dst.size(); ++i)
                dst[i] = lpow * gl[i] * inv_k + a_scalar * dl[i];
        }

        const Eigen::MatrixXd dz = signature_vjp(tr.augmented[k], p.hyper.L, dsig);
        // only value channels flow back, and only rows at new times
        Eigen::VectorXd dy(tr.mean.size());
        for (std::size_t i = 0; i < tr.new_positions.size(); ++i)
            for (int c = 0; c < d; ++c) dy[i * d + c] = dz(tr.new_positions[i], c);

        dmean += dy;
        dv += dy * tr.eps[k].transpose();
    }

    // restrict to the packed parameterization (lower triangle, band mask)
    if (p.hyper.alpha >= 0) dv = band_mask(dv, p.hyper.alpha);
    Eigen::VectorXd dpacked = pack_lower_triangular(dv);

    g.b_m = dmean;
    g.W_m = dmean * tr.f.transpose();
    g.b_V = dpacked;
    g.W_V = dpacked * tr.f.transpose();
    return {loss, std::move(g)};
}

void sgd_step(ModelParams& p, const GradBundle& g, double lr) {
    p.augmenter.W_m -= lr * g.W_m;
    p.augmenter.b_m -= lr * g.b_m;
    p.augmenter.W_V -= lr * g.W_V;
    p.augmenter.b_V -= lr * g.b_V;
    p.readout_W -= lr * g.readout_W;
    p.readout_b -= lr * g.readout_b;
}

double weighted_accuracy(const std::vector<int>& preds, const std::vector<int>& truth,
                         int class_count) {
    if (preds.size() != truth.size())
        throw std::invalid_argument("weighted_accuracy: length mismatch");
    if (class_count < 1) throw std::invalid_argument("weighted_accuracy: class_count must be >= 1");
    std::vector<long long> hits(class_count, 0), totals(class_count, 0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] < 0 || truth[i] >= class_count)
            throw std::invalid_argument("weighted_accuracy: label out of range");
        ++totals[truth[i]];
        if (preds[i] == truth[i]) ++hits[truth[i]];
    }
    double sum = 0.0;
    for (int c = 0; c < class_count; ++c) {
        if (totals[c] == 0)
            throw std::invalid_argument("weighted_accuracy: class missing from truth");
        sum += static_cast<double>(hits[c]) / static_cast<double>(totals[c]);
    }
    return sum / class_count;
}

std::vector<int> predict(const ModelParams& p, const Dataset& data, std::uint64_t seed) {
    std::vector<int> preds(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const Eigen::VectorXd probs = forward(p, data.series[i], Rng(mix_seed(seed, i)));
        Eigen::Index best;
        probs.maxCoeff(&best);
        preds[i] = static_cast<int>(best);
    }
    return preds;
}

namespace {

std::vector<std::vector<std::size_t>> indices_by_class(const Dataset& data) {
    std::vector<std::vector<std::size_t>> by_class(data.class_count);
    for (std::size_t i = 0; i < data.size(); ++i) by_class[data.labels[i]].push_back(i);
    return by_class;
}

Dataset subset(const Dataset& data, const std::vector<std::size_t>& idx) {
    Dataset out;
    out.name = data.name;
    out.class_count = data.class_count;
    for (std::size_t i : idx) {
        out.series.push_back(data.series[i]);
        out.labels.push_back(data.labels[i]);
    }
    return out;
}

}  // namespace

TrainResult train_sgd(const ModelParams& init, const Dataset& data, const TrainConfig& cfg) {
    data.validate();
    if (cfg.batch < 1) throw std::invalid_argument("train_sgd: batch must be >= 1");
    if (cfg.epochs < 0) throw std::invalid_argument("train_sgd: epochs must be >= 0");

    // optional stratified validation split
    std::vector<std::size_t> train_idx, val_idx;
    if (cfg.val_fraction > 0.0) {
        auto by_class = indices_by_class(data);
        for (int c = 0; c < data.class_count; ++c) {
            auto& idx = by_class[c];
            Rng r(mix_seed(cfg.seed, 0x5641u, c));  // validation-split stream
            shuffle(idx, r);
            std::size_t n_val = static_cast<std::size_t>(cfg.val_fraction * idx.size());
            n_val = std::min(n_val, idx.size() - 1);
            for (std::size_t i = 0; i < idx.size(); ++i)
                (i < n_val ? val_idx : train_idx).push_back(idx[i]);
        }
        std::sort(train_idx.begin(), train_idx.end());
        std::sort(val_idx.begin(), val_idx.end());
    } else {
        train_idx.resize(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) train_idx[i] = i;
    }

    TrainResult result;
    result.params = init;
    ModelParams& p = result.params;

    std::vector<int> train_truth, val_truth;
    for (std::size_t i : train_idx) train_truth.push_back(data.labels[i]);
    for (std::size_t i : val_idx) val_truth.push_back(data.labels[i]);

    auto eval_wacc = [&](const std::vector<std::size_t>& idx, const std::vector<int>& truth,
                         int epoch) -> double {
        if (idx.empty()) return std::numeric_limits<double>::quiet_NaN();
        std::vector<int> preds(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            Rng r(mix_seed(cfg.seed, 0x4556u, epoch, idx[i]));
            const Eigen::VectorXd probs = forward(p, data.series[idx[i]], r);
            Eigen::Index best;
            probs.maxCoeff(&best);
            preds[i] = static_cast<int>(best);
        }
        return weighted_accuracy(preds, truth, data.class_count);
    };

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<std::size_t> order = train_idx;
        Rng shuffle_rng(mix_seed(cfg.seed, 0x5348u, epoch));
        shuffle(order, shuffle_rng);

        double loss_sum = 0.0;
        const std::uint64_t eps_epoch = cfg.freeze_samples ? 0u : static_cast<std::uint64_t>(epoch);
        for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch);
            GradBundle acc = GradBundle::zeros_like(p);
            for (std::size_t pos = start; pos < stop; ++pos) {
                const std::size_t idx = order[pos];
                Rng sample_rng(mix_seed(cfg.seed, 0x4752u, eps_epoch, idx));
                auto [loss, grad] = loss_and_grad(p, data.series[idx], data.labels[idx],
                                                  sample_rng);
                if (!std::isfinite(loss))
                    throw std::runtime_error("train_sgd: non-finite loss at epoch " +
                                             std::to_string(epoch) + ", sample " +
                                             std::to_string(idx));
                loss_sum += loss;
                acc.add_scaled(grad, 1.0);
            }
            sgd_step(p, acc, cfg.lr / static_cast<double>(stop - start));
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.loss = loss_sum / static_cast<double>(order.size());
        stats.train_wacc = eval_wacc(train_idx, train_truth, epoch);
        stats.val_wacc = eval_wacc(val_idx, val_truth, epoch);
        result.history.push_back(stats);
    }
    return result;
}

CvResult grid_search_cv(const std::vector<Hyper>& space, const Dataset& data, int folds,
                        const TrainConfig& cfg) {
    data.validate();
    if (space.empty()) throw std::invalid_argument("grid_search_cv: empty grid");
    if (folds < 2) throw std::invalid_argument("grid_search_cv: folds must be >= 2");
    auto by_class = indices_by_class(data);
    for (int c = 0; c < data.class_count; ++c) {
        if (by_class[c].size() < static_cast<std::size_t>(folds))
            throw std::invalid_argument("grid_search_cv: class smaller than fold count");
    }

    // deterministic stratified fold assignment
    std::vector<int> fold_of(data.size(), 0);
    for (int c = 0; c < data.class_count; ++c) {
        auto idx = by_class[c];
        Rng r(mix_seed(cfg.seed, 0x464fu, c));
        shuffle(idx, r);
        for (std::size_t i = 0; i < idx.size(); ++i)
            fold_of[idx[i]] = static_cast<int>(i % folds);
    }

    const std::vector<double>& ref_times = data.series.front().times;
    CvResult result;
    double best_score = -1.0;
    for (std::size_t h = 0; h < space.size(); ++h) {
        CvEntry entry;
        entry.hyper = space[h];
        for (int f = 0; f < folds; ++f) {
            std::vector<std::size_t> tr, va;
            for (std::size_t i = 0; i < data.size(); ++i)
                (fold_of[i] == f ? va : tr).push_back(i);
            const Dataset dtr = subset(data, tr);
            const Dataset dva = subset(data, va);

            Rng init_rng(mix_seed(cfg.seed, 0x494eu, f));
            ModelParams model = init_model(dtr.series.front().dim(), ref_times, data.class_count,
                                           space[h], init_rng);
            TrainConfig fold_cfg = cfg;
            fold_cfg.seed = mix_seed(cfg.seed, 0x5452u, f);
            fold_cfg.val_fraction = 0.0;
            const TrainResult trained = train_sgd(model, dtr, fold_cfg);

            const std::vector<int> preds =
                predict(trained.params, dva, mix_seed(cfg.seed, 0x4556u, f));
            entry.fold_scores.push_back(weighted_accuracy(preds, dva.labels, data.class_count));
        }
        entry.mean_score = 0.0;
        for (double s : entry.fold_scores) entry.mean_score += s;
        entry.mean_score /= folds;
        if (entry.mean_score > best_score) {
            best_score = entry.mean_score;
            result.best = space[h];
        }
        result.table.push_back(std::move(entry));
    }
    return result;
}

VarianceReport output_variance_analysis(const ModelParams& p, const Dataset& test, int runs,
                                        std::uint64_t seed) {
    test.validate();
    if (runs < 1) throw std::invalid_argument("output_variance_analysis: runs must be >= 1");
    VarianceReport report;
    report.norms.reserve(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        Eigen::MatrixXd outputs(p.classes, runs);
        for (int r = 0; r < runs; ++r)
            outputs.col(r) = forward(p, test.series[i], Rng(mix_seed(seed, i, r)));
        if (runs == 1) {
            report.norms.push_back(0.0);
            continue;
        }
        const Eigen::VectorXd mean = outputs.rowwise().mean();
        Eigen::MatrixXd centered = outputs.colwise() - mean;
        Eigen::MatrixXd cov = centered * centered.transpose() / static_cast<double>(runs - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        report.norms.push_back(es.eigenvalues().cwiseAbs().maxCoeff());
    }

    constexpr int kBins = 20;
    double max_norm = 0.0;
    for (double v : report.norms) max_norm = std::max(max_norm, v);
    const double width = max_norm > 0.0 ? max_norm / kBins : 1.0;
    report.bin_edges.resize(kBins + 1);
    for (int b = 0; b <= kBins; ++b) report.bin_edges[b] = b * width;
    report.bin_counts.assign(kBins, 0);
    for (double v : report.norms) {
        int b = static_cast<int>(v / width);
        b = std::clamp(b, 0, kBins - 1);
        ++report.bin_counts[b];
    }
    return report;
}

}  // namespace sigaug
