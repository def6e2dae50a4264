#include "sigaug/expected_signature.hpp"

#include "sigaug/signature.hpp"

#include <cmath>
#include <stdexcept>

namespace sigaug {

namespace {

TruncTensor tree_sum(const std::vector<TruncTensor>& items, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return items[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return tree_sum(items, lo, mid) + tree_sum(items, mid, hi);
}

}  // namespace

TruncTensor pairwise_tree_mean(const std::vector<TruncTensor>& items) {
    if (items.empty()) throw std::invalid_argument("pairwise_tree_mean needs at least one item");
    return tree_sum(items, 0, items.size()) * (1.0 / static_cast<double>(items.size()));
}

ExpSigEstimate expected_signature(const std::vector<TimeSeries>& batch, int level,
                                  const NormConfig& cfg, bool rescale_time) {
    if (batch.empty()) throw std::invalid_argument("expected_signature needs at least one series");
    const int d = batch.front().dim();
    std::vector<TruncTensor> normalized;
    normalized.reserve(batch.size());
    std::vector<double> lambdas;
    lambdas.reserve(batch.size());
    for (const TimeSeries& s : batch) {
        if (s.dim() != d)
            throw std::invalid_argument("expected_signature: series dimensions differ");
        const TimeSeries augmented = time_augment(s, rescale_time);
        auto [nrm, lam] = normalize(signature(augmented, level), cfg);
        normalized.push_back(std::move(nrm));
        lambdas.push_back(lam);
    }
    ExpSigEstimate est{pairwise_tree_mean(normalized), static_cast<int>(batch.size()),
                       std::move(lambdas)};
    return est;
}

long long hoeffding_sample_size(double R, double sigma, double delta) {
    if (!(sigma > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("hoeffding_sample_size needs sigma > 0 and delta > 0");
    if (delta >= 1.0) return 0;
    const double k = 2.0 * R * R * std::log(1.0 / delta) / (sigma * sigma);
    return static_cast<long long>(std::ceil(k));
}

}  // namespace sigaug
