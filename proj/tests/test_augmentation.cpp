#include "sigaug/augmentation.hpp"

#include "sigaug/signature.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using namespace sigaug;

TEST_CASE("midpoint grid") {
    TimeGrid g = new_times_midpoints({0, 1, 2});
    CHECK(g.new_times == std::vector<double>{0.5, 1.5});
    CHECK(new_times_midpoints({0, 1}).new_times == std::vector<double>{0.5});

    Rng rng(41);
    for (int rep = 0; rep < 20; ++rep) {
        TimeSeries x = oracles::random_series(rng, 8, 1);
        TimeGrid grid = new_times_midpoints(x.times);
        // merged grid strictly increasing
        std::vector<double> merged;
        std::size_t i = 0, j = 0;
        while (i < grid.original.size() || j < grid.new_times.size()) {
            if (j >= grid.new_times.size() ||
                (i < grid.original.size() && grid.original[i] < grid.new_times[j]))
                merged.push_back(grid.original[i++]);
            else
                merged.push_back(grid.new_times[j++]);
        }
        for (std::size_t k = 0; k + 1 < merged.size(); ++k) CHECK(merged[k] < merged[k + 1]);
        CHECK(merged.size() == 2 * grid.original.size() - 1);
    }
}

TEST_CASE("extended grid") {
    CHECK(new_times_extended({0, 1, 2}, 0, 0, 1.0).new_times ==
          new_times_midpoints({0, 1, 2}).new_times);

    TimeGrid g = new_times_extended({0, 1}, 1, 1, 0.5);
    CHECK(g.new_times == std::vector<double>{-0.5, 0.5, 1.5});

    CHECK_THROWS_AS(new_times_extended({0, 1}, 1, 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(new_times_extended({0, 1}, -1, 0, 1.0), std::invalid_argument);

    // make_grid defaults the margin to one average gap
    TimeGrid auto_margin = make_grid({0, 1, 2}, GridStrategy::extended, 2, 2, 0.0);
    CHECK(auto_margin.new_times.front() == doctest::Approx(-1.0));
    CHECK(auto_margin.new_times.back() == doctest::Approx(3.0));
}

TEST_CASE("extended strategy frees the pinned signature components") {
    // with midpoints the sampled series all share the original endpoints, so
    // level 1 is pinned; extended grids expose it to the sampling noise
    TimeSeries x;
    x.times = {0, 1, 2, 3};
    x.values.resize(4, 1);
    x.values << 0, 0.5, 0.2, 0.9;

    auto level1_spread = [&](const TimeGrid& grid) {
        const int m1 = grid.new_count();
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(m1);
        Eigen::MatrixXd v = 0.3 * Eigen::MatrixXd::Identity(m1, m1);
        auto samples = sample_series(mean, v, 2, Rng(7));
        TruncTensor s0 = signature(interleave(x, samples[0], grid), 2);
        TruncTensor s1 = signature(interleave(x, samples[1], grid), 2);
        return std::abs(s0.lev(1)[0] - s1.lev(1)[0]);
    };

    CHECK(level1_spread(new_times_midpoints(x.times)) == 0.0);
    CHECK(level1_spread(new_times_extended(x.times, 1, 1, 0.5)) > 1e-3);
}

TEST_CASE("augmenter forward: degenerate, copying, and linear") {
    TimeSeries x;
    x.times = {0, 1, 2};
    x.values.resize(3, 1);
    x.values << 1, 2, 3;
    TimeGrid grid = new_times_midpoints(x.times);
    const int n = 3, d = 1, m = 2;
    const int f_len = n * d + n + m;
    const int m1 = m * d;

    AugmenterParams zero;
    zero.W_m = Eigen::MatrixXd::Zero(m1, f_len);
    zero.b_m = Eigen::VectorXd::Zero(m1);
    zero.W_V = Eigen::MatrixXd::Zero(m1 * (m1 + 1) / 2, f_len);
    zero.b_V = Eigen::VectorXd::Zero(m1 * (m1 + 1) / 2);
    auto [mean0, v0] = augmenter_forward(zero, x, grid);
    CHECK(mean0.norm() == 0.0);
    CHECK(v0.norm() == 0.0);

    AugmenterParams copy = zero;
    copy.W_m(0, 0) = 1.0;  // first new value copies x_0
    copy.W_m(1, 2) = 1.0;  // second copies x_2
    auto [mean1, v1] = augmenter_forward(copy, x, grid);
    CHECK(mean1[0] == 1.0);
    CHECK(mean1[1] == 3.0);
    (void)v1;

    // exact first-order behavior of the linear map
    Rng rng(42);
    AugmenterParams random = zero;
    for (int i = 0; i < random.W_m.rows(); ++i)
        for (int j = 0; j < f_len; ++j) random.W_m(i, j) = rng.uniform() - 0.5;
    TimeSeries xp = x;
    xp.values(1, 0) += 0.37;
    auto [mp, vp] = augmenter_forward(random, xp, grid);
    auto [mb, vb] = augmenter_forward(random, x, grid);
    Eigen::VectorXd predicted = mb + random.W_m.col(1) * 0.37;
    CHECK((mp - predicted).norm() < 1e-14);
    (void)vp;
    (void)vb;
}

TEST_CASE("lower-triangle packing round trip") {
    Rng rng(43);
    const int n = 5;
    Eigen::VectorXd packed(n * (n + 1) / 2);
    for (int i = 0; i < packed.size(); ++i) packed[i] = rng.uniform();
    Eigen::MatrixXd v = unpack_lower_triangular(packed, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) CHECK(v(i, j) == 0.0);
    CHECK((pack_lower_triangular(v) - packed).norm() == 0.0);
}

TEST_CASE("sampling: deterministic, degenerate, and law-consistent") {
    const int m1 = 4;
    Eigen::VectorXd mean(m1);
    mean << 1, -2, 0.5, 3;

    auto zero_samples = sample_series(mean, Eigen::MatrixXd::Zero(m1, m1), 3, Rng(5));
    for (const auto& y : zero_samples) CHECK((y - mean).norm() == 0.0);

    auto a = sample_series(mean, Eigen::MatrixXd::Identity(m1, m1), 4, Rng(5));
    auto b = sample_series(mean, Eigen::MatrixXd::Identity(m1, m1), 4, Rng(5));
    for (int k = 0; k < 4; ++k) CHECK((a[k] - b[k]).norm() == 0.0);

    // law of large numbers at K = 1e4: mean -> 0, variance -> 1
    const int k_count = 10000;
    auto big = sample_series(Eigen::VectorXd::Zero(m1), Eigen::MatrixXd::Identity(m1, m1),
                             k_count, Rng(6));
    for (int i = 0; i < m1; ++i) {
        double s = 0.0, s2 = 0.0;
        for (const auto& y : big) {
            s += y[i];
            s2 += y[i] * y[i];
        }
        const double avg = s / k_count;
        const double var = s2 / k_count - avg * avg;
        CHECK(std::abs(avg) < 5.0 / std::sqrt(k_count));
        CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / k_count));
    }
}

TEST_CASE("sample covariance converges to V V^T at the Monte-Carlo rate") {
    Rng rng(44);
    const int m1 = 3;
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(m1, m1);
    for (int i = 0; i < m1; ++i)
        for (int j = 0; j <= i; ++j) v(i, j) = rng.uniform() - 0.3;
    const Eigen::MatrixXd target = v * v.transpose();

    for (int k_count : {1000, 10000}) {
        auto ys = sample_series(Eigen::VectorXd::Zero(m1), v, k_count, Rng(45));
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(m1, m1);
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(m1);
        for (const auto& y : ys) mean += y;
        mean /= k_count;
        for (const auto& y : ys) cov += (y - mean) * (y - mean).transpose();
        cov /= k_count - 1;
        for (int i = 0; i < m1; ++i) {
            for (int j = 0; j < m1; ++j) {
                // variance of a Gaussian covariance estimate
                const double var_est =
                    (target(i, i) * target(j, j) + target(i, j) * target(i, j)) / (k_count - 1);
                CHECK(std::abs(cov(i, j) - target(i, j)) < 5.0 * std::sqrt(var_est));
            }
        }
    }
}

TEST_CASE("band mask") {
    Rng rng(46);
    const int m1 = 6;
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(m1, m1);
    for (int i = 0; i < m1; ++i)
        for (int j = 0; j <= i; ++j) v(i, j) = rng.uniform() + 0.1;

    CHECK((band_mask(v, m1) - v).norm() == 0.0);
    CHECK(band_mask(v, 0).norm() == 0.0);

    for (int alpha : {1, 2, 4}) {
        Eigen::MatrixXd masked = band_mask(v, alpha);
        Eigen::MatrixXd cov = masked * masked.transpose();
        for (int l = 0; l < m1; ++l)
            for (int m = 0; m < m1; ++m)
                if (std::abs(l - m) >= alpha) CHECK(cov(l, m) == 0.0);
    }
    CHECK_THROWS_AS(band_mask(v, -1), std::invalid_argument);
}

TEST_CASE("interleave: layout, passthrough, and refinement invariance") {
    TimeSeries x;
    x.times = {0, 1, 2, 3};
    x.values.resize(4, 1);
    x.values << 0, 1, 0.5, 2;

    TimeGrid grid = new_times_midpoints(x.times);
    // linear interpolation values at the midpoints
    Eigen::VectorXd lerp(3);
    lerp << 0.5, 0.75, 1.25;
    TimeSeries merged = interleave(x, lerp, grid);
    CHECK(merged.length() == 7);
    CHECK(merged.values(0, 0) == 0.0);
    CHECK(merged.values(6, 0) == 2.0);
    for (int i = 0; i < 4; ++i) CHECK(merged.values(2 * i, 0) == x.values(i, 0));

    // piecewise-linear refinement leaves the signature unchanged
    CHECK(max_abs_diff(signature(merged, 3), signature(x, 3)) < 1e-12);

    // extended grids put sampled values at the merged endpoints
    TimeGrid ext = new_times_extended(x.times, 1, 1, 0.5);
    Eigen::VectorXd sample = Eigen::VectorXd::Constant(5, 9.0);
    TimeSeries ext_merged = interleave(x, sample, ext);
    CHECK(ext_merged.values(0, 0) == 9.0);
    CHECK(ext_merged.values(ext_merged.length() - 1, 0) == 9.0);

    // duplicate stamps are a grid collision
    TimeGrid bad = grid;
    bad.new_times[0] = 1.0;
    CHECK_THROWS_AS(interleave(x, lerp, bad), std::invalid_argument);

    const auto positions = merged_new_positions(x.times, grid.new_times);
    CHECK(positions == std::vector<int>{1, 3, 5});
}

namespace {

// hand-computed 3-point posterior through an explicit 3x3 inverse
void check_against_explicit_inverse(double query) {
    TimeSeries x;
    x.times = {0.0, 0.6, 1.0};
    x.values.resize(3, 1);
    x.values << 0.2, -0.4, 0.7;
    const double sigma = 1.3, len = 0.4, noise = 1e-3;

    TimeGrid grid;
    grid.original = x.times;
    grid.new_times = {query};

    auto kf = [&](double s, double t) {
        return sigma * std::exp(-(t - s) * (t - s) / (2.0 * len * len));
    };
    Eigen::Matrix3d k;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) k(i, j) = kf(x.times[i], x.times[j]);
    k.diagonal().array() += noise;
    const Eigen::Matrix3d kinv = k.inverse();
    Eigen::Vector3d ks;
    for (int i = 0; i < 3; ++i) ks[i] = kf(query, x.times[i]);
    const double prior = x.values.col(0).mean();
    Eigen::Vector3d centered = x.values.col(0).array() - prior;
    const double mean_expected = prior + ks.dot(kinv * centered);
    const double var_expected = kf(query, query) - ks.dot(kinv * ks);

    const GpPosterior post = gp_posterior(x, grid, sigma, len, noise);
    CHECK(post.mean[0] == doctest::Approx(mean_expected).epsilon(1e-10));
    CHECK(post.cov(0, 0) == doctest::Approx(var_expected).epsilon(1e-8));
}

}  // namespace

TEST_CASE("gp posterior: 3-point linear-algebra oracle") {
    check_against_explicit_inverse(0.3);
    check_against_explicit_inverse(0.85);
}

TEST_CASE("gp posterior: interpolation and kernel decay") {
    TimeSeries x;
    x.times = {0.0, 0.5, 1.0};
    x.values.resize(3, 1);
    x.values << 1.0, 2.0, -1.0;

    TimeGrid at_data;
    at_data.original = x.times;
    at_data.new_times = {0.5 + 1e-13};  // effectively at the observed time
    GpPosterior post = gp_posterior(x, at_data, 1.0, 0.3, 1e-10);
    CHECK(post.mean[0] == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(post.cov(0, 0) < 1e-6);

    TimeGrid far;
    far.original = x.times;
    far.new_times = {50.0};
    GpPosterior far_post = gp_posterior(x, far, 1.7, 0.3, 1e-8);
    CHECK(far_post.mean[0] == doctest::Approx(x.values.col(0).mean()).epsilon(1e-9));
    CHECK(far_post.cov(0, 0) == doctest::Approx(1.7).epsilon(1e-9));
}

TEST_CASE("gp posterior: covariance symmetric positive semidefinite") {
    Rng rng(47);
    for (int rep = 0; rep < 10; ++rep) {
        TimeSeries x = oracles::random_series(rng, 8, 1);
        TimeGrid grid = new_times_midpoints(x.times);
        GpPosterior post =
            gp_posterior(x, grid, 1.0 + rng.uniform(), 0.2 + rng.uniform(), 1e-6);
        CHECK((post.cov - post.cov.transpose()).norm() == 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(post.cov);
        CHECK(es.eigenvalues().minCoeff() > -1e-9);
    }
}

TEST_CASE("gp posterior: singular kernel raises") {
    TimeSeries x;
    x.times = {0.0, 1e-13, 1.0};  // nearly duplicated inputs, no noise
    x.values.resize(3, 1);
    x.values << 1.0, -1.0, 0.5;
    TimeGrid grid;
    grid.original = x.times;
    grid.new_times = {0.5};
    CHECK_THROWS_AS(gp_posterior(x, grid, 1.0, 0.5, 0.0), std::runtime_error);
}

TEST_CASE("gp hyper fit is deterministic and sane") {
    TimeSeries x;
    x.times = uniform_times(20);
    x.values.resize(20, 1);
    for (int i = 0; i < 20; ++i) x.values(i, 0) = std::sin(3.0 * x.times[i]);
    const GpHyper h1 = fit_gp_hyper(x);
    const GpHyper h2 = fit_gp_hyper(x);
    CHECK(h1.sigma == h2.sigma);
    CHECK(h1.length == h2.length);
    CHECK(h1.noise == h2.noise);
    CHECK(h1.sigma > 0.0);
    CHECK(h1.length > 0.0);
}
