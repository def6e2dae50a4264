#include "sigaug/normalization.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

using namespace sigaug;

namespace {

TruncTensor make_d1(std::vector<double> coeffs) {
    TruncTensor t(1, static_cast<int>(coeffs.size()) - 1);
    for (std::size_t n = 0; n < coeffs.size(); ++n) t.lev(static_cast<int>(n))[0] = coeffs[n];
    return t;
}

double dilated_sq_norm(const TruncTensor& t, double lam) {
    const auto sq = level_squared_norms(t);
    double acc = 0.0, pw = 1.0;
    for (std::size_t n = 0; n < sq.size(); ++n) {
        acc += pw * sq[n];
        pw *= lam * lam;
    }
    return acc;
}

}  // namespace

TEST_CASE("psi: the a=1 instance evaluated by hand") {
    NormConfig cfg{4.0, 1.0, 1e-12, 200};
    CHECK(psi(2.0, cfg) == doctest::Approx(4.0).epsilon(1e-15));  // x = 4 <= C
    // x = 16: 4 + 16 (1/4 - 1/16) = 7
    CHECK(psi(4.0, cfg) == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(psi(1.0, cfg) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(psi(1.0, NormConfig{1.5, 3.0, 1e-12, 200}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(psi(0.5, cfg), std::domain_error);
}

TEST_CASE("psi: bounded by R^2, continuous and C1 at the branch point") {
    for (double a : {0.5, 1.0, 2.0, 20.0}) {
        for (double c : {1.5, 4.0, 100.0}) {
            NormConfig cfg{c, a, 1e-12, 200};
            const double r2 = c * (1.0 + 1.0 / a);  // sup psi
            CHECK(cfg.R() * cfg.R() == doctest::Approx(r2).epsilon(1e-15));
            CHECK(psi(1e8, cfg) <= r2 * (1.0 + 1e-15));
            CHECK(psi(1e8, cfg) == doctest::Approx(r2).epsilon(1e-6));
            CHECK(psi(2.0 * std::sqrt(c), cfg) < r2);

            const double root_c = std::sqrt(c);
            CHECK(psi(root_c * (1 + 1e-9), cfg) == doctest::Approx(c).epsilon(1e-7));
            // both one-sided derivatives equal 2 sqrt(C)
            CHECK(psi_prime(root_c * (1 - 1e-12), cfg) ==
                  doctest::Approx(2.0 * root_c).epsilon(1e-9));
            CHECK(psi_prime(root_c, cfg) == doctest::Approx(2.0 * root_c).epsilon(1e-12));
        }
    }
}

TEST_CASE("solve_lambda: identity branch and unit tensor return exactly 1") {
    NormConfig cfg{4.0, 1.0, 1e-12, 200};
    CHECK(solve_lambda(make_d1({1, 1.2}), cfg) == 1.0);  // |t|^2 = 2.44 <= 4
    CHECK(solve_lambda(TruncTensor::unit(3, 4), cfg) == 1.0);
    CHECK_THROWS_AS(solve_lambda(TruncTensor(2, 2), cfg), std::invalid_argument);
}

TEST_CASE("solve_lambda: d=1 hand case against the bisection oracle") {
    NormConfig cfg{4.0, 1.0, 1e-12, 200};
    TruncTensor t = make_d1({1, 4});
    // |t|^2 = 17, psi(sqrt(17)) = 8 - 16/17, solve 1 + 16 lam^2 = psi
    const double target = psi(std::sqrt(17.0), cfg) - 1.0;
    const double expected = std::sqrt((7.0 - 16.0 / 17.0) / 16.0);
    const double lam = solve_lambda(t, cfg);
    CHECK(lam == doctest::Approx(expected).epsilon(1e-12));
    CHECK(lam == doctest::Approx(oracles::bisect_lambda(level_squared_norms(t), target))
                     .epsilon(1e-12));
    CHECK(std::abs(dilated_sq_norm(t, lam) - psi(std::sqrt(17.0), cfg)) <= 1e-12);
}

TEST_CASE("solve_lambda residual stays within tolerance on random tensors") {
    Rng rng(21);
    NormConfig cfg{4.0, 1.0, 1e-12, 200};
    for (int rep = 0; rep < 200; ++rep) {
        const int d = 1 + static_cast<int>(rng.below(3));
        const int level = 1 + static_cast<int>(rng.below(4));
        TruncTensor t = oracles::random_group_like(rng, d, level, 1.0 + 2.0 * rng.uniform());
        const double lam = solve_lambda(t, cfg);
        const double target = psi(tensor_norm(t), cfg);
        CHECK(std::abs(dilated_sq_norm(t, lam) - target) <= 1e-12);
    }
}

TEST_CASE("dilated norm is strictly increasing in lambda") {
    Rng rng(22);
    TruncTensor t = oracles::random_group_like(rng, 2, 3, 2.0);
    double prev = dilated_sq_norm(t, 0.05);
    for (double lam = 0.1; lam < 2.05; lam += 0.05) {
        const double cur = dilated_sq_norm(t, lam);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("normalize: identity branch passthrough and the norm bound") {
    NormConfig cfg{4.0, 1.0, 1e-12, 200};
    TruncTensor small = make_d1({1, 1.0});
    auto [same, lam1] = normalize(small, cfg);
    CHECK(lam1 == 1.0);
    CHECK(max_abs_diff(same, small) == 0.0);

    Rng rng(23);
    for (int rep = 0; rep < 100; ++rep) {
        const int d = 1 + static_cast<int>(rng.below(3));
        TruncTensor t = oracles::random_group_like(rng, d, 3, 1.0 + 3.0 * rng.uniform());
        auto [nrm, lam] = normalize(t, cfg);
        CHECK(tensor_norm(nrm) <= cfg.R() + 1e-9);
        const double n2 = tensor_norm(nrm);
        CHECK(n2 * n2 == doctest::Approx(psi(tensor_norm(t), cfg)).epsilon(1e-10));
        CHECK(lam > 0.0);
    }

    // the hand case: normalized level 1 = 4 * lambda
    TruncTensor t = make_d1({1, 4});
    auto [nrm, lam] = normalize(t, cfg);
    CHECK(nrm.lev(1)[0] == doctest::Approx(4.0 * std::sqrt((7.0 - 16.0 / 17.0) / 16.0))
                               .epsilon(1e-12));
    (void)lam;
}

TEST_CASE("lambda_gradient: zero on the identity branch interior") {
    NormConfig cfg{4.0, 1.0, 1e-12, 200};
    TruncTensor t = make_d1({1, 1.1});  // |t|^2 = 2.21 < C
    TruncTensor g = lambda_gradient(t, cfg);
    CHECK(tensor_norm(g) == 0.0);
    CHECK_THROWS_AS(lambda_gradient(TruncTensor::unit(2, 2), cfg), std::invalid_argument);
}

TEST_CASE("lambda_gradient matches finite differences away from the branch point") {
    Rng rng(24);
    NormConfig cfg{2.0, 1.0, 1e-14, 400};
    int checked = 0;
    for (int rep = 0; rep < 40 && checked < 15; ++rep) {
        const int d = 1 + static_cast<int>(rng.below(2));
        const int level = 1 + static_cast<int>(rng.below(3));
        TruncTensor t = oracles::random_group_like(rng, d, level, 1.5 + rng.uniform());
        const double normsq = tensor_norm(t) * tensor_norm(t);
        if (normsq < cfg.C * 1.2) continue;  // stay clear of the branch point
        ++checked;

        TruncTensor analytic = lambda_gradient(t, cfg);
        double fd_norm_sq = 0.0, diff_norm_sq = 0.0;
        const double h = 1e-6;
        for (int n = 1; n <= level; ++n) {
            for (int i = 0; i < t.lev_size(n); ++i) {
                TruncTensor tp = t, tm = t;
                tp.lev(n)[i] += h;
                tm.lev(n)[i] -= h;
                const double fd = (solve_lambda(tp, cfg) - solve_lambda(tm, cfg)) / (2.0 * h);
                fd_norm_sq += fd * fd;
                const double diff = fd - analytic.lev(n)[i];
                diff_norm_sq += diff * diff;
            }
        }
        CHECK(std::sqrt(diff_norm_sq) < 1e-5 * std::max(1e-6, std::sqrt(fd_norm_sq)));
    }
    CHECK(checked >= 10);
}

TEST_CASE("lambda_gradient sign: growing a level-1 coefficient shrinks lambda") {
    NormConfig cfg{4.0, 1.0, 1e-12, 200};
    TruncTensor t = make_d1({1, 4});  // tail branch
    TruncTensor g = lambda_gradient(t, cfg);
    CHECK(g.lev(1)[0] < 0.0);
    // finite-difference sign oracle
    TruncTensor tp = t;
    tp.lev(1)[0] += 1e-4;
    CHECK(solve_lambda(tp, cfg) < solve_lambda(t, cfg));
}

TEST_CASE("normalization map is Lipschitz-like on random pairs") {
    // |L(s) - L(t)| / min(sqrt(|s-t|), |s-t|) stays bounded; the empirical
    // constant per (C, a) is recorded and must be stable across seeds.
    NormConfig cfg{1.5, 1.0, 1e-12, 200};
    auto max_ratio = [&](std::uint64_t seed) {
        Rng rng(seed);
        double worst = 0.0;
        for (int rep = 0; rep < 300; ++rep) {
            TruncTensor s = oracles::random_group_like(rng, 2, 3, 1.0 + rng.uniform());
            TruncTensor t = s;
            for (int n = 1; n <= 3; ++n)
                for (int i = 0; i < t.lev_size(n); ++i)
                    t.lev(n)[i] += 0.3 * (rng.uniform() - 0.5);
            const double dist = tensor_norm(s - t);
            if (dist < 1e-12 || dist > 1.0) continue;
            const double num = tensor_norm(normalize(s, cfg).first - normalize(t, cfg).first);
            worst = std::max(worst, num / std::min(std::sqrt(dist), dist));
        }
        return worst;
    };
    const double c1 = max_ratio(31);
    const double c2 = max_ratio(32);
    INFO("empirical Lipschitz-type constant (C=1.5, a=1): ", c1, " / ", c2);
    CHECK(std::isfinite(c1));
    CHECK(std::isfinite(c2));
    CHECK(c1 > 0.0);
    CHECK(c1 < 3.0 * c2 + 1.0);
    CHECK(c2 < 3.0 * c1 + 1.0);
}

TEST_CASE("lambda truncation curve: flat at 1 when the full signature is small") {
    NormConfig cfg{100.0, 1.0, 1e-12, 200};
    TimeSeries x;
    x.times = {0, 1, 2, 3};
    x.values.resize(4, 1);
    x.values << 0, 0.3, 0.1, 0.4;
    for (auto [level, lam] : lambda_truncation_curve(x, cfg, 5)) {
        (void)level;
        CHECK(lam == 1.0);
    }
}

TEST_CASE("lambda truncation curve converges with shrinking tail error") {
    Rng rng(25);
    NormConfig cfg{1.5, 1.0, 1e-12, 200};
    int passed = 0;
    for (int rep = 0; rep < 10; ++rep) {
        TimeSeries x = oracles::random_series(rng, 6, 2, 0.9);
        const int level_max = 8;
        const auto curve = lambda_truncation_curve(x, cfg, level_max);
        const double limit = curve.back().second;
        std::vector<double> err;
        for (const auto& [level, lam] : curve) {
            (void)level;
            err.push_back(std::abs(lam - limit));
        }
        // tail errors eventually non-increasing
        int level0 = -1;
        for (int start = 0; start < level_max - 1; ++start) {
            bool monotone = true;
            for (int i = start; i + 1 < level_max; ++i)
                if (err[i + 1] > err[i] + 1e-12) monotone = false;
            if (monotone) {
                level0 = start;
                break;
            }
        }
        CHECK(level0 >= 0);
        CHECK(level0 <= level_max - 2);
        if (level0 >= 0) ++passed;

        // rate bound of the truncation error: err_L <= c * min(tail^{1/4},
        // tail^{1/2})^{1/r} with tail = sum_{j>L} TV^j / j!. The constant is
        // fitted, recorded, and only sanity-checked for finiteness.
        const double tv = oracles::total_variation(x);
        int first_nonzero = 1;  // level 1 of a nondegenerate series is nonzero
        double fitted_c = 0.0;
        for (int levidx = 0; levidx + 1 < level_max; ++levidx) {
            double tail = 0.0, fact = 1.0;
            for (int j = 1; j <= levidx + 1; ++j) fact *= j;
            double term = std::pow(tv, levidx + 1) / fact;
            for (int j = levidx + 1; j < 60; ++j) {
                term *= tv / (j + 1);
                tail += term;
            }
            const double rate =
                std::pow(std::min(std::pow(tail, 0.25), std::sqrt(tail)), 1.0 / first_nonzero);
            if (rate > 0) fitted_c = std::max(fitted_c, err[levidx] / rate);
        }
        INFO("fitted truncation-rate constant: ", fitted_c);
        CHECK(std::isfinite(fitted_c));
    }
    CHECK(passed == 10);
}
