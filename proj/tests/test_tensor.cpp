#include "sigaug/tensor.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

using namespace sigaug;

namespace {

TruncTensor make_d1(std::vector<double> coeffs) {
    TruncTensor t(1, static_cast<int>(coeffs.size()) - 1);
    for (std::size_t n = 0; n < coeffs.size(); ++n) t.lev(static_cast<int>(n))[0] = coeffs[n];
    return t;
}

TruncTensor random_tensor(Rng& rng, int d, int level, double scale = 1.0) {
    TruncTensor t(d, level);
    for (double& x : t.raw()) x = scale * (rng.uniform() - 0.5);
    return t;
}

}  // namespace

TEST_CASE("addition: identity, direct sum, inverse") {
    Rng rng(1);
    TruncTensor a = random_tensor(rng, 2, 3);
    TruncTensor zero(2, 3);
    CHECK(max_abs_diff(a + zero, a) == 0.0);

    CHECK(max_abs_diff(make_d1({1, 2}) + make_d1({1, 3}), make_d1({2, 5})) == 0.0);

    TruncTensor cancel = a + a * (-1.0);
    CHECK(max_abs_diff(cancel, TruncTensor(2, 3)) == 0.0);
}

TEST_CASE("addition rejects shape mismatches") {
    CHECK_THROWS_AS(TruncTensor(2, 2) + TruncTensor(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(TruncTensor(2, 2) + TruncTensor(3, 2), std::invalid_argument);
}

TEST_CASE("scaling") {
    Rng rng(2);
    TruncTensor a = random_tensor(rng, 3, 3);
    CHECK(max_abs_diff(a * 1.0, a) == 0.0);
    CHECK(max_abs_diff(a * 0.0, TruncTensor(3, 3)) == 0.0);
    CHECK(max_abs_diff(3.0 * make_d1({1, 2}), make_d1({3, 6})) == 0.0);
}

TEST_CASE("product: unit is the identity") {
    Rng rng(3);
    TruncTensor a = random_tensor(rng, 2, 4);
    TruncTensor unit = TruncTensor::unit(2, 4);
    CHECK(max_abs_diff(mul(a, unit), a) < 1e-15);
    CHECK(max_abs_diff(mul(unit, a), a) < 1e-15);
}

TEST_CASE("product: d=1 convolution expanded by hand") {
    // (1, x, 0) (x) (1, y, 0) = (1, x+y, xy)
    const double x = 0.7, y = -1.3;
    TruncTensor a = make_d1({1, x, 0});
    TruncTensor b = make_d1({1, y, 0});
    TruncTensor c = mul(a, b);
    CHECK(c.scalar() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.lev(1)[0] == doctest::Approx(x + y).epsilon(1e-15));
    CHECK(c.lev(2)[0] == doctest::Approx(x * y).epsilon(1e-15));
}

TEST_CASE("product: exp(e1) (x) exp(e2) against the quadrature oracle") {
    Eigen::VectorXd e1(2), e2(2);
    e1 << 1, 0;
    e2 << 0, 1;
    TruncTensor prod = mul(tensor_exp(e1, 2), tensor_exp(e2, 2));
    // level 2 of the 2-segment piecewise-linear path, (11,12,21,22) order
    CHECK(prod.lev(2)[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(prod.lev(2)[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(prod.lev(2)[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(prod.lev(2)[3] == doctest::Approx(0.5).epsilon(1e-12));

    TimeSeries path;
    path.times = {0, 1, 2};
    path.values.resize(3, 2);
    path.values << 0, 0, 1, 0, 1, 1;
    TruncTensor oracle = oracles::signature_quadrature(path, 2, 2000);
    CHECK(max_abs_diff(prod, oracle) < 1e-6);
}

TEST_CASE("exponential: zero increment, factorial series, rank-one level 2") {
    CHECK(max_abs_diff(tensor_exp(Eigen::VectorXd::Zero(3), 3), TruncTensor::unit(3, 3)) == 0.0);

    Eigen::VectorXd one(1);
    one << 1;
    TruncTensor e = tensor_exp(one, 3);
    CHECK(e.scalar() == 1.0);
    CHECK(e.lev(1)[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.lev(2)[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(e.lev(3)[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

    Eigen::VectorXd v(2);
    v << 1, 1;
    TruncTensor e2 = tensor_exp(v, 2);
    CHECK(e2.lev(1)[0] == 1.0);
    CHECK(e2.lev(1)[1] == 1.0);
    for (int i = 0; i < 4; ++i) CHECK(e2.lev(2)[i] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("dilation: identity, semigroup, direct scaling, group-like guard") {
    Rng rng(4);
    TruncTensor t = oracles::random_group_like(rng, 2, 3);
    CHECK(max_abs_diff(dilate(t, 1.0), t) == 0.0);

    TruncTensor ab = dilate(dilate(t, 0.7), 1.9);
    CHECK(max_abs_diff(ab, dilate(t, 0.7 * 1.9)) < 1e-14);

    TruncTensor direct = dilate(make_d1({1, 2, 4}), 0.5);
    CHECK(max_abs_diff(direct, make_d1({1, 1, 1})) < 1e-15);

    TruncTensor bad = make_d1({0.5, 1, 1});
    CHECK_THROWS_AS(dilate(bad, 2.0), std::invalid_argument);
}

TEST_CASE("norm: unit, hand value, dilation expansion") {
    CHECK(tensor_norm(TruncTensor::unit(2, 3)) == 1.0);
    CHECK(tensor_norm(make_d1({1, 3})) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));

    Rng rng(5);
    TruncTensor t = oracles::random_group_like(rng, 2, 4);
    const double lam = 0.6;
    const auto sq = level_squared_norms(t);
    double expected = 0.0, pw = 1.0;
    for (std::size_t n = 0; n < sq.size(); ++n) {
        expected += pw * sq[n];
        pw *= lam * lam;
    }
    const double got = tensor_norm(dilate(t, lam));
    CHECK(got * got == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("algebra laws on random triples") {
    Rng rng(6);
    for (int rep = 0; rep < 50; ++rep) {
        const int d = 1 + static_cast<int>(rng.below(3));
        const int level = 1 + static_cast<int>(rng.below(5));
        TruncTensor a = random_tensor(rng, d, level);
        TruncTensor b = random_tensor(rng, d, level);
        TruncTensor c = random_tensor(rng, d, level);

        CHECK(max_abs_diff(mul(mul(a, b), c), mul(a, mul(b, c))) < 1e-12);
        CHECK(max_abs_diff(mul(a, b + c), mul(a, b) + mul(a, c)) < 1e-12);

        Eigen::VectorXd v(d);
        for (int i = 0; i < d; ++i) v[i] = 2.0 * rng.uniform() - 1.0;
        TruncTensor inv = mul(tensor_exp(v, level), tensor_exp(-v, level));
        CHECK(max_abs_diff(inv, TruncTensor::unit(d, level)) < 1e-12);
    }
}

TEST_CASE("product VJPs match the bilinear pairing") {
    // <cot, a (x) b> differentiated by hand against directional probes
    Rng rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        const int d = 1 + static_cast<int>(rng.below(3));
        const int level = 1 + static_cast<int>(rng.below(4));
        TruncTensor a = random_tensor(rng, d, level);
        TruncTensor b = random_tensor(rng, d, level);
        TruncTensor cot = random_tensor(rng, d, level);
        TruncTensor da = random_tensor(rng, d, level);
        TruncTensor db = random_tensor(rng, d, level);

        const double lhs_a = tensor_dot(cot, mul(da, b));
        CHECK(lhs_a == doctest::Approx(tensor_dot(mul_vjp_left(cot, b), da)).epsilon(1e-10));

        const double lhs_b = tensor_dot(cot, mul(a, db));
        CHECK(lhs_b == doctest::Approx(tensor_dot(mul_vjp_right(a, cot), db)).epsilon(1e-10));
    }
}

TEST_CASE("exp VJP matches finite differences") {
    Rng rng(8);
    for (int rep = 0; rep < 10; ++rep) {
        const int d = 1 + static_cast<int>(rng.below(3));
        const int level = 1 + static_cast<int>(rng.below(4));
        Eigen::VectorXd v(d);
        for (int i = 0; i < d; ++i) v[i] = 2.0 * rng.uniform() - 1.0;
        TruncTensor cot = random_tensor(rng, d, level);

        Eigen::VectorXd analytic = exp_vjp(v, cot);
        const double h = 1e-6;
        for (int i = 0; i < d; ++i) {
            Eigen::VectorXd vp = v, vm = v;
            vp[i] += h;
            vm[i] -= h;
            const double fd =
                (tensor_dot(cot, tensor_exp(vp, level)) - tensor_dot(cot, tensor_exp(vm, level))) /
                (2.0 * h);
            CHECK(analytic[i] == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("flatten/unflatten round trip") {
    Rng rng(9);
    TruncTensor t = random_tensor(rng, 3, 3);
    Eigen::VectorXd flat = flatten_levels(t, 1);
    CHECK(flat.size() == feature_count(3, 3));
    TruncTensor back = unflatten_levels(flat, 3, 3);
    CHECK(back.scalar() == 0.0);
    for (int n = 1; n <= 3; ++n)
        for (int i = 0; i < back.lev_size(n); ++i) CHECK(back.lev(n)[i] == t.lev(n)[i]);
}
