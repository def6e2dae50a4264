#include "sigaug/normalization.hpp"

#include "sigaug/signature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sigaug {

double NormConfig::R() const { return std::sqrt(C * (1.0 + 1.0 / a)); }

void NormConfig::validate() const {
    if (!(C >= 1.0)) throw std::invalid_argument("NormConfig: C must be >= 1");
    if (!(a > 0.0)) throw std::invalid_argument("NormConfig: a must be > 0");
    if (!(solve_tol > 0.0)) throw std::invalid_argument("NormConfig: solve_tol must be > 0");
    if (max_iter < 1) throw std::invalid_argument("NormConfig: max_iter must be >= 1");
}

double psi(double u, const NormConfig& cfg) {
    cfg.validate();
    if (!(u >= 1.0)) throw std::domain_error("psi is defined on [1, inf)");
    const double x = u * u;
    if (x <= cfg.C) return x;
    // C + (C^{1+a}/a)(C^{-a} - x^{-a}), written with (C/x)^a to avoid overflow
    return cfg.C + (cfg.C / cfg.a) * (1.0 - std::pow(cfg.C / x, cfg.a));
}

double psi_prime(double u, const NormConfig& cfg) {
    cfg.validate();
    if (!(u >= 1.0)) throw std::domain_error("psi is defined on [1, inf)");
    const double x = u * u;
    if (x < cfg.C) return 2.0 * u;
    return (2.0 * cfg.C / u) * std::pow(cfg.C / x, cfg.a);
}

namespace {

// sum_{n>=1} s_n lam^{2n} and its lambda-derivative, via Horner in lam^2
double dilated_mass(const std::vector<double>& s, double lam) {
    const double l2 = lam * lam;
    double acc = 0.0;
    for (int n = static_cast<int>(s.size()) - 1; n >= 1; --n) acc = (acc + s[n]) * l2;
    return acc;
}

double dilated_mass_dlam(const std::vector<double>& s, double lam) {
    const double l2 = lam * lam;
    double acc = 0.0;
    for (int n = static_cast<int>(s.size()) - 1; n >= 1; --n) acc = acc * l2 + n * s[n];
    return 2.0 * lam * acc;
}

}  // namespace

double solve_lambda(const TruncTensor& t, const NormConfig& cfg) {
    cfg.validate();
    if (!t.group_like())
        throw std::invalid_argument("normalization requires a group-like tensor (level-0 == 1)");
    const std::vector<double> s = level_squared_norms(t);
    double mass = 0.0;
    for (std::size_t n = 1; n < s.size(); ++n) mass += s[n];
    if (mass == 0.0) return 1.0;  // unit tensor: any lambda is consistent
    const double normsq = 1.0 + mass;
    if (normsq <= cfg.C) return 1.0;  // identity branch: psi(|t|) = |t|^2

    const double target = psi(std::sqrt(normsq), cfg) - 1.0;
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (dilated_mass(s, hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (++guard > cfg.max_iter)
            throw std::runtime_error("solve_lambda: failed to bracket the root");
    }

    double x = 0.5 * (lo + hi);
    for (int it = 0; it < cfg.max_iter; ++it) {
        const double r = dilated_mass(s, x) - target;
        if (std::abs(r) <= cfg.solve_tol) return x;
        if (r > 0.0)
            hi = x;
        else
            lo = x;
        const double drdx = dilated_mass_dlam(s, x);
        double next = drdx > 0.0 ? x - r / drdx : lo;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    throw std::runtime_error("solve_lambda: no convergence within max_iter (residual tol " +
                             std::to_string(cfg.solve_tol) + ")");
}

std::pair<TruncTensor, double> normalize(const TruncTensor& t, const NormConfig& cfg) {
    const double lam = solve_lambda(t, cfg);
    return {dilate(t, lam), lam};
}

TruncTensor lambda_gradient(const TruncTensor& t, const NormConfig& cfg) {
    return lambda_gradient(t, cfg, solve_lambda(t, cfg));
}

TruncTensor lambda_gradient(const TruncTensor& t, const NormConfig& cfg, double lambda) {
    cfg.validate();
    if (!t.group_like())
        throw std::invalid_argument("normalization requires a group-like tensor (level-0 == 1)");
    const std::vector<double> s = level_squared_norms(t);
    double mass = 0.0;
    for (std::size_t n = 1; n < s.size(); ++n) mass += s[n];
    if (mass == 0.0)
        throw std::invalid_argument("lambda_gradient is singular at the unit tensor");

    const double u = std::sqrt(1.0 + mass);
    const double dpsi = psi_prime(u, cfg);
    // denominator of the implicit-function-theorem quotient
    double denom = 0.0;
    double lpow = lambda;  // lambda^{2n-1}
    for (int n = 1; n <= t.level(); ++n) {
        denom += n * lpow * s[n];
        lpow *= lambda * lambda;
    }

    TruncTensor out(t.dim(), t.level());
    double l2n = 1.0;  // lambda^{2n}
    for (int n = 1; n <= t.level(); ++n) {
        l2n *= lambda * lambda;
        const double factor = (dpsi / (2.0 * u) - l2n) / denom;
        auto src = t.lev(n);
        auto dst = out.lev(n);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] * factor;
    }
    return out;
}

std::vector<std::pair<int, double>> lambda_truncation_curve(const TimeSeries& x,
                                                            const NormConfig& cfg,
                                                            int level_max) {
    if (level_max < 1) throw std::invalid_argument("lambda_truncation_curve needs level_max >= 1");
    const TruncTensor full = signature(x, level_max);
    std::vector<std::pair<int, double>> curve;
    curve.reserve(level_max);
    for (int L = 1; L <= level_max; ++L) {
        TruncTensor trunc(full.dim(), L);
        trunc.scalar() = 1.0;
        for (int n = 1; n <= L; ++n) {
            auto src = full.lev(n);
            auto dst = trunc.lev(n);
            for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
        }
        curve.emplace_back(L, solve_lambda(trunc, cfg));
    }
    return curve;
}

}  // namespace sigaug
