#pragma once

#include "sigaug/series.hpp"
#include "sigaug/tensor.hpp"

#include <utility>
#include <vector>

namespace sigaug {

/// Shape parameters of the normalization function psi.
///
/// psi(sqrt(x)) = x for x <= C, and C + (C^{1+a}/a)(C^{-a} - x^{-a}) beyond,
/// which is bounded by R^2 = C (1 + 1/a), injective, Lipschitz, and C^1 at
/// the branch point.
struct NormConfig {
    double C = 4.0;        // shape parameter, >= 1
    double a = 1.0;        // tail exponent, > 0
    double solve_tol = 1e-12;
    int max_iter = 200;

    /// Bound on the norm of normalized tensors: sqrt(C (1 + 1/a)).
    double R() const;
    void validate() const;
};

/// psi evaluated at u >= 1.
double psi(double u, const NormConfig& cfg);

/// d psi / du. At u^2 >= C the one-sided tail-branch derivative is used,
/// which keeps the value deterministic under floating-point equality; both
/// branch derivatives agree at the branch point.
double psi_prime(double u, const NormConfig& cfg);

/// The unique lambda > 0 with |dilate(t, lambda)|^2 = psi(|t|); t must be
/// group-like. Returns exactly 1 on the identity branch (|t|^2 <= C) and for
/// the unit tensor. Bracketed bisection with Newton polishing; throws if the
/// residual cannot be brought below cfg.solve_tol within cfg.max_iter steps.
double solve_lambda(const TruncTensor& t, const NormConfig& cfg);

/// (dilate(t, lambda), lambda); the output norm squared equals psi(|t|).
std::pair<TruncTensor, double> normalize(const TruncTensor& t, const NormConfig& cfg);

/// Gradient of solve_lambda with respect to every coefficient of levels
/// 1..L, returned as a tensor whose level-0 slot is zero. Undefined at the
/// unit tensor (throws).
TruncTensor lambda_gradient(const TruncTensor& t, const NormConfig& cfg);
/// Same, with the solved lambda supplied by the caller.
TruncTensor lambda_gradient(const TruncTensor& t, const NormConfig& cfg, double lambda);

/// lambda of the level-L truncations (1, t^1, ..., t^L, 0, ...) of
/// signature(x, level_max), for L = 1..level_max.
std::vector<std::pair<int, double>> lambda_truncation_curve(const TimeSeries& x,
                                                            const NormConfig& cfg,
                                                            int level_max);

}  // namespace sigaug
