#pragma once

#include <cmath>
#include <vector>

#include "divlab/corpus.hpp"
#include "divlab/knots.hpp"
#include "divlab/quadrature.hpp"
#include "divlab/smoothness.hpp"

namespace divlab {

struct LambdaResult {
    double value = 0.0;
    IndexPair argmax_pair;
    double quadrature_error_bound = 0.0;
};

/// Lambda_{p,q,r}(x_0,...,x_m; phi) =
///   Integral_{x_q-x_p}^{d(p,q)} u^{p+r-q-1} phi(u) du
///   / ( prod_{i<p}(x_q-x_i) * prod_{i>q}(x_i-x_p) ),   empty products = 1.
/// Polyline phi integrates in closed form per segment; anything else goes
/// through adaptive quadrature split at the declared breakpoints.
inline double lambda_pqr(const KnotSet& X, int r, IndexPair pair, const ModulusFunction& phi,
                         QuadratureSpec quad = {}, double* error_bound = nullptr) {
    const int m = X.order();
    if (pair.p < 0 || pair.q > m || pair.q - pair.p < r + 1)
        throw std::domain_error("lambda_pqr: pair outside Q_{m,r}");

    const double lo = X.x(pair.q) - X.x(pair.p);
    const double hi = d_pq(X, pair);
    const double e = static_cast<double>(pair.p + r - pair.q - 1);

    double integral = 0.0, bound = 0.0;
    if (hi > lo) {
        if (const PiecewiseLinear* pl = phi.piecewise_nodes()) {
            integral = integral_power_piecewise(*pl, e, lo, hi);
        } else {
            auto res = integrate_adaptive_split(
                [&](double u) { return std::pow(u, e) * phi(u); }, lo, hi, phi.breakpoints(),
                quad);
            integral = res.value;
            bound = res.error_bound;
        }
    }

    double value;
    if (m > 8) {
        // tightly clustered knots underflow the plain product
        double log_denom = 0.0;
        for (int i = 0; i < pair.p; ++i) log_denom += std::log(X.x(pair.q) - X.x(i));
        for (int i = pair.q + 1; i <= m; ++i) log_denom += std::log(X.x(i) - X.x(pair.p));
        value = integral == 0.0
                    ? 0.0
                    : std::copysign(std::exp(std::log(std::abs(integral)) - log_denom), integral);
        if (error_bound) *error_bound = bound == 0.0 ? 0.0 : std::exp(std::log(bound) - log_denom);
    } else {
        double denom = 1.0;
        for (int i = 0; i < pair.p; ++i) denom *= (X.x(pair.q) - X.x(i));
        for (int i = pair.q + 1; i <= m; ++i) denom *= (X.x(i) - X.x(pair.p));
        value = integral / denom;
        if (error_bound) *error_bound = bound / denom;
    }
    return value;
}

/// Lambda_r = max over Q_{m,r}; ties keep the lexicographically first pair.
inline LambdaResult lambda_r(const KnotSet& X, int r, const ModulusFunction& phi,
                             QuadratureSpec quad = {}) {
    const int m = X.order();
    auto pairs = q_set(m, r);
    if (pairs.empty())
        throw std::domain_error("lambda_r undefined: Q_{m,r} empty (m <= r)");
    LambdaResult best;
    bool first = true;
    for (const auto& pair : pairs) {
        double bound = 0.0;
        double v = lambda_pqr(X, r, pair, phi, quad, &bound);
        if (first || v > best.value) {
            best.value = v;
            best.argmax_pair = pair;
            best.quadrature_error_bound = bound;
            first = false;
        }
    }
    return best;
}

} // namespace divlab
