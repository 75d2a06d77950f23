#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "divlab/corpus.hpp"
#include "divlab/interval.hpp"
#include "divlab/quadrature.hpp"

namespace divlab {

namespace detail {

inline std::vector<double> binomial_row(int k) {
    std::vector<double> c(static_cast<std::size_t>(k) + 1, 1.0);
    for (int i = 1; i <= k; ++i)
        c[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i) - 1] * (k - i + 1) / i;
    return c;
}

} // namespace detail

/// Symmetric k-th finite difference with step u at x; exactly 0 when the
/// stencil x +- (k/2)u leaves [a, b].
template <class F>
double symmetric_difference(F&& f, int k, double u, double x, Interval I) {
    if (k < 1) throw std::domain_error("symmetric_difference: k >= 1 required");
    const double half = 0.5 * k * u;
    if (x - half < I.a || x + half > I.b) return 0.0;
    auto binom = detail::binomial_row(k);
    double acc = 0.0;
    double sign = 1.0;
    for (int i = 0; i <= k; ++i) {
        acc += sign * binom[static_cast<std::size_t>(i)] * f(x + (0.5 * k - i) * u);
        sign = -sign;
    }
    return acc;
}

/// Grid lower estimate of omega_k(f, t; [a,b]).
struct ModulusEstimate {
    int k = 0;
    double t = 0.0;
    Interval interval;
    double value = 0.0;
    int grid_x = 0;
    int grid_u = 0;
};

namespace detail {

/// max over an equispaced x-grid of |Delta^k_u| for one step u.
template <class F>
double sweep_x(F&& f, int k, double u, Interval I, int grid_x) {
    const double half = 0.5 * k * u;
    const double lo = I.a + half, hi = I.b - half;
    if (lo > hi) return 0.0;
    auto binom = binomial_row(k);
    double best = 0.0;
    const int n = std::max(grid_x, 1);
    for (int s = 0; s < n; ++s) {
        const double x = n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * s / (n - 1);
        double acc = 0.0, sign = 1.0;
        for (int i = 0; i <= k; ++i) {
            acc += sign * binom[static_cast<std::size_t>(i)] * f(x + (0.5 * k - i) * u);
            sign = -sign;
        }
        best = std::max(best, std::abs(acc));
    }
    return best;
}

} // namespace detail

/// Estimate omega_k(f, t; I) by sweeping a u-grid of (0, t] (clipped to the
/// admissible u <= |I|/k) against an x-grid. A certified lower bound.
template <class F>
ModulusEstimate modulus(F&& f, int k, double t, Interval I, int grid_x = 2048,
                        int grid_u = 512) {
    if (!(t > 0.0)) throw std::domain_error("modulus: t > 0 required");
    ModulusEstimate est{k, t, I, 0.0, grid_x, grid_u};
    const double umax = std::min(t, I.length() / k); // wider steps leave no admissible x
    for (int i = 1; i <= grid_u; ++i) {
        const double u = umax * i / grid_u;
        est.value = std::max(est.value, detail::sweep_x(f, k, u, I, grid_x));
    }
    return est;
}

/// Precomputed modulus profile u -> omega_k(f, u; I) as a nondecreasing
/// polyline on an anchored u-grid (prefix max of the sweep), constant once
/// the admissible step saturates. Cheap to evaluate inside integrals.
template <class F>
ModulusFunction modulus_curve(F&& f, int k, Interval I, int grid_x = 2048, int grid_u = 512,
                              double t_max = 0.0, std::string id = "omega_est") {
    const double cap = I.length() / k;
    PiecewiseLinear pl;
    pl.t.push_back(0.0);
    pl.v.push_back(0.0);
    double running = 0.0;
    for (int i = 1; i <= grid_u; ++i) {
        const double u = cap * i / grid_u;
        running = std::max(running, detail::sweep_x(f, k, u, I, grid_x));
        pl.t.push_back(u);
        pl.v.push_back(running);
    }
    if (t_max > pl.t.back()) {
        pl.t.push_back(t_max);
        pl.v.push_back(running);
    }
    return ModulusFunction::piecewise(std::move(id), std::move(pl));
}

/// Exact integral over [lo, hi] of u^e * phi(u) for a polyline phi
/// (closed form per segment; constant extension beyond the last node).
inline double integral_power_piecewise(const PiecewiseLinear& pl, double e, double lo,
                                       double hi) {
    if (hi <= lo) return 0.0;
    if (!(lo > 0.0)) throw std::domain_error("integral_power_piecewise: lo > 0 required");
    double total = 0.0;
    const std::size_t n = pl.t.size();
    for (std::size_t seg = 0; seg <= n; ++seg) {
        const double s0 = seg == 0 ? 0.0 : pl.t[seg - 1];
        const double s1 = seg < n ? pl.t[seg] : hi;
        const double a = std::max(lo, s0), b = std::min(hi, s1);
        if (a >= b) continue;
        double c0, c1;
        if (seg == 0) {
            c0 = pl.v.front();
            c1 = 0.0;
        } else if (seg == n) {
            c0 = pl.v.back();
            c1 = 0.0;
        } else {
            c1 = (pl.v[seg] - pl.v[seg - 1]) / (pl.t[seg] - pl.t[seg - 1]);
            c0 = pl.v[seg - 1] - c1 * pl.t[seg - 1];
        }
        total += c0 * integral_power(a, b, e) + c1 * integral_power(a, b, e + 1.0);
    }
    return total;
}

/// phi(t) = t^{k-1} Integral_t^d u^{-k} omega(u) du, realized with equality on
/// (0, d/2] and clamped by omega on (d/2, d]. Interior integrals are cached
/// on a geometric grid; every evaluation completes the bracket by quadrature.
inline ModulusFunction phi_from_omega(const ModulusFunction& omega, int k, double d,
                                      QuadratureSpec quad = {}) {
    if (k < 2) throw std::domain_error("phi_from_omega: k >= 2 required");
    if (!(d > 0.0)) throw std::domain_error("phi_from_omega: d > 0 required");
    if (!omega.is_phi())
        throw validation_error("phi_from_omega: omega fails Phi-membership");

    struct Cache {
        std::vector<double> nodes;  // ascending, last = d
        std::vector<double> suffix; // suffix[i] = Integral_{nodes[i]}^{d} u^{-k} omega du
        ModulusFunction omega;
        int k;
        double d;
        QuadratureSpec quad;

        double tail_integral(double t) const {
            if (t >= d) return 0.0;
            auto it = std::lower_bound(nodes.begin(), nodes.end(), t);
            std::size_t i = static_cast<std::size_t>(it - nodes.begin());
            auto integrand = [this](double u) { return std::pow(u, -k) * omega(u); };
            if (i == nodes.size()) i = nodes.size() - 1; // t < d <= nodes.back() handled above
            double bracket =
                t < nodes[i] ? integrate_adaptive(integrand, t, nodes[i], quad).value : 0.0;
            return bracket + suffix[i];
        }
    };

    auto cache = std::make_shared<Cache>();
    cache->omega = omega;
    cache->k = k;
    cache->d = d;
    cache->quad = quad;

    const int levels = 480;
    const double t_lo = d * 1e-7;
    cache->nodes.reserve(static_cast<std::size_t>(levels) + 8);
    for (int i = 0; i <= levels; ++i)
        cache->nodes.push_back(t_lo * std::pow(d / t_lo, static_cast<double>(i) / levels));
    cache->nodes.push_back(d / 2.0);
    for (double bp : omega.breakpoints())
        if (bp > t_lo && bp < d) cache->nodes.push_back(bp);
    std::sort(cache->nodes.begin(), cache->nodes.end());
    cache->nodes.erase(std::unique(cache->nodes.begin(), cache->nodes.end()),
                       cache->nodes.end());
    cache->nodes.back() = d;

    auto integrand = [cache](double u) { return std::pow(u, -cache->k) * cache->omega(u); };
    cache->suffix.assign(cache->nodes.size(), 0.0);
    for (std::size_t i = cache->nodes.size() - 1; i-- > 0;) {
        cache->suffix[i] = cache->suffix[i + 1] +
                           integrate_adaptive(integrand, cache->nodes[i], cache->nodes[i + 1],
                                              cache->quad)
                               .value;
    }

    std::vector<double> kinks{d / 2.0};
    for (double bp : omega.breakpoints())
        if (bp > 0.0 && bp < d) kinks.push_back(bp);
    std::sort(kinks.begin(), kinks.end());

    ModulusFunction omega_copy = omega;
    return ModulusFunction(
        "phi_from(" + omega.id() + ")",
        [cache, omega_copy, k, d](double t) {
            if (t <= 0.0) return 0.0;
            if (t >= d) return 0.0;
            double val = std::pow(t, k - 1) * cache->tail_integral(t);
            if (t > d / 2.0) val = std::min(val, omega_copy(t));
            return val;
        },
        d, std::move(kinks));
}

/// Discrete sup-norm over an equispaced grid of I.
template <class F>
double sup_norm(F&& f, Interval I, int grid_x = 2048) {
    double best = 0.0;
    const int n = std::max(grid_x, 2);
    for (int s = 0; s < n; ++s) {
        double x = I.a + I.length() * s / (n - 1);
        best = std::max(best, std::abs(f(x)));
    }
    return best;
}

/// Right-hand side of the Marchaud inequality, without the constant c(k):
///   t^l * ( Integral_t^{b-a} omega_k(F,u)/u^{l+1} du + ||F|| / (b-a)^l ).
template <class F>
double marchaud_rhs(F&& f, int ell, int k, double t, Interval I, int grid_x = 2048,
                    int grid_u = 512) {
    if (ell < 1 || ell >= k) throw std::domain_error("marchaud_rhs: requires 1 <= l < k");
    const double span = I.length();
    if (!(t > 0.0) || t > span) throw std::domain_error("marchaud_rhs: requires 0 < t <= b-a");
    double integral = 0.0;
    if (t < span) {
        auto curve = modulus_curve(f, k, I, grid_x, grid_u, span);
        integral = integral_power_piecewise(*curve.piecewise_nodes(),
                                            -static_cast<double>(ell) - 1.0, t, span);
    }
    const double norm = sup_norm(f, I, grid_x);
    return std::pow(t, ell) * (integral + norm / std::pow(span, ell));
}

} // namespace divlab
