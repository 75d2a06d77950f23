#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "divlab/errors.hpp"

namespace divlab {

/// Adaptive bisection with a 5-point closed rule.
struct QuadratureSpec {
    double rel_tol = 1e-10;
    int max_depth = 40;
};

struct QuadratureResult {
    double value = 0.0;
    double error_bound = 0.0;
};

namespace detail {

template <class F>
double boole(F&& f, double a, double b) {
    const double h = (b - a) / 4.0;
    return (2.0 * h / 45.0) *
           (7.0 * f(a) + 32.0 * f(a + h) + 12.0 * f(a + 2 * h) + 32.0 * f(a + 3 * h) +
            7.0 * f(b));
}

template <class F>
void adapt(F&& f, double a, double b, double whole, double tol, int depth,
           const QuadratureSpec& spec, QuadratureResult& out) {
    // Steep integrands (negative powers of u) decay from the left endpoint:
    // split at the geometric mean when the interval spans many octaves.
    double mid = (a > 0.0 && b / a > 16.0) ? std::sqrt(a * b) : 0.5 * (a + b);
    double left = boole(f, a, mid);
    double right = boole(f, mid, b);
    double err = std::abs(left + right - whole) / 63.0; // Richardson factor for the 5-point rule
    if (err <= tol || depth >= spec.max_depth) {
        out.value += left + right;
        out.error_bound += err;
        return;
    }
    adapt(f, a, mid, left, tol / 2.0, depth + 1, spec, out);
    adapt(f, mid, b, right, tol / 2.0, depth + 1, spec, out);
}

} // namespace detail

/// Integrate f over [a, b]. Throws accuracy_error (carrying the achieved
/// bound) when the requested relative tolerance cannot be met.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, QuadratureSpec spec = {}) {
    QuadratureResult out;
    if (!(a <= b)) throw std::domain_error("integrate_adaptive: requires a <= b");
    if (a == b) return out;
    double whole = detail::boole(f, a, b);
    // The crude whole-interval estimate can be off by orders of magnitude for
    // steep integrands; re-run whenever the measured value shrinks the scale.
    double scale = std::max(std::abs(whole), 1e-300);
    for (int pass = 0; pass < 6; ++pass) {
        out = QuadratureResult{};
        detail::adapt(f, a, b, whole, spec.rel_tol * scale, 0, spec, out);
        double measured = std::max(std::abs(out.value), 1e-300);
        if (measured >= scale / 4.0) break;
        scale = measured;
    }
    double limit = spec.rel_tol * std::max(std::abs(out.value), 1e-300) * 8.0;
    if (out.error_bound > limit && out.error_bound > 1e-300)
        throw accuracy_error("quadrature did not reach requested tolerance", out.error_bound);
    return out;
}

/// Same, but pre-split at the interior breakpoints (integrand kinks).
template <class F>
QuadratureResult integrate_adaptive_split(F&& f, double a, double b,
                                          std::span<const double> breakpoints,
                                          QuadratureSpec spec = {}) {
    std::vector<double> cuts{a};
    for (double c : breakpoints)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    QuadratureResult total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        auto piece = integrate_adaptive(f, cuts[i], cuts[i + 1], spec);
        total.value += piece.value;
        total.error_bound += piece.error_bound;
    }
    return total;
}

/// Exact integral of u^e over [s0, s1], 0 < s0 <= s1, stable when s1/s0 ~ 1.
inline double integral_power(double s0, double s1, double e) {
    if (s1 <= s0) return 0.0;
    double lr = std::log1p((s1 - s0) / s0); // log(s1/s0)
    if (e == -1.0) return lr;
    return std::pow(s0, e + 1.0) * std::expm1((e + 1.0) * lr) / (e + 1.0);
}

} // namespace divlab
