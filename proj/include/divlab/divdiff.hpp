#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "divlab/corpus.hpp"
#include "divlab/knots.hpp"
#include "divlab/linalg.hpp"
#include "divlab/poly.hpp"

namespace divlab {

/// Hermite interpolant in Newton form: coefficient j is the divided
/// difference over the first j+1 expanded knots.
struct NewtonForm {
    std::vector<double> centers;      // x_0, ..., x_{m-1}
    std::vector<double> coefficients; // [x_0;f], ..., [x_0,...,x_m;f]

    int degree_bound() const { return static_cast<int>(coefficients.size()) - 1; }

    MonomialPoly to_monomial() const {
        MonomialPoly acc;
        for (std::size_t j = coefficients.size(); j-- > 0;) {
            if (j < centers.size()) acc.multiply_by_linear(centers[j]);
            acc.add_constant(coefficients[j]);
        }
        return acc;
    }
};

namespace detail {

inline double factorial(int n) {
    double acc = 1.0;
    for (int i = 2; i <= n; ++i) acc *= i;
    return acc;
}

/// All Newton coefficients [x_0..x_j; f], j = 0..m, by the two-branch
/// recursion over contiguous expanded ranges (one O(m^2) in-place table).
inline std::vector<double> newton_coefficients(const KnotSet& X, const SmoothFunction& f) {
    const int m = X.order();
    const int needed = X.max_multiplicity() - 1;
    if (needed > 0 && f.max_derivative_order() < needed)
        throw capability_error(f.id() + ": knot multiplicities require derivative order " +
                               std::to_string(needed));

    // table[j] holds [x_{j-L}, ..., x_j; f] after processing level L
    std::vector<double> table(static_cast<std::size_t>(m) + 1);
    std::vector<double> coeffs(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j <= m; ++j) table[static_cast<std::size_t>(j)] = f.eval(X.x(j), 0);
    coeffs[0] = table[0];
    for (int level = 1; level <= m; ++level) {
        for (int j = m; j >= level; --j) {
            if (X.same_knot(j - level, j)) {
                table[static_cast<std::size_t>(j)] =
                    f.eval(X.x(j), level) / factorial(level);
            } else {
                table[static_cast<std::size_t>(j)] =
                    (table[static_cast<std::size_t>(j)] - table[static_cast<std::size_t>(j) - 1]) /
                    (X.x(j) - X.x(j - level));
            }
        }
        coeffs[static_cast<std::size_t>(level)] = table[static_cast<std::size_t>(level)];
    }
    return coeffs;
}

} // namespace detail

/// [x_0, ..., x_m; f], the divided (Lagrange-Hermite) difference.
inline double divided_difference(const KnotSet& X, const SmoothFunction& f) {
    return detail::newton_coefficients(X, f).back();
}

/// Hermite interpolant of degree <= m matching f^(l_j - 1)(x_j) at every knot.
inline NewtonForm newton_hermite(const KnotSet& X, const SmoothFunction& f) {
    NewtonForm form;
    form.coefficients = detail::newton_coefficients(X, f);
    form.centers = X.expanded_values();
    form.centers.pop_back();
    return form;
}

/// j-th derivative of the interpolant at x, via monomial expansion.
inline double eval_newton(const NewtonForm& P, double x, int j = 0) {
    if (j < 0) throw std::domain_error("eval_newton: negative derivative order");
    if (j > P.degree_bound()) return 0.0;
    return P.to_monomial().eval_derivative(x, j);
}

/// Leading coefficient of the Hermite interpolant, computed independently of
/// the recursion: assemble the (m+1)x(m+1) confluent Vandermonde system in
/// the monomial basis and solve it with full pivoting.
inline double oracle_leading_coeff(const KnotSet& X, const SmoothFunction& f) {
    const int n = X.size();
    detail::DenseMatrix A(n);
    std::vector<double> rhs(static_cast<std::size_t>(n));
    for (int row = 0; row < n; ++row) {
        const double xj = X.x(row);
        const int l = X.local_index(row) - 1; // derivative order matched at this entry
        for (int s = l; s < n; ++s)
            A.at(row, s) = detail::falling_factorial(static_cast<double>(s), l) *
                           detail::ipow(xj, s - l);
        rhs[static_cast<std::size_t>(row)] = f.eval(xj, l);
    }
    auto sol = detail::solve_full_pivot(std::move(A), std::move(rhs));
    return sol.back();
}

/// Both sides of the simple-knot identity: the full divided difference vs.
/// the interpolation-error quotient at a simple knot x_{j*}.
inline std::pair<double, double> simple_knot_error_identity(const KnotSet& X,
                                                            const SmoothFunction& f,
                                                            int j_star) {
    if (X.multiplicity(j_star) != 1)
        throw std::domain_error("simple_knot_error_identity: knot is not simple");
    const double xs = X.x(j_star);
    std::vector<double> rest;
    for (int j = 0; j < X.size(); ++j)
        if (j != j_star) rest.push_back(X.x(j));
    KnotSet Xrest{std::span<const double>(rest.data(), rest.size())};
    NewtonForm L = newton_hermite(Xrest, f);
    double denom = 1.0;
    for (double xj : rest) denom *= (xs - xj);
    double lhs = divided_difference(X, f);
    double rhs = (f.eval(xs, 0) - eval_newton(L, xs, 0)) / denom;
    return {lhs, rhs};
}

} // namespace divlab
