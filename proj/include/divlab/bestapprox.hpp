#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "divlab/errors.hpp"
#include "divlab/interval.hpp"
#include "divlab/linalg.hpp"
#include "divlab/poly.hpp"

namespace divlab {

struct MinimaxResult {
    MonomialPoly polynomial;                  // in the original coordinates
    double error = 0.0;                       // discrete sup-norm on the grid
    std::vector<double> equioscillation_points;
    int iterations = 0;
};

/// Discrete Remez exchange on Chebyshev-distributed grid points
/// x_j = mid + halfwidth * cos(j*pi/grid), j = 0..grid. Terminates when the
/// levelled reference error agrees with the grid sup error to 1e-9 relative,
/// or throws convergence_error after 100 exchanges.
template <class F>
MinimaxResult remez_discrete(F&& f, int degree, Interval I, int grid = 4096) {
    if (degree < 0) throw std::domain_error("remez_discrete: degree >= 0 required");
    if (grid < degree + 2) throw std::domain_error("remez_discrete: grid >= n+2 required");

    const int npts = grid + 1;
    const double mid = I.midpoint(), halfw = 0.5 * I.length();
    std::vector<double> s(static_cast<std::size_t>(npts)); // normalized grid, ascending
    std::vector<double> fv(static_cast<std::size_t>(npts));
    for (int j = 0; j < npts; ++j) {
        double c = std::cos(3.14159265358979323846 * (grid - j) / grid);
        if (j == 0) c = -1.0;
        if (j == npts - 1) c = 1.0;
        s[static_cast<std::size_t>(j)] = c;
        fv[static_cast<std::size_t>(j)] = f(mid + halfw * c);
    }

    const int nref = degree + 2;
    std::vector<int> ref(static_cast<std::size_t>(nref));
    for (int i = 0; i < nref; ++i) {
        // Chebyshev extrema of degree n+1, snapped to the grid
        double target = -std::cos(3.14159265358979323846 * i / (nref - 1));
        auto it = std::lower_bound(s.begin(), s.end(), target);
        int idx = static_cast<int>(std::min<std::size_t>(
            static_cast<std::size_t>(it - s.begin()), s.size() - 1));
        if (idx > 0 && std::abs(s[static_cast<std::size_t>(idx - 1)] - target) <
                           std::abs(s[static_cast<std::size_t>(idx)] - target))
            --idx;
        ref[static_cast<std::size_t>(i)] = idx;
    }
    for (int i = 1; i < nref; ++i) // dedupe, grid is dense
        if (ref[static_cast<std::size_t>(i)] <= ref[static_cast<std::size_t>(i - 1)])
            ref[static_cast<std::size_t>(i)] = ref[static_cast<std::size_t>(i - 1)] + 1;
    for (int i = nref - 1; i >= 0; --i) // stay on the grid
        ref[static_cast<std::size_t>(i)] =
            std::min(ref[static_cast<std::size_t>(i)], npts - 1 - (nref - 1 - i));

    MonomialPoly p_norm;
    double level = 0.0;
    std::vector<double> resid(static_cast<std::size_t>(npts));
    const int max_iter = 100;
    int iter = 0;

    for (iter = 1; iter <= max_iter; ++iter) {
        // levelled system: p(s_i) + (-1)^i h = f_i on the reference
        detail::DenseMatrix A(nref);
        std::vector<double> rhs(static_cast<std::size_t>(nref));
        for (int i = 0; i < nref; ++i) {
            double si = s[static_cast<std::size_t>(ref[static_cast<std::size_t>(i)])];
            double pw = 1.0;
            for (int c = 0; c <= degree; ++c) {
                A.at(i, c) = pw;
                pw *= si;
            }
            A.at(i, degree + 1) = (i % 2 == 0) ? 1.0 : -1.0;
            rhs[static_cast<std::size_t>(i)] = fv[static_cast<std::size_t>(
                ref[static_cast<std::size_t>(i)])];
        }
        auto sol = detail::solve_full_pivot(std::move(A), std::move(rhs));
        level = std::abs(sol.back());
        sol.pop_back();
        p_norm = MonomialPoly(std::move(sol));

        double emax = 0.0;
        for (int j = 0; j < npts; ++j) {
            resid[static_cast<std::size_t>(j)] =
                fv[static_cast<std::size_t>(j)] - p_norm(s[static_cast<std::size_t>(j)]);
            emax = std::max(emax, std::abs(resid[static_cast<std::size_t>(j)]));
        }

        if (emax <= level * (1.0 + 1e-9) || emax < 1e-14 * (1.0 + std::abs(fv[0]))) break;

        // candidate extrema: strongest point of each sign run of the residual
        std::vector<int> cand;
        int run_best = 0;
        int run_sign = resid[0] >= 0.0 ? 1 : -1;
        for (int j = 1; j < npts; ++j) {
            double rj = resid[static_cast<std::size_t>(j)];
            int sign = rj > 0.0 ? 1 : (rj < 0.0 ? -1 : run_sign);
            if (sign != run_sign) {
                cand.push_back(run_best);
                run_sign = sign;
                run_best = j;
            } else if (std::abs(rj) >
                       std::abs(resid[static_cast<std::size_t>(run_best)])) {
                run_best = j;
            }
        }
        cand.push_back(run_best);

        if (static_cast<int>(cand.size()) < nref) {
            if (emax <= level * (1.0 + 1e-6)) break;
            throw convergence_error(
                "remez_discrete: exchange stagnated with too few alternations (iter " +
                std::to_string(iter) + ", level " + std::to_string(level) + ", grid error " +
                std::to_string(emax) + ")");
        }

        while (static_cast<int>(cand.size()) > nref) {
            std::size_t weakest = 0;
            for (std::size_t i = 1; i < cand.size(); ++i)
                if (std::abs(resid[static_cast<std::size_t>(cand[i])]) <
                    std::abs(resid[static_cast<std::size_t>(cand[weakest])]))
                    weakest = i;
            if (weakest == 0) {
                cand.erase(cand.begin());
            } else if (weakest + 1 == cand.size()) {
                cand.pop_back();
            } else {
                // drop the weak interior point and its weaker neighbor to keep alternation
                std::size_t other =
                    std::abs(resid[static_cast<std::size_t>(cand[weakest - 1])]) <
                            std::abs(resid[static_cast<std::size_t>(cand[weakest + 1])])
                        ? weakest - 1
                        : weakest + 1;
                auto hi_it = cand.begin() + static_cast<std::ptrdiff_t>(std::max(weakest, other));
                cand.erase(hi_it);
                cand.erase(cand.begin() + static_cast<std::ptrdiff_t>(std::min(weakest, other)));
            }
        }

        bool changed = false;
        for (int i = 0; i < nref; ++i)
            if (ref[static_cast<std::size_t>(i)] != cand[static_cast<std::size_t>(i)]) {
                changed = true;
                break;
            }
        ref.assign(cand.begin(), cand.end());
        if (!changed)
            throw convergence_error("remez_discrete: exchange stagnated (iter " +
                                    std::to_string(iter) + ")");
    }
    if (iter > max_iter)
        throw convergence_error("remez_discrete: no convergence after 100 exchanges");

    MinimaxResult out;
    out.iterations = iter;
    // p_norm(s), s = (x - mid)/halfw
    out.polynomial = p_norm.compose_affine(1.0 / halfw, -mid / halfw);
    double emax = 0.0;
    for (int j = 0; j < npts; ++j) emax = std::max(emax, std::abs(resid[static_cast<std::size_t>(j)]));
    out.error = emax;
    for (int i = 0; i < degree + 2; ++i)
        out.equioscillation_points.push_back(
            mid + halfw * s[static_cast<std::size_t>(ref[static_cast<std::size_t>(i)])]);
    return out;
}

} // namespace divlab
