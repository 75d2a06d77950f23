#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "divlab/errors.hpp"

namespace divlab::detail {

/// Dense square matrix, row-major.
struct DenseMatrix {
    int n = 0;
    std::vector<double> a;

    explicit DenseMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}
    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

/// Gaussian elimination with full pivoting. Throws conditioning_error when a
/// pivot falls below rel_floor times the largest initial entry.
inline std::vector<double> solve_full_pivot(DenseMatrix A, std::vector<double> b,
                                            double rel_floor = 1e-13) {
    const int n = A.n;
    std::vector<int> col_of(static_cast<std::size_t>(n)); // column permutation
    for (int j = 0; j < n; ++j) col_of[static_cast<std::size_t>(j)] = j;

    double max0 = 0.0;
    for (double v : A.a) max0 = std::max(max0, std::abs(v));
    if (max0 == 0.0) throw conditioning_error("solve: zero matrix");

    for (int step = 0; step < n; ++step) {
        int pi = step, pj = step;
        double best = 0.0;
        for (int i = step; i < n; ++i)
            for (int j = step; j < n; ++j)
                if (std::abs(A.at(i, j)) > best) {
                    best = std::abs(A.at(i, j));
                    pi = i;
                    pj = j;
                }
        if (best <= rel_floor * max0)
            throw conditioning_error("solve: numerically singular system");
        if (pi != step) {
            for (int j = 0; j < n; ++j) std::swap(A.at(step, j), A.at(pi, j));
            std::swap(b[static_cast<std::size_t>(step)], b[static_cast<std::size_t>(pi)]);
        }
        if (pj != step) {
            for (int i = 0; i < n; ++i) std::swap(A.at(i, step), A.at(i, pj));
            std::swap(col_of[static_cast<std::size_t>(step)], col_of[static_cast<std::size_t>(pj)]);
        }
        for (int i = step + 1; i < n; ++i) {
            double factor = A.at(i, step) / A.at(step, step);
            if (factor == 0.0) continue;
            A.at(i, step) = 0.0;
            for (int j = step + 1; j < n; ++j) A.at(i, j) -= factor * A.at(step, j);
            b[static_cast<std::size_t>(i)] -= factor * b[static_cast<std::size_t>(step)];
        }
    }

    std::vector<double> y(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        double acc = b[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) acc -= A.at(i, j) * y[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = acc / A.at(i, i);
    }

    std::vector<double> x(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(col_of[static_cast<std::size_t>(j)])] =
        y[static_cast<std::size_t>(j)];
    return x;
}

} // namespace divlab::detail
