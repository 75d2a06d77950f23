#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace divlab {

/// Dense polynomial in the monomial basis, lowest degree first.
/// Trailing coefficient is nonzero unless the polynomial is zero.
class MonomialPoly {
public:
    MonomialPoly() = default;
    explicit MonomialPoly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

    static MonomialPoly constant(double v) { return MonomialPoly({v}); }

    const std::vector<double>& coefficients() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero poly

    double operator()(double x) const {
        double acc = 0.0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    /// j-th derivative, exact coefficient arithmetic.
    MonomialPoly derivative(int j = 1) const {
        std::vector<double> d = c_;
        for (int pass = 0; pass < j; ++pass) {
            if (d.empty()) break;
            for (std::size_t i = 1; i < d.size(); ++i) d[i - 1] = d[i] * static_cast<double>(i);
            d.pop_back();
        }
        return MonomialPoly(std::move(d));
    }

    double eval_derivative(double x, int j) const { return derivative(j)(x); }

    /// p(x) <- p(x) * (x - center)
    void multiply_by_linear(double center) {
        c_.insert(c_.begin(), 0.0);
        for (std::size_t i = 0; i + 1 < c_.size(); ++i) c_[i] -= center * c_[i + 1];
        trim();
    }

    void add_constant(double v) {
        if (c_.empty()) c_.push_back(v);
        else c_[0] += v;
        trim();
    }

    MonomialPoly operator*(double s) const {
        std::vector<double> d = c_;
        for (double& v : d) v *= s;
        return MonomialPoly(std::move(d));
    }

    MonomialPoly operator+(const MonomialPoly& o) const {
        std::vector<double> d(std::max(c_.size(), o.c_.size()), 0.0);
        for (std::size_t i = 0; i < c_.size(); ++i) d[i] += c_[i];
        for (std::size_t i = 0; i < o.c_.size(); ++i) d[i] += o.c_[i];
        return MonomialPoly(std::move(d));
    }

    MonomialPoly operator-(const MonomialPoly& o) const { return *this + o * -1.0; }

    /// Composition with an affine map: returns q with q(x) = p(a*x + b).
    MonomialPoly compose_affine(double a, double b) const {
        MonomialPoly acc;
        for (std::size_t i = c_.size(); i-- > 0;) {
            // acc <- acc * (a x + b) + c_i
            std::vector<double> next(acc.c_.size() + 1, 0.0);
            for (std::size_t k = 0; k < acc.c_.size(); ++k) {
                next[k + 1] += a * acc.c_[k];
                next[k] += b * acc.c_[k];
            }
            acc = MonomialPoly(std::move(next));
            acc.add_constant(c_[i]);
        }
        return acc;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
    }

    std::vector<double> c_;
};

} // namespace divlab
