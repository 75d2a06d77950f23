#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "divlab/errors.hpp"
#include "divlab/interval.hpp"

namespace divlab {

inline constexpr int kUnboundedOrder = std::numeric_limits<int>::max();

namespace detail {

inline double ipow(double x, int n) {
    double acc = 1.0, base = x;
    for (int e = n; e > 0; e >>= 1) {
        if (e & 1) acc *= base;
        base *= base;
    }
    return acc;
}

/// s * (s-1) * ... * (s-j+1)
inline double falling_factorial(double s, int j) {
    double acc = 1.0;
    for (int i = 0; i < j; ++i) acc *= (s - i);
    return acc;
}

} // namespace detail

/// Nondecreasing sample polyline through (t_i, v_i); constant beyond the
/// last node. Used for plin phi functions and estimated modulus curves.
struct PiecewiseLinear {
    std::vector<double> t;
    std::vector<double> v;

    double eval(double x) const {
        if (x <= t.front()) return v.front();
        if (x >= t.back()) return v.back();
        auto it = std::upper_bound(t.begin(), t.end(), x);
        std::size_t i = static_cast<std::size_t>(it - t.begin()); // t[i-1] <= x < t[i]
        double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
        return v[i - 1] + w * (v[i] - v[i - 1]);
    }
};

/// A Phi-class candidate: phi(0) = 0, nondecreasing. Membership is a
/// checkable property, enforced for registry functions and for inputs of
/// phi_from_omega; derived functions (estimated moduli transforms) may
/// fail it and are still representable.
class ModulusFunction {
public:
    ModulusFunction() = default;

    ModulusFunction(std::string id, std::function<double(double)> f, double domain_end,
                    std::vector<double> breakpoints = {})
        : id_(std::move(id)), fn_(std::move(f)), domain_end_(domain_end),
          breakpoints_(std::move(breakpoints)) {}

    static ModulusFunction piecewise(std::string id, PiecewiseLinear nodes) {
        ModulusFunction m;
        m.id_ = std::move(id);
        m.domain_end_ = nodes.t.back();
        m.pl_ = std::make_shared<PiecewiseLinear>(std::move(nodes));
        return m;
    }

    double operator()(double t) const { return pl_ ? pl_->eval(t) : fn_(t); }

    const std::string& id() const { return id_; }
    double domain_end() const { return domain_end_; }

    /// Interior kink locations, used to pre-split quadratures.
    std::span<const double> breakpoints() const {
        if (pl_) return std::span<const double>(pl_->t);
        return std::span<const double>(breakpoints_);
    }

    /// Non-null when the function is exactly a polyline.
    const PiecewiseLinear* piecewise_nodes() const { return pl_.get(); }

    /// Grid test of Phi-membership: eval(0) == 0 and nondecreasing.
    bool is_phi(int grid = 1024, double tol = 0.0) const {
        if ((*this)(0.0) != 0.0) return false;
        double prev = 0.0;
        for (int i = 1; i <= grid; ++i) {
            double t = domain_end_ * static_cast<double>(i) / grid;
            double val = (*this)(t);
            if (val + tol < prev) return false;
            prev = val;
        }
        return true;
    }

private:
    std::string id_;
    std::function<double(double)> fn_;
    double domain_end_ = 0.0;
    std::vector<double> breakpoints_;
    std::shared_ptr<const PiecewiseLinear> pl_;
};

/// A corpus member: point evaluation plus exact derivatives up to a
/// declared order, with an optional exact modulus of smoothness.
class SmoothFunction {
public:
    using Eval = std::function<double(double, int)>;
    /// (k, t, interval, r) -> exact value of omega_k(f^{(r)}, t, interval), when known.
    using ClosedModulus = std::function<std::optional<double>(int, double, Interval, int)>;

    SmoothFunction() = default;
    SmoothFunction(std::string id, Interval domain, int max_order, Eval eval,
                   ClosedModulus closed = nullptr)
        : id_(std::move(id)), domain_(domain), max_order_(max_order),
          eval_(std::move(eval)), closed_(std::move(closed)) {}

    const std::string& id() const { return id_; }
    const Interval& domain() const { return domain_; }
    int max_derivative_order() const { return max_order_; }

    double eval(double x, int j = 0) const {
        if (j < 0) throw std::domain_error("SmoothFunction: negative derivative order");
        if (j > max_order_)
            throw capability_error(id_ + ": derivative order " + std::to_string(j) +
                                   " exceeds declared order " + std::to_string(max_order_));
        return eval_(x, j);
    }

    double operator()(double x) const { return eval(x, 0); }

    std::optional<double> closed_form_modulus(int k, double t, Interval I, int r = 0) const {
        if (!closed_) return std::nullopt;
        return closed_(k, t, I, r);
    }

    /// Lightweight callable view of the j-th derivative.
    class DerivView {
    public:
        DerivView(const SmoothFunction& f, int j) : f_(&f), j_(j) {}
        double operator()(double x) const { return f_->eval(x, j_); }
        int order() const { return j_; }

    private:
        const SmoothFunction* f_;
        int j_;
    };

    DerivView view(int j = 0) const { return DerivView(*this, j); }

private:
    std::string id_;
    Interval domain_{-1.0, 1.0};
    int max_order_ = 0;
    Eval eval_;
    ClosedModulus closed_;
};

namespace detail {

inline double parse_number(const std::string& tok) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (end == begin || (end && *end != '\0'))
        throw lookup_error("cannot parse number '" + tok + "'");
    return v;
}

inline std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(' ');
    std::size_t e = s.find_last_not_of(' ');
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

/// Split "name(arg,arg,...)" at top-level commas.
inline bool parse_call(const std::string& id, std::string& name, std::vector<std::string>& args) {
    std::size_t open = id.find('(');
    if (open == std::string::npos || id.back() != ')') return false;
    name = strip(id.substr(0, open));
    std::string body = id.substr(open + 1, id.size() - open - 2);
    args.clear();
    int depth = 0;
    std::string cur;
    for (char ch : body) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
            args.push_back(strip(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!strip(cur).empty() || body.empty()) args.push_back(strip(cur));
    return true;
}

inline std::optional<double> exp_modulus(int k, double t, Interval I, int /*r*/) {
    // omega_k(exp, t, [a,b]) = e^{b - k u/2} (2 sinh(u/2))^k, u = min(t, (b-a)/k):
    // the sup over x sits at the right endpoint and the difference grows in u.
    if (t <= 0.0) return 0.0;
    double u = std::min(t, I.length() / k);
    return std::exp(I.b - k * u / 2.0) * detail::ipow(2.0 * std::sinh(u / 2.0), k);
}

} // namespace detail

/// Look up a corpus function. Identifiers:
///   exp | sin | x^s | poly(c0,c1,...) | abspow(c,alpha) | |x|^alpha |
///   tpow(c,s) | scaled(id,a,b)
inline SmoothFunction corpus_lookup(const std::string& raw_id) {
    const std::string id = detail::strip(raw_id);
    const Interval default_domain(-1.0, 1.0);

    if (id == "exp") {
        return SmoothFunction(
            id, default_domain, kUnboundedOrder,
            [](double x, int) { return std::exp(x); },
            [](int k, double t, Interval I, int r) { return detail::exp_modulus(k, t, I, r); });
    }
    if (id == "sin") {
        return SmoothFunction(id, default_domain, kUnboundedOrder, [](double x, int j) {
            switch (j % 4) {
                case 0: return std::sin(x);
                case 1: return std::cos(x);
                case 2: return -std::sin(x);
                default: return -std::cos(x);
            }
        });
    }
    if (id == "x" || (id.size() >= 3 && id.compare(0, 2, "x^") == 0)) {
        int s = id == "x" ? 1 : static_cast<int>(detail::parse_number(id.substr(2)));
        if (s < 0 || (id != "x" && detail::parse_number(id.substr(2)) != s))
            throw lookup_error("monomial needs a nonnegative integer exponent: " + id);
        return SmoothFunction(
            id, default_domain, kUnboundedOrder,
            [s](double x, int j) {
                if (j > s) return 0.0;
                return detail::falling_factorial(s, j) * detail::ipow(x, s - j);
            },
            [s](int k, double t, Interval I, int r) -> std::optional<double> {
                if (s - r < k) return 0.0; // k-th difference annihilates the derivative
                if (s - r == 2 && k == 2) {
                    double u = std::min(t, I.length() / 2.0);
                    return detail::falling_factorial(s, r) * 2.0 * u * u;
                }
                return std::nullopt;
            });
    }

    std::string name;
    std::vector<std::string> args;

    if (id.size() > 4 && id.compare(0, 4, "|x|^") == 0) {
        name = "abspow";
        args = {"0", id.substr(4)};
    } else if (!detail::parse_call(id, name, args)) {
        throw lookup_error("unknown corpus function '" + id + "'");
    }

    if (name == "poly") {
        std::vector<double> coeffs;
        for (const auto& a : args) coeffs.push_back(detail::parse_number(a));
        int degree = static_cast<int>(coeffs.size()) - 1;
        while (degree >= 0 && coeffs[static_cast<std::size_t>(degree)] == 0.0) --degree;
        return SmoothFunction(
            id, default_domain, kUnboundedOrder,
            [coeffs](double x, int j) {
                double acc = 0.0;
                for (std::size_t i = coeffs.size(); i-- > static_cast<std::size_t>(j);) {
                    acc = acc * x + coeffs[i] * detail::falling_factorial(static_cast<double>(i), j);
                }
                return acc;
            },
            [degree](int k, double /*t*/, Interval, int r) -> std::optional<double> {
                if (degree - r < k) return 0.0;
                return std::nullopt;
            });
    }
    if (name == "abspow") {
        if (args.size() != 2) throw lookup_error("abspow(c,alpha) takes two arguments");
        double c = detail::parse_number(args[0]);
        double alpha = detail::parse_number(args[1]);
        if (alpha <= 0.0) throw lookup_error("abspow: alpha must be positive");
        int max_order = static_cast<int>(std::ceil(alpha)) - 1;
        return SmoothFunction(
            id, default_domain, max_order,
            [c, alpha](double x, int j) {
                double dist = std::abs(x - c);
                if (dist == 0.0) return 0.0; // alpha - j > 0 for all exposed j
                double val = detail::falling_factorial(alpha, j) * std::pow(dist, alpha - j);
                return (j % 2 == 1 && x < c) ? -val : val;
            },
            [c, alpha](int k, double t, Interval I, int r) -> std::optional<double> {
                // |x-c|: omega_1 = min(t, b-a) while one-sided room remains.
                if (alpha != 1.0 || r != 0 || k != 1) return std::nullopt;
                double u = std::min(t, I.length());
                if (u <= std::max(I.b - c, c - I.a)) return u;
                return std::nullopt;
            });
    }
    if (name == "tpow") {
        if (args.size() != 2) throw lookup_error("tpow(c,s) takes two arguments");
        double c = detail::parse_number(args[0]);
        double sd = detail::parse_number(args[1]);
        int s = static_cast<int>(sd);
        if (sd != s || s < 1) throw lookup_error("tpow: s must be a positive integer");
        return SmoothFunction(id, default_domain, s - 1, [c, s](double x, int j) {
            if (x <= c) return 0.0;
            return detail::falling_factorial(s, j) * detail::ipow(x - c, s - j);
        });
    }
    if (name == "scaled") {
        if (args.size() != 3) throw lookup_error("scaled(id,a,b) takes three arguments");
        auto inner = std::make_shared<SmoothFunction>(corpus_lookup(args[0]));
        double a = detail::parse_number(args[1]);
        double b = detail::parse_number(args[2]);
        return SmoothFunction(id, inner->domain(), inner->max_derivative_order(),
                              [inner, a, b](double x, int j) {
                                  return detail::ipow(a, j) * inner->eval(a * x + b, j);
                              });
    }
    throw lookup_error("unknown corpus function '" + id + "'");
}

/// Look up a Phi-class function. Identifiers:
///   zero | pow(beta) | cappow(beta,T0) | plin(t0:v0,t1:v1,...)
inline ModulusFunction phi_lookup(const std::string& raw_id) {
    const std::string id = detail::strip(raw_id);
    const double far = 1e6;

    ModulusFunction result;
    if (id == "zero") {
        result = ModulusFunction(id, [](double) { return 0.0; }, far);
    } else {
        std::string name;
        std::vector<std::string> args;
        if (!detail::parse_call(id, name, args))
            throw lookup_error("unknown phi function '" + id + "'");

        if (name == "pow") {
            if (args.size() != 1) throw lookup_error("pow(beta) takes one argument");
            double beta = detail::parse_number(args[0]);
            if (beta <= 0.0) throw lookup_error("pow: beta must be positive");
            result = ModulusFunction(
                id, [beta](double t) { return t <= 0.0 ? 0.0 : std::pow(t, beta); }, far);
        } else if (name == "cappow") {
            if (args.size() != 2) throw lookup_error("cappow(beta,T0) takes two arguments");
            double beta = detail::parse_number(args[0]);
            double cap = detail::parse_number(args[1]);
            if (beta <= 0.0 || cap <= 0.0)
                throw lookup_error("cappow: beta and T0 must be positive");
            result = ModulusFunction(
                id,
                [beta, cap](double t) {
                    double u = std::min(std::max(t, 0.0), cap);
                    return u <= 0.0 ? 0.0 : std::pow(u, beta);
                },
                far, {cap});
        } else if (name == "plin") {
            PiecewiseLinear pl;
            for (const auto& a : args) {
                std::size_t colon = a.find(':');
                if (colon == std::string::npos)
                    throw lookup_error("plin: each node must look like t:v");
                pl.t.push_back(detail::parse_number(a.substr(0, colon)));
                pl.v.push_back(detail::parse_number(a.substr(colon + 1)));
            }
            if (pl.t.empty() || pl.t.front() != 0.0)
                throw lookup_error("plin: first node must be at t=0");
            if (!std::is_sorted(pl.t.begin(), pl.t.end()))
                throw lookup_error("plin: nodes must be sorted by t");
            result = ModulusFunction::piecewise(id, std::move(pl));
        } else {
            throw lookup_error("unknown phi function '" + id + "'");
        }
    }

    if (!result.is_phi())
        throw validation_error("phi '" + id + "' fails Phi-membership (nondecreasing, phi(0)=0)");
    return result;
}

struct RegistryEntry {
    std::string syntax;
    std::string description;
    std::string example;
};

inline std::vector<RegistryEntry> corpus_families() {
    return {
        {"exp", "exponential, all derivatives", "exp"},
        {"sin", "sine, all derivatives", "sin"},
        {"x^s", "monomial of nonnegative integer degree s", "x^3"},
        {"poly(c0,c1,...)", "polynomial, coefficients lowest degree first", "poly(1,-0.5,0.25)"},
        {"abspow(c,alpha)", "|x-c|^alpha, alpha > 0; derivatives up to ceil(alpha)-1",
         "abspow(0,3.5)"},
        {"|x|^alpha", "shorthand for abspow(0,alpha)", "|x|^3.5"},
        {"tpow(c,s)", "truncated power (x-c)_+^s; derivatives up to s-1", "tpow(0,2)"},
        {"scaled(id,a,b)", "composite f(a*x+b) over a registered id", "scaled(exp,2,-1)"},
    };
}

inline std::vector<RegistryEntry> phi_families() {
    return {
        {"zero", "the zero function", "zero"},
        {"pow(beta)", "t^beta, beta > 0", "pow(1)"},
        {"cappow(beta,T0)", "min(t,T0)^beta", "cappow(2,1)"},
        {"plin(t0:v0,t1:v1,...)", "piecewise-linear through nodes, t0 = 0", "plin(0:0,1:0.5,2:0.7)"},
    };
}

} // namespace divlab
