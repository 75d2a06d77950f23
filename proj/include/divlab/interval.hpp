#pragma once

#include <stdexcept>

namespace divlab {

/// Closed interval [a, b] with a <= b.
struct Interval {
    double a = 0.0;
    double b = 0.0;

    Interval() = default;
    Interval(double lo, double hi) : a(lo), b(hi) {
        if (!(lo <= hi)) throw std::domain_error("Interval: requires a <= b");
    }

    double length() const { return b - a; }
    double midpoint() const { return 0.5 * (a + b); }
    bool contains(double x) const { return a <= x && x <= b; }
    double clamp(double x) const { return x < a ? a : (x > b ? b : x); }
};

} // namespace divlab
