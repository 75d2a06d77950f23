#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "divlab/interval.hpp"
#include "divlab/numfmt.hpp"

namespace divlab {

/// Index pair (p, q) from the set Q_{m,r}: 0 <= p, q <= m and q - p >= r+1.
struct IndexPair {
    int p = 0;
    int q = 0;

    friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

/// Sorted knot multiset. Immutable after construction; equality of knots is
/// structural (same distinct value), never a floating-point tolerance test.
class KnotSet {
public:
    /// Build from an arbitrary list of abscissae. Values are sorted and
    /// exactly-equal values are grouped; `snap` > 0 additionally merges
    /// values whose consecutive gap is <= snap (representative: lowest).
    explicit KnotSet(std::span<const double> values, double snap = 0.0) {
        if (values.empty())
            throw std::domain_error("KnotSet: needs at least one knot");
        std::vector<double> sorted(values.begin(), values.end());
        std::sort(sorted.begin(), sorted.end());
        for (double v : sorted) {
            if (!std::isfinite(v))
                throw std::domain_error("KnotSet: knots must be finite");
            if (!distinct_.empty() &&
                (v == distinct_.back() || v - distinct_.back() <= snap)) {
                ++mult_.back();
            } else {
                distinct_.push_back(v);
                mult_.push_back(1);
            }
        }
        for (std::size_t d = 0; d < distinct_.size(); ++d)
            for (int l = 1; l <= mult_[d]; ++l)
                expanded_.push_back(static_cast<int>(d));
    }

    KnotSet(std::initializer_list<double> values)
        : KnotSet(std::span<const double>(values.begin(), values.size())) {}

    /// Parse a comma-separated decimal list, e.g. "0,0,1".
    static KnotSet parse(const std::string& text, double snap = 0.0) {
        std::vector<double> vals;
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const char* begin = tok.c_str();
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            while (end && *end == ' ') ++end;
            if (end == begin || (end && *end != '\0'))
                throw std::domain_error("KnotSet: cannot parse knot '" + tok + "'");
            vals.push_back(v);
        }
        return KnotSet(std::span<const double>(vals.data(), vals.size()), snap);
    }

    /// m, where the expanded sequence is x_0 <= ... <= x_m.
    int order() const { return static_cast<int>(expanded_.size()) - 1; }
    /// Number of expanded entries, m+1.
    int size() const { return static_cast<int>(expanded_.size()); }
    int distinct_count() const { return static_cast<int>(distinct_.size()); }

    /// Expanded knot x_j, 0 <= j <= m. Also accepts the virtual indices
    /// j = -1 and j = m+1: x_{-1} = x_0 - (x_m - x_0), x_{m+1} = x_m + (x_m - x_0).
    double x(int j) const {
        const int m = order();
        if (j == -1) return distinct_.front() - span();
        if (j == m + 1) return distinct_.back() + span();
        return distinct_[static_cast<std::size_t>(expanded_[static_cast<std::size_t>(check_index(j))])];
    }

    double distinct_value(int d) const { return distinct_.at(static_cast<std::size_t>(d)); }
    int multiplicity_of_distinct(int d) const { return mult_.at(static_cast<std::size_t>(d)); }

    /// Index into the distinct-value table for expanded entry j.
    int distinct_index(int j) const { return expanded_[static_cast<std::size_t>(check_index(j))]; }

    /// Multiplicity m_j of x_j (count of equal entries).
    int multiplicity(int j) const { return mult_[static_cast<std::size_t>(distinct_index(j))]; }

    /// Local index l_j: number of entries equal to x_j with index <= j (1-based).
    int local_index(int j) const {
        check_index(j);
        int l = 1;
        for (int i = j - 1; i >= 0 && expanded_[static_cast<std::size_t>(i)] ==
                                          expanded_[static_cast<std::size_t>(j)];
             --i)
            ++l;
        return l;
    }

    int max_multiplicity() const { return *std::max_element(mult_.begin(), mult_.end()); }

    double span() const { return distinct_.back() - distinct_.front(); }
    Interval hull() const { return Interval(distinct_.front(), distinct_.back()); }

    /// Validity for smoothness order r: x_j < x_{j+r+1} for all admissible j,
    /// equivalently every multiplicity <= r+1.
    bool validate(int r) const { return max_multiplicity() <= r + 1; }

    /// Structural equality of entries i and j.
    bool same_knot(int i, int j) const { return distinct_index(i) == distinct_index(j); }

    /// A sub-multiset over the expanded index range [first, last].
    KnotSet slice(int first, int last) const {
        check_index(first);
        check_index(last);
        if (first > last) throw std::domain_error("KnotSet::slice: empty range");
        std::vector<double> vals;
        vals.reserve(static_cast<std::size_t>(last - first + 1));
        for (int j = first; j <= last; ++j) vals.push_back(x(j));
        return KnotSet(std::span<const double>(vals.data(), vals.size()));
    }

    /// The reflected set Y with y_i = -x_{m-i}.
    KnotSet reflected() const {
        std::vector<double> vals;
        vals.reserve(expanded_.size());
        for (int j = order(); j >= 0; --j) vals.push_back(-x(j));
        return KnotSet(std::span<const double>(vals.data(), vals.size()));
    }

    std::vector<double> expanded_values() const {
        std::vector<double> vals;
        vals.reserve(expanded_.size());
        for (int j = 0; j < size(); ++j) vals.push_back(x(j));
        return vals;
    }

    friend bool operator==(const KnotSet& a, const KnotSet& b) {
        return a.distinct_ == b.distinct_ && a.mult_ == b.mult_;
    }

private:
    int check_index(int j) const {
        if (j < 0 || j > order())
            throw std::domain_error("KnotSet: expanded index out of range");
        return j;
    }

    std::vector<double> distinct_;
    std::vector<int> mult_;
    std::vector<int> expanded_; // distinct index per expanded entry
};

/// Serialize back to the comma-separated form accepted by KnotSet::parse.
inline std::string to_string(const KnotSet& X) {
    std::string out;
    for (int j = 0; j < X.size(); ++j) {
        if (j) out += ',';
        out += to_shortest(X.x(j));
    }
    return out;
}

/// true iff x_j < x_{j+r+1} for all 0 <= j <= m-r-1.
inline bool validate(const KnotSet& X, int r) { return X.validate(r); }

/// Enumerate Q_{m,r} = {(p,q) : 0 <= p <= m-r-1, p+r+1 <= q <= m} in
/// lexicographic order. Empty when m <= r.
inline std::vector<IndexPair> q_set(int m, int r) {
    if (m < 0 || r < 0) throw std::domain_error("q_set: m, r must be nonnegative");
    std::vector<IndexPair> pairs;
    for (int p = 0; p <= m - r - 1; ++p)
        for (int q = p + r + 1; q <= m; ++q) pairs.push_back({p, q});
    return pairs;
}

/// d(p,q) = min(x_{q+1} - x_p, x_q - x_{p-1}) with virtual end knots.
/// In particular d(0,m) = 2(x_m - x_0).
inline double d_pq(const KnotSet& X, IndexPair pair) {
    const int m = X.order();
    if (pair.p < 0 || pair.q > m || pair.q <= pair.p)
        throw std::domain_error("d_pq: pair outside Q_{m,r}");
    return std::min(X.x(pair.q + 1) - X.x(pair.p), X.x(pair.q) - X.x(pair.p - 1));
}

/// Permutation of (0,...,m) ordering the knots by nondecreasing distance
/// from x; ties broken by smaller original index.
inline std::vector<int> sigma_order(const KnotSet& X, double x) {
    std::vector<int> perm(static_cast<std::size_t>(X.size()));
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int i, int j) {
        return std::abs(x - X.x(i)) < std::abs(x - X.x(j));
    });
    return perm;
}

/// D_r(x, X) = prod_{nu=0}^{r} |x - x_{sigma_nu}|.
inline double capital_d(const KnotSet& X, double x, int r) {
    if (r < 0 || r > X.order())
        throw std::domain_error("capital_d: order out of range");
    auto sigma = sigma_order(X, x);
    double prod = 1.0;
    for (int nu = 0; nu <= r; ++nu) prod *= std::abs(x - X.x(sigma[static_cast<std::size_t>(nu)]));
    return prod;
}

/// dist(x, Z) = min_j |x - z_j|.
inline double dist_to_set(double x, std::span<const double> Z) {
    if (Z.empty()) throw std::domain_error("dist_to_set: empty set");
    double best = std::abs(x - Z[0]);
    for (double z : Z.subspan(1)) best = std::min(best, std::abs(x - z));
    return best;
}

} // namespace divlab
