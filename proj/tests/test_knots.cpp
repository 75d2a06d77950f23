#include "catch2/catch_amalgamated.hpp"

#include "divlab/knots.hpp"
#include "divlab/rng.hpp"

using namespace divlab;

TEST_CASE("knot multisets canonicalize", "[knots]") {
    KnotSet X = KnotSet::parse("1,0,0.5,0");
    REQUIRE(X.order() == 3);
    CHECK(X.x(0) == 0.0);
    CHECK(X.x(1) == 0.0);
    CHECK(X.x(2) == 0.5);
    CHECK(X.x(3) == 1.0);
    CHECK(X.distinct_count() == 3);
    CHECK(X.multiplicity(0) == 2);
    CHECK(X.local_index(0) == 1);
    CHECK(X.local_index(1) == 2);
    CHECK(X.local_index(2) == 1);
    CHECK(to_string(X) == "0,0,0.5,1");

    SECTION("shuffled input gives the identical expanded sequence") {
        KnotSet Y = KnotSet::parse("0,0.5,1,0");
        CHECK(X == Y);
    }
    SECTION("structural equality only for bitwise-equal values") {
        KnotSet Z = KnotSet::parse("0,1e-300,1");
        CHECK(Z.distinct_count() == 3);
    }
    SECTION("snap tolerance merges close values on request") {
        std::vector<double> vals{0.0, 1e-12, 1.0};
        KnotSet snapped(std::span<const double>(vals.data(), vals.size()), 1e-9);
        CHECK(snapped.distinct_count() == 2);
        CHECK(snapped.multiplicity(0) == 2);
    }
    SECTION("parse rejects junk") {
        CHECK_THROWS_AS(KnotSet::parse("0,abc,1"), std::domain_error);
    }
}

TEST_CASE("validity matches the multiplicity bound", "[knots]") {
    CHECK(validate(KnotSet::parse("0,0,1"), 1));
    CHECK_FALSE(validate(KnotSet::parse("0,0,1"), 0));
    CHECK(validate(KnotSet::parse("0,1,2"), 0));

    SECTION("invariant under affine maps of the knot values") {
        Rng rng(7);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> vals;
            int n = 2 + static_cast<int>(rng.index(6));
            for (int i = 0; i < n; ++i) vals.push_back(rng.index(4) * 0.25);
            KnotSet X{std::span<const double>(vals.data(), vals.size())};
            double a = 0.5 + rng.uniform01(), b = rng.uniform(-2.0, 2.0);
            std::vector<double> mapped;
            for (double v : vals) mapped.push_back(a * v + b);
            KnotSet Y{std::span<const double>(mapped.data(), mapped.size())};
            for (int r = 0; r <= 3; ++r) CHECK(validate(X, r) == validate(Y, r));
        }
    }
}

TEST_CASE("q_set enumerates Q_{m,r}", "[knots]") {
    auto pairs = q_set(3, 1);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0] == IndexPair{0, 2});
    CHECK(pairs[1] == IndexPair{0, 3});
    CHECK(pairs[2] == IndexPair{1, 3});
    CHECK(q_set(2, 1) == std::vector<IndexPair>{{0, 2}});
    CHECK(q_set(1, 1).empty());

    SECTION("cardinality (m-r)(m-r+1)/2") {
        for (int m = 0; m <= 9; ++m)
            for (int r = 0; r <= 4; ++r) {
                long expected = m <= r ? 0 : static_cast<long>(m - r) * (m - r + 1) / 2;
                CHECK(static_cast<long>(q_set(m, r).size()) == expected);
            }
    }
}

TEST_CASE("d(p,q) uses the virtual end knots", "[knots]") {
    KnotSet X = KnotSet::parse("0,1,2,3");
    CHECK(d_pq(X, {0, 3}) == 6.0);
    CHECK(d_pq(X, {1, 3}) == 3.0);
    CHECK(d_pq(X, {0, 2}) == 3.0);
    CHECK_THROWS_AS(d_pq(X, {2, 2}), std::domain_error);

    SECTION("reversal identity d(p,q;Y) = d(m-q,m-p;X), exact") {
        Rng rng(11);
        for (int trial = 0; trial < 100; ++trial) {
            int n = 2 + static_cast<int>(rng.index(7));
            std::vector<double> vals;
            for (int i = 0; i < n; ++i) vals.push_back(rng.uniform(-3.0, 3.0));
            KnotSet A{std::span<const double>(vals.data(), vals.size())};
            KnotSet Y = A.reflected();
            int m = A.order();
            for (const auto& pair : q_set(m, 0))
                CHECK(d_pq(Y, pair) == d_pq(A, {m - pair.q, m - pair.p}));
        }
    }
}

TEST_CASE("sigma orders knots by distance with index tie-break", "[knots]") {
    KnotSet X = KnotSet::parse("0,0.5,1");
    CHECK(sigma_order(X, 0.4) == std::vector<int>{1, 0, 2});
    CHECK(sigma_order(KnotSet::parse("0,1"), 0.5) == std::vector<int>{0, 1});
    CHECK(sigma_order(KnotSet::parse("-1,-1,1,1"), 0.0) == std::vector<int>{0, 1, 2, 3});

    SECTION("always a permutation with nondecreasing distances") {
        Rng rng(23);
        for (int trial = 0; trial < 200; ++trial) {
            int n = 1 + static_cast<int>(rng.index(8));
            std::vector<double> vals;
            for (int i = 0; i < n; ++i) vals.push_back(rng.uniform01());
            KnotSet A{std::span<const double>(vals.data(), vals.size())};
            double x = rng.uniform(-0.5, 1.5);
            auto sigma = sigma_order(A, x);
            std::vector<bool> seen(static_cast<std::size_t>(A.size()), false);
            for (int idx : sigma) {
                REQUIRE(idx >= 0);
                REQUIRE(idx < A.size());
                CHECK_FALSE(seen[static_cast<std::size_t>(idx)]);
                seen[static_cast<std::size_t>(idx)] = true;
            }
            for (std::size_t nu = 1; nu < sigma.size(); ++nu)
                CHECK(std::abs(x - A.x(sigma[nu - 1])) <= std::abs(x - A.x(sigma[nu])));
        }
    }
}

TEST_CASE("D_r multiplies the r+1 nearest distances", "[knots]") {
    CHECK(capital_d(KnotSet::parse("0,0.5,1"), 0.4, 1) == Catch::Approx(0.04));
    CHECK(capital_d(KnotSet::parse("-1,-1,1,1"), 0.0, 1) == 1.0);
    CHECK(capital_d(KnotSet::parse("0,0.5,1"), 0.5, 0) == 0.0);
    CHECK_THROWS_AS(capital_d(KnotSet::parse("0,1"), 0.3, 2), std::domain_error);
}

TEST_CASE("dist_to_set", "[knots]") {
    std::vector<double> Z{-1.0, 1.0};
    CHECK(dist_to_set(0.0, std::span<const double>(Z.data(), Z.size())) == 1.0);
    CHECK(dist_to_set(1.0, std::span<const double>(Z.data(), Z.size())) == 0.0);
    std::vector<double> Z2{0.0, 1.0};
    CHECK(dist_to_set(0.3, std::span<const double>(Z2.data(), Z2.size())) == Catch::Approx(0.3));
    CHECK_THROWS_AS(dist_to_set(0.0, std::span<const double>()), std::domain_error);
}
