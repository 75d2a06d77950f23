#include "catch2/catch_amalgamated.hpp"

#include <cmath>

#include "divlab/divdiff.hpp"
#include "divlab/rng.hpp"
#include "divlab/verify.hpp"

using namespace divlab;

TEST_CASE("divided differences: worked examples", "[divdiff]") {
    CHECK(divided_difference(KnotSet::parse("0,1,2"), corpus_lookup("x^2")) ==
          Catch::Approx(1.0).epsilon(1e-14));
    CHECK(divided_difference(KnotSet::parse("0,0,0"), corpus_lookup("sin")) == 0.0);
    // oracle: Hermite interpolant with p(0)=0, p'(0)=0, p(1)=1 is x^2
    CHECK(divided_difference(KnotSet::parse("0,0,1"), corpus_lookup("x^3")) ==
          Catch::Approx(1.0).epsilon(1e-14));
    CHECK(divided_difference(KnotSet::parse("0,1"), corpus_lookup("exp")) ==
          Catch::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
    // order 0
    CHECK(divided_difference(KnotSet::parse("0.7"), corpus_lookup("exp")) ==
          Catch::Approx(std::exp(0.7)));
}

TEST_CASE("missing derivatives raise capability errors", "[divdiff]") {
    CHECK_THROWS_AS(divided_difference(KnotSet::parse("0,0,0"), corpus_lookup("tpow(0,2)")),
                    capability_error);
}

TEST_CASE("newton form interpolates values and derivatives", "[divdiff]") {
    SECTION("confluent Vandermonde worked instance: X={-1,-1,1,1}, f=x^4 -> 2x^2-1") {
        auto form = newton_hermite(KnotSet::parse("-1,-1,1,1"), corpus_lookup("x^4"));
        auto poly = form.to_monomial();
        REQUIRE(poly.degree() == 2);
        CHECK(poly.coefficients()[0] == Catch::Approx(-1.0).margin(1e-14));
        CHECK(poly.coefficients()[1] == Catch::Approx(0.0).margin(1e-14));
        CHECK(poly.coefficients()[2] == Catch::Approx(2.0).margin(1e-14));
        CHECK(eval_newton(form, 1.0, 1) == Catch::Approx(4.0)); // matches f'(1)
    }
    SECTION("degree-1 data reproduces the identity") {
        auto form = newton_hermite(KnotSet::parse("0,1"), corpus_lookup("x"));
        CHECK(eval_newton(form, 5.0, 0) == Catch::Approx(5.0));
        CHECK(eval_newton(form, 5.0, 7) == 0.0);
    }
    SECTION("double knot at 0 for exp gives 1 + x") {
        auto poly = newton_hermite(KnotSet::parse("0,0"), corpus_lookup("exp")).to_monomial();
        REQUIRE(poly.degree() == 1);
        CHECK(poly.coefficients()[0] == 1.0);
        CHECK(poly.coefficients()[1] == 1.0);
    }
}

TEST_CASE("oracle agrees on its own worked examples", "[divdiff]") {
    CHECK(oracle_leading_coeff(KnotSet::parse("0,0,1"), corpus_lookup("x^3")) ==
          Catch::Approx(1.0).epsilon(1e-12));
    CHECK(oracle_leading_coeff(KnotSet::parse("0,1,2"), corpus_lookup("x")) ==
          Catch::Approx(0.0).margin(1e-13));
    CHECK(oracle_leading_coeff(KnotSet::parse("0,0,0"), corpus_lookup("x^2")) ==
          Catch::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("oracle equivalence on randomized knots and corpus draws", "[divdiff]") {
    Rng master(42);
    auto pool = default_function_pool();
    int done = 0;
    for (int trial = 0; trial < 300; ++trial) {
        Rng rng = Rng::for_trial(9000, static_cast<std::uint64_t>(trial));
        int r = static_cast<int>(rng.index(3));
        int m = r + 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(8 - r)));
        KnotSet X = sample_knotset(rng, m + 1, r, 1e-3, MultiplicityPolicy::random_le,
                                   KnotPreset::uniform);
        auto f = corpus_lookup(pool[rng.index(pool.size())]);
        if (f.max_derivative_order() < r) continue;
        double dd = divided_difference(X, f);
        double oracle = oracle_leading_coeff(X, f);
        INFO("X=" << to_string(X) << " f=" << f.id());
        CHECK(std::abs(dd - oracle) <= 1e-8 * std::max(1.0, std::abs(dd)));
        ++done;
    }
    CHECK(done > 250);
}

TEST_CASE("annihilation and exactness on monomials", "[divdiff]") {
    for (int m = 1; m <= 8; ++m) {
        for (int trial = 0; trial < 40; ++trial) {
            Rng rng = Rng::for_trial(777 + m, static_cast<std::uint64_t>(trial));
            int r = static_cast<int>(rng.index(3));
            KnotSet X = sample_knotset(rng, m + 1, r, 1e-3, MultiplicityPolicy::random_le,
                                       KnotPreset::uniform);
            for (int s = std::max(0, m - 2); s <= m; ++s) {
                double dd = divided_difference(X, corpus_lookup("x^" + std::to_string(s)));
                if (s < m) {
                    CHECK(std::abs(dd) <= 1e-9);
                } else {
                    CHECK(dd == Catch::Approx(1.0).epsilon(1e-10));
                }
            }
        }
    }
}

TEST_CASE("value independent of the input ordering", "[divdiff]") {
    // exact: construction canonicalizes the multiset
    auto f = corpus_lookup("exp");
    KnotSet A = KnotSet::parse("0.3,0.1,0.1,0.9");
    KnotSet B = KnotSet::parse("0.1,0.9,0.3,0.1");
    CHECK(divided_difference(A, f) == divided_difference(B, f));
}

TEST_CASE("interpolation conditions hold at every knot", "[divdiff]") {
    for (int trial = 0; trial < 60; ++trial) {
        Rng rng = Rng::for_trial(31337, static_cast<std::uint64_t>(trial));
        int r = static_cast<int>(rng.index(3));
        int m = r + 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(7 - r)));
        auto policy = trial % 3 == 0 && (m + 1) % (r + 1) == 0 ? MultiplicityPolicy::full
                                                               : MultiplicityPolicy::random_le;
        KnotSet X = sample_knotset(rng, m + 1, r, 1e-3, policy, KnotPreset::uniform);
        auto f = corpus_lookup("sin");
        auto form = newton_hermite(X, f);
        for (int j = 0; j <= X.order(); ++j) {
            int order = X.local_index(j) - 1;
            double got = eval_newton(form, X.x(j), order);
            double want = f.eval(X.x(j), order);
            INFO("X=" << to_string(X) << " j=" << j << " order=" << order);
            CHECK(std::abs(got - want) <= 1e-8 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("affine covariance [X; f(a.+b)] = a^m [aX+b; f]", "[divdiff]") {
    auto f = corpus_lookup("exp");
    for (int trial = 0; trial < 40; ++trial) {
        Rng rng = Rng::for_trial(2024, static_cast<std::uint64_t>(trial));
        int m = 1 + static_cast<int>(rng.index(6));
        KnotSet X = sample_knotset(rng, m + 1, 2, 1e-3, MultiplicityPolicy::random_le,
                                   KnotPreset::uniform);
        double a = 0.5 + rng.uniform01() * 1.5;
        double b = rng.uniform(-1.0, 1.0);
        auto g = corpus_lookup("scaled(exp," + to_shortest(a) + "," + to_shortest(b) + ")");
        std::vector<double> mapped;
        for (double x : X.expanded_values()) mapped.push_back(a * x + b);
        KnotSet aXb{std::span<const double>(mapped.data(), mapped.size())};
        double lhs = divided_difference(X, g);
        double rhs = std::pow(a, m) * divided_difference(aXb, f);
        CHECK(lhs == Catch::Approx(rhs).epsilon(1e-8));
    }
}

TEST_CASE("simple-knot error identity", "[divdiff]") {
    SECTION("worked instances") {
        auto [l1, r1] = simple_knot_error_identity(KnotSet::parse("0,0,1"),
                                                   corpus_lookup("x^3"), 2);
        CHECK(l1 == Catch::Approx(1.0).epsilon(1e-13));
        CHECK(r1 == Catch::Approx(1.0).epsilon(1e-13));

        auto [l2, r2] =
            simple_knot_error_identity(KnotSet::parse("0,1"), corpus_lookup("exp"), 1);
        CHECK(l2 == Catch::Approx(std::exp(1.0) - 1.0));
        CHECK(l2 == Catch::Approx(r2).epsilon(1e-13));
    }
    SECTION("degree < m data annihilates both sides") {
        auto [lhs, rhs] = simple_knot_error_identity(KnotSet::parse("0,0.25,0.5,1"),
                                                     corpus_lookup("x^2"), 3);
        CHECK(std::abs(lhs) < 1e-12);
        CHECK(std::abs(rhs) < 1e-12);
    }
    SECTION("rejects repeated knots") {
        CHECK_THROWS_AS(
            simple_knot_error_identity(KnotSet::parse("0,0,1"), corpus_lookup("x^3"), 0),
            std::domain_error);
    }
    SECTION("randomized agreement") {
        for (int trial = 0; trial < 40; ++trial) {
            Rng rng = Rng::for_trial(5150, static_cast<std::uint64_t>(trial));
            int m = 2 + static_cast<int>(rng.index(5));
            KnotSet X = sample_knotset(rng, m + 1, 1, 1e-3, MultiplicityPolicy::random_le,
                                       KnotPreset::uniform);
            int j_star = -1;
            for (int j = 0; j <= X.order(); ++j)
                if (X.multiplicity(j) == 1) {
                    j_star = j;
                    break;
                }
            if (j_star < 0) continue;
            auto [lhs, rhs] = simple_knot_error_identity(X, corpus_lookup("sin"), j_star);
            CHECK(lhs == Catch::Approx(rhs).margin(1e-10));
        }
    }
}

TEST_CASE("conditioning guard on the oracle", "[divdiff]") {
    // a pair of knots separated far below the 1e-12-of-span floor
    std::vector<double> vals{0.0, 1e-15, 1.0, 2.0};
    KnotSet X{std::span<const double>(vals.data(), vals.size())};
    CHECK_THROWS_AS(oracle_leading_coeff(X, corpus_lookup("exp")), conditioning_error);
}
