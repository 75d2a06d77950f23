#include "catch2/catch_amalgamated.hpp"

#include <cmath>

#include "divlab/corpus.hpp"
#include "divlab/rng.hpp"
#include "divlab/smoothness.hpp"

using namespace divlab;

TEST_CASE("registry lookups and worked values", "[corpus]") {
    CHECK(corpus_lookup("x^3").eval(2.0, 1) == 12.0);
    CHECK(corpus_lookup("exp").eval(0.0, 5) == 1.0);
    CHECK(corpus_lookup("tpow(0,1)").eval(-1.0, 0) == 0.0);
    CHECK(corpus_lookup("x").eval(5.0, 0) == 5.0);
    CHECK(corpus_lookup("poly(1,-2,0.5)").eval(2.0, 0) == Catch::Approx(-1.0));
    CHECK(corpus_lookup("poly(1,-2,0.5)").eval(2.0, 1) == Catch::Approx(0.0));
    CHECK(corpus_lookup("|x|^3.5").eval(-2.0, 0) == Catch::Approx(std::pow(2.0, 3.5)));
    CHECK(corpus_lookup("scaled(exp,2,-1)").eval(0.5, 1) == Catch::Approx(2.0));

    CHECK_THROWS_AS(corpus_lookup("nope"), lookup_error);
    CHECK_THROWS_AS(corpus_lookup("x^-1"), lookup_error);
    CHECK_THROWS_AS(corpus_lookup("abspow(0,-2)"), lookup_error);
    CHECK_THROWS_AS(corpus_lookup("tpow(0,1.5)"), lookup_error);
}

TEST_CASE("derivative orders are capability-gated", "[corpus]") {
    auto f = corpus_lookup("abspow(0,3.5)");
    CHECK(f.max_derivative_order() == 3);
    CHECK_NOTHROW(f.eval(0.5, 3));
    CHECK_THROWS_AS(f.eval(0.5, 4), capability_error);

    auto t = corpus_lookup("tpow(0,2)");
    CHECK(t.max_derivative_order() == 1);
    CHECK(t.eval(0.5, 1) == 1.0); // d/dx (x)_+^2 = 2x
    CHECK_THROWS_AS(t.eval(0.5, 2), capability_error);
}

TEST_CASE("monomial derivatives follow the power rule exactly", "[corpus]") {
    for (int s = 0; s <= 8; ++s) {
        auto f = corpus_lookup("x^" + std::to_string(s));
        for (int j = 0; j <= s + 2; ++j) {
            // repeated symbolic power rule: s!/(s-j)! x^{s-j}
            double coeff = 1.0;
            for (int i = 0; i < j; ++i) coeff *= (s - i);
            for (double x : {-1.3, -0.2, 0.0, 0.7, 2.0}) {
                double expect = j > s ? 0.0 : coeff * std::pow(x, s - j);
                if (x == 0.0 && s == j) expect = coeff;
                CHECK(f.eval(x, j) == Catch::Approx(expect).margin(1e-12));
            }
        }
    }
}

TEST_CASE("derivatives agree with centered finite differences", "[corpus]") {
    const char* ids[] = {"exp",           "sin",          "x^5",
                         "poly(0.3,-1,2)", "abspow(0,3.5)", "tpow(0,3)",
                         "scaled(sin,2,-0.3)"};
    for (const char* id : ids) {
        auto f = corpus_lookup(id);
        int maxj = std::min(f.max_derivative_order(), 3);
        for (int j = 1; j <= maxj; ++j) {
            for (double x : {-0.71, -0.23, 0.39, 0.81}) {
                const double h = 1e-5;
                double fd = (f.eval(x + h, j - 1) - f.eval(x - h, j - 1)) / (2.0 * h);
                double exact = f.eval(x, j);
                double scale = std::max({1.0, std::abs(exact), std::abs(fd)});
                INFO(id << " j=" << j << " x=" << x);
                CHECK(std::abs(fd - exact) <= 1e-5 * scale);
            }
        }
    }
}

TEST_CASE("phi registry validates Phi-membership", "[corpus]") {
    CHECK(phi_lookup("pow(1)")(0.5) == 0.5);
    CHECK(phi_lookup("pow(1)")(0.0) == 0.0);
    CHECK(phi_lookup("cappow(2,1)")(3.0) == 1.0);
    CHECK(phi_lookup("zero")(4.0) == 0.0);
    auto pl = phi_lookup("plin(0:0,1:0.5,2:0.7)");
    CHECK(pl(0.5) == Catch::Approx(0.25));
    CHECK(pl(1.5) == Catch::Approx(0.6));
    CHECK(pl(5.0) == Catch::Approx(0.7)); // constant beyond the last node

    CHECK_THROWS_AS(phi_lookup("pow(0)"), lookup_error);
    CHECK_THROWS_AS(phi_lookup("garbage(1)"), lookup_error);
    CHECK_THROWS_AS(phi_lookup("plin(0:0,1:0.5,2:0.2)"), validation_error);
    CHECK_THROWS_AS(phi_lookup("plin(0:0.3,1:0.5)"), validation_error);
}

TEST_CASE("closed-form moduli track the grid estimator", "[corpus]") {
    // the estimator is a lower bound; closed forms must sit within 2% above it
    struct Probe {
        const char* id;
        int k;
        int r;
    };
    const Probe probes[] = {{"x^2", 2, 0}, {"abspow(0,1)", 1, 0}, {"exp", 2, 0},
                            {"exp", 3, 1}, {"x^4", 2, 2}};
    Interval I(-1.0, 1.0);
    Rng rng(101);
    for (const auto& probe : probes) {
        auto f = corpus_lookup(probe.id);
        for (int trial = 0; trial < 4; ++trial) {
            double t = 0.05 + 0.9 * rng.uniform01();
            auto closed = f.closed_form_modulus(probe.k, t, I, probe.r);
            REQUIRE(closed.has_value());
            double est = modulus(f.view(probe.r), probe.k, t, I).value;
            INFO(probe.id << " k=" << probe.k << " t=" << t);
            CHECK(est <= *closed * (1.0 + 1e-12));
            CHECK(*closed <= est / (1.0 - 0.02));
        }
    }
}
