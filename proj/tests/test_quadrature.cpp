#include "catch2/catch_amalgamated.hpp"

#include <cmath>

#include "divlab/corpus.hpp"
#include "divlab/quadrature.hpp"
#include "divlab/smoothness.hpp"

using namespace divlab;

TEST_CASE("adaptive rule hits closed forms", "[quadrature]") {
    auto res = integrate_adaptive([](double u) { return u * u; }, 0.0, 1.0);
    CHECK(res.value == Catch::Approx(1.0 / 3.0).epsilon(1e-12));

    res = integrate_adaptive([](double u) { return 1.0 / (u * u) * u; }, 1.0, 2.0);
    CHECK(res.value == Catch::Approx(std::log(2.0)).epsilon(1e-11));

    res = integrate_adaptive([](double u) { return std::exp(u); }, -1.0, 1.0);
    CHECK(res.value == Catch::Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("steep negative powers near the left endpoint", "[quadrature]") {
    // range ratio 1e5; the geometric split keeps this converging
    double lo = 1e-5, hi = 1.0;
    auto res = integrate_adaptive([](double u) { return std::pow(u, -2.0); }, lo, hi);
    CHECK(res.value == Catch::Approx(1.0 / lo - 1.0).epsilon(1e-9));

    res = integrate_adaptive([](double u) { return std::pow(u, -6.0) * u; }, 1e-3, 2.0);
    double exact = (std::pow(1e-3, -4.0) - std::pow(2.0, -4.0)) / 4.0;
    CHECK(res.value == Catch::Approx(exact).epsilon(1e-9));
}

TEST_CASE("breakpoint pre-splitting handles kinks", "[quadrature]") {
    auto phi = phi_lookup("cappow(1,0.5)");
    auto res = integrate_adaptive_split([&](double u) { return phi(u); }, 0.1, 1.0,
                                        phi.breakpoints());
    // integral of min(u, 1/2) over [0.1, 1]: (0.25 - 0.01)/2 + 0.5*0.5
    CHECK(res.value == Catch::Approx(0.12 + 0.25).epsilon(1e-11));
}

TEST_CASE("non-convergence raises accuracy_error with the bound", "[quadrature]") {
    QuadratureSpec strict;
    strict.rel_tol = 1e-16;
    strict.max_depth = 3;
    bool threw = false;
    try {
        integrate_adaptive([](double u) { return std::pow(u, -5.5); }, 1e-6, 1.0, strict);
    } catch (const accuracy_error& e) {
        threw = true;
        CHECK(e.achieved > 0.0);
    }
    CHECK(threw);
}

TEST_CASE("stable power segment integrals", "[quadrature]") {
    CHECK(integral_power(1.0, 2.0, -1.0) == Catch::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(integral_power(1.0, 2.0, -2.0) == Catch::Approx(0.5).epsilon(1e-14));
    // nearly touching endpoints keep full relative accuracy
    double lo = 0.75, hi = 0.75 * (1.0 + 1e-12);
    double exact = std::pow(0.75, -3.0) * (hi - lo); // first order suffices here
    CHECK(integral_power(lo, hi, -3.0) == Catch::Approx(exact).epsilon(1e-9));
    CHECK(integral_power(2.0, 2.0, -2.0) == 0.0);
}

TEST_CASE("piecewise closed form matches adaptive quadrature", "[quadrature]") {
    // the two integration routes must agree on polyline integrands
    auto phi = phi_lookup("plin(0:0,0.3:0.2,1:0.4,2:0.8)");
    const PiecewiseLinear& pl = *phi.piecewise_nodes();
    for (double e : {-1.0, -2.0, -3.0, -5.0}) {
        for (auto [lo, hi] : {std::pair{0.05, 1.9}, {0.31, 0.9}, {0.2, 2.4}}) {
            double exact = integral_power_piecewise(pl, e, lo, hi);
            auto adaptive = integrate_adaptive_split(
                [&](double u) { return std::pow(u, e) * phi(u); }, lo, hi, phi.breakpoints());
            INFO("e=" << e << " lo=" << lo << " hi=" << hi);
            CHECK(adaptive.value == Catch::Approx(exact).epsilon(1e-8));
        }
    }
}
