#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "skm/kernelmath.hpp"

using Catch::Approx;
using namespace skm;

TEST_CASE("wrap_principal maps onto (-pi, pi]") {
    CHECK(wrap_principal(3.0 * pi / 2.0) == Approx(-pi / 2.0).margin(1e-15));
    CHECK(wrap_principal(-pi) == pi);
    CHECK(wrap_principal(two_pi) == Approx(0.0).margin(1e-15));
    CHECK(wrap_principal(0.25) == 0.25);
    CHECK_THROWS_AS(wrap_principal(NAN), skm::domain_error);
    CHECK_THROWS_AS(wrap_principal(INFINITY), skm::domain_error);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 100000; ++i) {
        const double w = wrap_principal(u(rng));
        REQUIRE(w > -pi);
        REQUIRE(w <= pi);
    }
    for (int k = -20; k <= 20; ++k)
        CHECK(wrap_principal(0.7 + two_pi * k) == Approx(0.7).margin(1e-12));
}

TEST_CASE("coupling_h reference values") {
    CHECK(coupling_h(0.0, 0.5) == 0.0);
    CHECK(coupling_h(pi / 2.0, 0.5) == Approx(0.79788456080286536).epsilon(1e-15));
    CHECK(coupling_h(-pi / 2.0, 0.5) == Approx(-0.79788456080286536).epsilon(1e-15));
    CHECK(coupling_h(pi, 0.3) == Approx(0.0).margin(1e-15));
    CHECK(coupling_h(1.0, 0.0) == std::sin(1.0));
}

TEST_CASE("coupling_h_eps reference values and errors") {
    CHECK(coupling_h_eps(0.0, 0.5, 0.1) == 0.0);
    CHECK(coupling_h_eps(pi / 2.0, 0.5, 0.1) == Approx(0.73892673727893558).epsilon(1e-15));
    CHECK(coupling_h_eps(1.3, 0.4, 0.01) == Approx(-coupling_h_eps(-1.3, 0.4, 0.01)));
    CHECK_THROWS_AS(coupling_h_eps(1.0, 0.5, 0.0), skm::domain_error);
    CHECK_THROWS_AS(coupling_h_eps(1.0, 0.5, -1.0), skm::domain_error);
}

TEST_CASE("coupling_h_delta reference values and errors") {
    CHECK(coupling_h_delta(1e-4, 0.5, 1e-3) == Approx(0.0031622776548979166).epsilon(1e-14));
    CHECK(coupling_h_delta(0.2, 0.5, 1e-3) == Approx(0.44423812870214922).epsilon(1e-15));
    CHECK(coupling_h_delta(0.0, 0.4, 1e-3) == 0.0);
    CHECK(coupling_h_delta(0.2, 0.5, 1e-3) == coupling_h(0.2, 0.5));
    CHECK_THROWS_AS(coupling_h_delta(0.2, 0.5, 0.0), skm::domain_error);
}

TEST_CASE("weight_psi") {
    CHECK(weight_psi(0.0, 0.5, 0.5, 0.0) == Approx(1.4142135623730951));
    CHECK(weight_psi(0.3, 0.3, 0.5, 0.01) == Approx(100.0));
    CHECK(weight_psi(0.1, 0.9, 0.0, 0.0) == 1.0);
    CHECK(weight_psi(0.2, 0.7, 0.3, 0.0) == weight_psi(0.7, 0.2, 0.3, 0.0));
    CHECK_THROWS_AS(weight_psi(0.4, 0.4, 0.5, 0.0), skm::domain_error);
    CHECK_THROWS_AS(weight_psi(0.1, 0.4, 1.0, 0.0), skm::domain_error);
}

TEST_CASE("row_integral and kernel constants") {
    CHECK(row_integral(0.0, 0.5) == Approx(2.0).epsilon(1e-15));
    CHECK(row_integral(0.5, 0.5) == Approx(2.8284271247461901).epsilon(1e-15));
    CHECK(row_integral(0.37, 0.0) == Approx(1.0).epsilon(1e-15));

    const auto k0 = kernel_constants(0.0);
    CHECK(k0.c_psi == 1.0);
    CHECK(k0.min_row == 1.0);
    CHECK(k0.max_asym == 0.0);
    const auto k = kernel_constants(0.5);
    CHECK(k.c_psi == Approx(2.8284271247461901).epsilon(1e-15));
    CHECK(k.min_row == Approx(2.0).epsilon(1e-15));
    CHECK(k.max_asym == Approx(0.82842712474619010).epsilon(1e-14));
    for (double b : {0.1, 0.3, 0.6, 0.9})
        CHECK(kernel_constants(b).max_asym + kernel_constants(b).min_row ==
              Approx(kernel_constants(b).c_psi).epsilon(1e-14));
    CHECK_THROWS_AS(kernel_constants(1.0), skm::domain_error);
    CHECK_THROWS_AS(kernel_constants(-0.1), skm::domain_error);
}

TEST_CASE("row_integral is maximal at one half and minimal at the boundary") {
    for (double b : {0.2, 0.5, 0.8}) {
        const auto kc = kernel_constants(b);
        for (int i = 0; i <= 1000; ++i) {
            const double v = row_integral(i / 1000.0, b);
            REQUIRE(v <= kc.c_psi * (1.0 + 1e-15));
            REQUIRE(v >= kc.min_row * (1.0 - 1e-15));
        }
        CHECK(row_integral(1.0, b) == Approx(kc.min_row).epsilon(1e-15));
    }
}

TEST_CASE("h_bar") {
    CHECK(h_bar(0.0) == Approx(1.0).epsilon(1e-15));
    const auto m = h_bar_argmax(0.5);
    CHECK(m.theta == Approx(1.1655611852072113).epsilon(1e-9));
    CHECK(m.value == Approx(0.85124106678232370).epsilon(1e-14));
    CHECK(h_bar(0.25) == Approx(0.90596496337238241).epsilon(1e-14));
    CHECK(h_bar(0.1) == Approx(0.95786802442178523).epsilon(1e-14));
    CHECK(h_bar(0.4) == Approx(0.86802757540405313).epsilon(1e-14));
    // stationarity: tan θ = θ/α at the maximizer
    for (double a : {0.1, 0.25, 0.5, 0.75}) {
        const double t = h_bar_argmax(a).theta;
        CHECK(std::tan(t) == Approx(t / a).epsilon(1e-5));
        for (int i = 1; i < 1000; ++i) REQUIRE(h_bar(a) >= coupling_h(pi * i / 1000.0, a));
    }
}

TEST_CASE("tilde_theta") {
    CHECK(*tilde_theta(0.25) == Approx(1.1655611852072113).margin(1e-11));
    CHECK(*tilde_theta(0.1) == Approx(1.4320322362434181).margin(1e-11));
    CHECK(*tilde_theta(0.4) == Approx(0.75930768903063161).margin(1e-11));
    CHECK_FALSE(tilde_theta(0.5).has_value());
    CHECK_FALSE(tilde_theta(0.8).has_value());
    CHECK_THROWS_AS(tilde_theta(0.0), skm::domain_error);
    CHECK_THROWS_AS(tilde_theta(1.0), skm::domain_error);
}

TEST_CASE("Decomposition cases") {
    const Decomposition d(0.25);
    const auto v0 = d(0.0);
    CHECK(v0.delta == 0.0);
    CHECK(v0.lambda == 0.0);
    const auto vp = d(pi);
    CHECK(vp.delta == Approx(-d.h_bar()));
    CHECK(vp.lambda == Approx(d.h_bar()).epsilon(1e-14));
    CHECK_THROWS_AS(d(7.0), skm::domain_error);
    CHECK_THROWS_AS(Decomposition(0.5), skm::no_root);
    CHECK_THROWS_AS(delta_lambda(0.1, 0.6), skm::no_root);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-two_pi, two_pi);
    for (int i = 0; i < 500; ++i) {
        const double t = u(rng);
        const auto v = delta_lambda(t, 0.25);
        REQUIRE(std::abs(v.delta + v.lambda + coupling_h(t, 0.25)) <= 1e-14);
    }
}

TEST_CASE("Delta is nonincreasing on a sorted grid") {
    for (double a : {0.1, 0.25, 0.4}) {
        const Decomposition d(a);
        double prev = d(-two_pi).delta;
        for (int i = 1; i <= 200000; ++i) {
            const double v = d(-two_pi + 2.0 * two_pi * i / 200000.0).delta;
            REQUIRE(v <= prev);
            prev = v;
        }
    }
}
