#include <catch_amalgamated.hpp>

#include <cmath>

#include "skm/verify.hpp"

using Catch::Approx;
using namespace skm;

TEST_CASE("kappa_star checks pass") {
    const auto r = verify::check_kappa_star();
    REQUIRE(r.size() == 2);
    for (const auto& c : r) {
        INFO(c.detail);
        CHECK(c.passed);
    }
}

TEST_CASE("quadrature oracles") {
    CHECK(verify::oracle::power_integral(0.0, 1.0, 0.5) == Approx(2.0).epsilon(1e-14));
    CHECK(verify::oracle::power_integral(1.0, 4.0, 0.5) == Approx(2.0).epsilon(1e-14));
    CHECK(verify::oracle::power_integral(0.3, 0.3, 0.5) == 0.0);
    CHECK(verify::oracle::cell_average(0, 0, 2, 0.5) == Approx(3.7712361663282535).epsilon(1e-12));
    CHECK(verify::oracle::cell_average(1, 0, 2, 0.5) == Approx(1.5620971670050799).epsilon(1e-12));
    for (double x : {0.0, 0.1, 0.5, 0.93})
        CHECK(verify::oracle::row_integral(x, 0.7) == Approx(row_integral(x, 0.7)).epsilon(1e-12));
}

TEST_CASE("kernel oracle checks at small sizes") {
    const auto cells = verify::check_cell_average_oracle({0.2, 0.8}, {4, 8});
    INFO(cells.detail);
    CHECK(cells.passed);
    const auto rows = verify::check_row_integral_extremes({0.2, 0.5, 0.8});
    INFO(rows.detail);
    CHECK(rows.passed);
}

TEST_CASE("one-sided asymmetry integral") {
    for (double beta : {0.2, 0.5, 0.8}) {
        // corner value equals the closed form
        CHECK(verify::oracle::one_sided_integral(1.0, 0.0, beta) ==
              Approx((std::pow(2.0, beta) - 1.0) / (1.0 - beta)).epsilon(1e-12));
        CHECK(verify::oracle::one_sided_integral(0.0, 1.0, beta) ==
              Approx(verify::oracle::one_sided_integral(1.0, 0.0, beta)).epsilon(1e-12));
    }
    // The true maximum sits near a = 1/3, b = 1 and exceeds the corner value.
    struct Case {
        double beta, value;
    };
    for (auto [beta, value] : {Case{0.2, 0.30721}, Case{0.5, 1.46410}, Case{0.8, 7.0410}}) {
        const auto m = verify::locate_asymmetry_maximum(beta, 60);
        CHECK(m.value == Approx(value).epsilon(2e-3));
        CHECK(std::min(m.a, m.b) == Approx(1.0 / 3.0).margin(0.05));
        CHECK(std::max(m.a, m.b) == 1.0);
        CHECK(m.value > kernel_constants(beta).max_asym);
    }
    CHECK(verify::oracle::one_sided_integral(1.0 / 3.0, 1.0, 0.5) == Approx(1.4641016).epsilon(1e-6));
}

TEST_CASE("empirical scalar constants") {
    const double reference_c[] = {1.125, 1.249, 1.385, 1.485, 1.706};
    const double reference_l[] = {0.938, 0.800, 0.689, 0.629, 0.536};
    const double alphas[] = {0.1, 0.25, 0.4, 0.5, 0.7};
    for (int i = 0; i < 5; ++i) {
        CHECK(verify::holder_constant(alphas[i]) == Approx(reference_c[i]).margin(1e-3));
        CHECK(verify::one_sided_lipschitz_constant(alphas[i]) == Approx(reference_l[i]).margin(1e-3));
    }
}

TEST_CASE("scalar property suite passes at full size") {
    const auto results = verify::check_scalar_properties();
    CHECK(results.size() == 11);
    for (const auto& r : results) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.passed);
    }
}

TEST_CASE("scalar suite is reproducible for a fixed seed") {
    verify::ScalarSuiteOptions opt;
    opt.samples = 50'000;
    const auto a = verify::check_scalar_properties(opt);
    const auto b = verify::check_scalar_properties(opt);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].passed == b[i].passed);
        CHECK(a[i].detail == b[i].detail);
    }
}
