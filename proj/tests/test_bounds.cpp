#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "skm/bounds.hpp"

using Catch::Approx;
using namespace skm;

namespace {

ScenarioDiameters reference_diameters() {
    const Grid g(512);
    return scenario_diameters(sample_on_grid(Profile::sine(), g), sample_on_grid(Profile::cosine(), g));
}

Trace synthetic_trace(const std::vector<std::pair<double, double>>& t_diam) {
    const Field dummy(Grid(2));
    Trace tr{{}, {}, {}, {}, dummy, dummy};
    for (auto [t, d] : t_diam) tr.records.push_back({t, 0.0, d, 0.0, 0.0, d, 0, 0.0});
    return tr;
}

}  // namespace

TEST_CASE("grid-sampled diameters") {
    const auto d = reference_diameters();
    CHECK(d.d0 == Approx(0.84041410255965310).epsilon(1e-15));
    CHECK(d.d0 == Approx(std::sin(511.0 / 512.0)).epsilon(1e-15));
    CHECK(d.d_nu == Approx(0.45805522770410186).epsilon(1e-15));
}

TEST_CASE("kappa_star reproduces the reference thresholds") {
    const auto d = reference_diameters();
    CHECK(kappa_star(0.5, d, 0.2, 0.2) == Approx(0.938074).margin(1e-6));
    CHECK(kappa_star(0.5, d, 0.7, 0.7) == Approx(0.731129).margin(1e-6));
    CHECK(kappa_star(0.5, {d.d0, 0.0}, 0.2, 0.2) == 0.0);
    CHECK_THROWS_AS(kappa_star(1.0, d, 0.2, 0.2), skm::domain_error);
    CHECK_THROWS_AS(kappa_star(0.5, {3.5, 0.1}, 0.2, 0.2), skm::domain_error);
    CHECK_THROWS_AS(kappa_star(0.5, {0.0, 0.1}, 0.2, 0.2), skm::domain_error);
}

TEST_CASE("kappa_star is nonincreasing in eps and linear in d_nu") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const ScenarioDiameters d{0.05 + 3.0 * u(rng), 2.0 * u(rng)};
        const double a = 0.01 + 0.98 * u(rng);
        const double b = 0.98 * u(rng);
        const double e1 = 0.01 + 0.98 * u(rng);
        const double e2 = 0.01 + 0.98 * u(rng);
        const double lo = std::min(e1, e2), hi = std::max(e1, e2);
        REQUIRE(kappa_star(hi, d, a, b) <= kappa_star(lo, d, a, b));
        REQUIRE(kappa_star(lo, {d.d0, 3.0 * d.d_nu}, a, b) ==
                Approx(3.0 * kappa_star(lo, d, a, b)).epsilon(1e-13));
    }
}

TEST_CASE("synchronization envelope") {
    const auto d = reference_diameters();
    const double te = t_envelope(d, 0.2, 0.2, 1.0);
    CHECK(te == Approx(5.1198731392482390).epsilon(1e-14));
    CHECK(t_envelope(d, 0.2, 0.2, 2.0) == Approx(te / 2.0).epsilon(1e-15));
    CHECK(sync_envelope(0.0, d, 0.2, 0.2, 1.0) == Approx(d.d0).epsilon(1e-15));
    CHECK(sync_envelope(2.5, d, 0.2, 0.2, 1.0) == Approx(0.029484830939720172).epsilon(1e-12));
    CHECK(sync_envelope(te, d, 0.2, 0.2, 1.0) == Approx(0.0).margin(1e-12));
    CHECK(sync_envelope(te * 1.5, d, 0.2, 0.2, 1.0) == 0.0);
    CHECK_THROWS_AS(sync_envelope(-1.0, d, 0.2, 0.2, 1.0), skm::domain_error);
    CHECK_THROWS_AS(sync_envelope(1.0, d, 0.0, 0.2, 1.0), skm::domain_error);
    CHECK_THROWS_AS(t_envelope(d, 0.2, 0.2, 0.0), skm::domain_error);

    for (double a : {0.1, 0.5, 0.9}) {
        const double tz = t_envelope(d, a, 0.3, 1.2);
        double prev = d.d0;
        for (int i = 1; i <= 1000; ++i) {
            const double v = sync_envelope(tz * i / 900.0, d, a, 0.3, 1.2);
            REQUIRE(v <= prev);
            REQUIRE(v >= 0.0);
            prev = v;
        }
        CHECK(prev == 0.0);
    }
}

TEST_CASE("beta = 0 limits") {
    const ScenarioDiameters d{1.0, 0.5};
    const double s = std::sin(1.0);
    CHECK(t_envelope(d, 0.5, 0.0, 1.0) == Approx(1.0 / (0.5 * s)).epsilon(1e-15));
    CHECK(kappa_star(0.5, d, 0.5, 0.0) == Approx(0.5 / (0.5 * s)).epsilon(1e-15));
    CHECK(bounded_diameter_threshold(d, 0.5, 0.0) == Approx(0.5 / s).epsilon(1e-15));
    CHECK(practical_bound(0.0, 2.0, d, 0.5, 0.0).asymptote == Approx(0.5 / (2.0 * s)).epsilon(1e-15));
}

TEST_CASE("practical bound") {
    const auto d = reference_diameters();
    CHECK(bounded_diameter_threshold(d, 0.2, 0.2) == Approx(0.55810216641337342).epsilon(1e-14));
    const auto p = practical_bound(0.0, 1.5, d, 0.2, 0.2);
    CHECK(p.value == Approx(d.d0).epsilon(1e-15));
    CHECK(p.asymptote == Approx(0.31269128754859559).epsilon(1e-14));
    CHECK(practical_bound(0.0, 1.0, d, 0.2, 0.2).asymptote == Approx(0.46903693132289339).epsilon(1e-14));
    CHECK(practical_bound(1e4, 1.5, d, 0.2, 0.2).value == Approx(p.asymptote).epsilon(1e-14));
    double prev = p.value;
    for (int i = 1; i <= 200; ++i) {
        const double v = practical_bound(0.05 * i, 1.5, d, 0.2, 0.2).value;
        REQUIRE(v <= prev);
        REQUIRE(v >= p.asymptote);
        prev = v;
    }
    CHECK_THROWS_AS(practical_bound(0.0, 0.5, d, 0.2, 0.2), skm::hypothesis_not_met);
}

TEST_CASE("t_star") {
    const auto d = reference_diameters();
    CHECK(t_star(0.5, 1.0, d, 0.2, 0.2) == Approx(2.5439861362596774).epsilon(1e-13));
    CHECK(t_star(0.5, 1.5, d, 0.2, 0.2) == Approx(0.70709752152719397).epsilon(1e-13));
    CHECK(t_star(0.9, 1.5, d, 0.2, 0.2) == 0.0);
    const double near = t_star(d.d0 * (1.0 - 1e-9), 1.5, d, 0.2, 0.2);
    CHECK(near > 0.0);
    CHECK(near < 1e-8);
    // the bound equals eps at t_star
    CHECK(practical_bound(t_star(0.5, 1.5, d, 0.2, 0.2), 1.5, d, 0.2, 0.2).value ==
          Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(t_star(0.5, 0.9, d, 0.2, 0.2), skm::hypothesis_not_met);
}

TEST_CASE("verdicts on synthetic traces") {
    const auto d = reference_diameters();
    ScenarioDescriptor hom{0.2, 0.2, 1.0, 1e-3, 0.5, {d.d0, 0.0}, true, false};

    SECTION("constant phase") {
        ScenarioDescriptor c = hom;
        c.diameters = {0.0, 0.0};
        const auto r = evaluate_verdicts(synthetic_trace({{0, 0}, {1, 0}, {2, 0}}), c);
        CHECK(r.contraction_ok);
        CHECK(r.envelope_violations.count == 0);
        CHECK_FALSE(r.t_env.has_value());
        CHECK_FALSE(r.ordering_ok.has_value());
    }
    SECTION("homogeneous within the envelope") {
        const double te = t_envelope(d, 0.2, 0.2, 1.0);
        const auto r = evaluate_verdicts(
            synthetic_trace({{0, d.d0}, {1, 0.3}, {2, 0.05}, {te, 0.002}, {1.2 * te, 1e-4}}), hom);
        CHECK(r.contraction_ok);
        CHECK(r.envelope_violations.count == 0);
        CHECK(r.t_env == Approx(te));
        CHECK(r.synced_by_deadline == true);
        CHECK_FALSE(r.kappa_star.has_value());
    }
    SECTION("envelope violation and growth") {
        const auto r = evaluate_verdicts(synthetic_trace({{0, d.d0}, {2.5, 0.2}, {3, 0.21}}), hom);
        CHECK(r.envelope_violations.count == 2);
        CHECK(r.envelope_violations.worst_margin > 0.1);
        CHECK_FALSE(r.contraction_ok);
        CHECK_FALSE(r.synced_by_deadline.has_value());
    }
    SECTION("heterogeneous") {
        ScenarioDescriptor het = hom;
        het.homogeneous = false;
        het.diameters = d;
        het.kappa = 1.5;
        const auto r = evaluate_verdicts(synthetic_trace({{0, d.d0}, {0.5, 0.55}, {0.8, 0.45}, {4, 0.32}}), het);
        CHECK(r.kappa_star == Approx(kappa_star(0.5, d, 0.2, 0.2)));
        CHECK(r.practical_A == Approx(0.31269128754859559));
        CHECK(r.t_star == Approx(0.70709752152719397));
        CHECK(r.practical_ok == true);
        CHECK(r.exceeds_eps);
        CHECK(r.contraction_ok);
        CHECK_FALSE(r.t_env.has_value());

        het.kappa = 0.4;
        const auto weak = evaluate_verdicts(synthetic_trace({{0, d.d0}, {1, 0.9}}), het);
        CHECK_FALSE(weak.practical_A.has_value());
        CHECK_FALSE(weak.practical_ok.has_value());
        CHECK_FALSE(weak.contraction_ok);
    }
    SECTION("ordering") {
        ScenarioDescriptor mono = hom;
        mono.monotone = true;
        Trace tr = synthetic_trace({{0, 0.5}, {1, 0.4}});
        tr.snapshots.push_back({0.0, Field(Grid(3), {0.0, 0.2, 0.5})});
        tr.snapshots.push_back({1.0, Field(Grid(3), {0.0, 0.1, 0.4})});
        CHECK(evaluate_verdicts(tr, mono).ordering_ok == true);
        tr.snapshots.push_back({2.0, Field(Grid(3), {0.0, 0.1, 0.1})});
        CHECK(evaluate_verdicts(tr, mono).ordering_ok == false);
    }
    CHECK_THROWS_AS(evaluate_verdicts(synthetic_trace({}), hom), skm::domain_error);
}

TEST_CASE("report serialization") {
    BoundReport r;
    r.t_env = 2.5;
    r.synced_by_deadline = true;
    const std::string kv = to_key_value(r);
    CHECK(kv.find("t_env=2.5\n") != std::string::npos);
    CHECK(kv.find("kappa_star=\n") != std::string::npos);
    CHECK(kv.find("synced_by_deadline=true\n") != std::string::npos);
    CHECK(kv.find("ordering_ok=\n") != std::string::npos);
    const std::string row = to_csv_row(r);
    CHECK(std::count(row.begin(), row.end(), ',') == 10);
    const std::string header = bound_report_csv_header();
    CHECK(std::count(header.begin(), header.end(), ',') == 10);
}
