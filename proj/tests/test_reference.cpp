#include "worldline/error.hpp"
#include "worldline/reference.hpp"

#include <doctest.h>

#include <cmath>

using namespace worldline;

TEST_CASE("free geodesic is a straight line") {
    ProblemConfig cfg;
    cfg.x_i = 0.3;
    cfg.tdot_i = 2.0;
    cfg.xdot_i = 0.5;
    const auto ref = solve_geodesic_ode(cfg);
    for (double g : {0.0, 0.123, 0.5, 1.0}) {
        const auto p = ref.evaluate(g);
        CHECK(p.t == doctest::Approx(2.0 * g).epsilon(1e-13).scale(1.0));
        CHECK(p.x == doctest::Approx(0.3 + 0.5 * g).epsilon(1e-13));
    }
    CHECK_THROWS_AS(ref.evaluate(1.5), Error);
}

TEST_CASE("geodesic oracle conserves g00 tdot") {
    const auto cfg = quartic_example();
    const auto ref = solve_geodesic_ode(cfg);
    const double q0 = cfg.tdot_i * metric_g00(cfg.x_i, cfg);
    for (double g = 0.0; g <= 1.0; g += 0.01) {
        const auto p = ref.evaluate(g);
        CHECK(p.tdot * metric_g00(p.x, cfg) == doctest::Approx(q0).epsilon(1e-9));
    }
}

TEST_CASE("physical-time oracle keeps |v| below c and conserves energy") {
    const auto cfg = linear_example();
    const auto phys = solve_physical_eom(cfg, 3.0);
    const double alpha = cfg.potential.strength();
    const auto energy = [&](const PhysicalTrajectory::Point& p) {
        return 1.0 / std::sqrt(1.0 - p.v * p.v) + alpha * p.x;
    };
    const double e0 = energy(phys.evaluate(0.0));
    for (double t = 0.0; t <= 3.0; t += 0.1) {
        const auto p = phys.evaluate(t);
        CHECK(std::abs(p.v) < 1.0);
        CHECK(energy(p) == doctest::Approx(e0).epsilon(1e-9));
    }
}

TEST_CASE("oracle tolerances outside the supported range are refused") {
    CHECK_THROWS_AS(solve_geodesic_ode(linear_example(), 1e-16), Error);
    CHECK_THROWS_AS(solve_geodesic_ode(linear_example(), 1e-3), Error);
    CHECK_THROWS_AS(solve_physical_eom(linear_example(), -1.0), Error);
}

TEST_CASE("exponent fit recovers a power law") {
    const std::vector<double> h{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> e;
    for (double v : h) e.push_back(3.0 * std::pow(v, 2.5));
    const auto fit = fit_exponent(h, e);
    CHECK(fit.beta == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(fit.residual <= 1e-12);
    CHECK(fit.points == 4);
    try {
        fit_exponent({0.1, 0.05}, {1.0, 0.5});
        FAIL("expected refusal");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::FitRefused);
    }
}

TEST_CASE("convergence study is independent of thread count") {
    StudyOptions serial;
    StudyOptions parallel;
    parallel.threads = 3;
    const auto cfg = linear_example();
    const auto a = convergence_study(cfg, {16, 24, 32}, SbpOrder::Sbp21, serial);
    const auto b = convergence_study(cfg, {16, 24, 32}, SbpOrder::Sbp21, parallel);
    REQUIRE(a.rows.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(a.rows[k].eps.final_x == b.rows[k].eps.final_x);
        CHECK(a.rows[k].endpoint_delta_e == b.rows[k].endpoint_delta_e);
    }
    CHECK(a.fits.at("eps_final_x").beta == b.fits.at("eps_final_x").beta);
    CHECK(a.fits.at("eps_final_x").beta == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("fit_min_n excludes coarse rows") {
    StudyOptions opts;
    opts.fit_min_n = 24;
    const auto table = convergence_study(linear_example(), {16, 24, 32}, SbpOrder::Sbp21, opts);
    CHECK(table.rows.size() == 3);
    CHECK(table.fits.empty());
}

TEST_CASE("scaled study keeps the physical initial velocity") {
    StudyOptions opts;
    opts.tdot_list = {1.0, 2.0};
    const auto table = convergence_study(linear_example(), {16, 32}, SbpOrder::Sbp21, opts);
    CHECK(table.rows[1].tdot_i == 2.0);
    CHECK(table.rows[1].t_final > 1.9);
    CHECK(table.fits.empty());
    opts.tdot_list = {1.0};
    CHECK_THROWS_AS(convergence_study(linear_example(), {16, 32}, SbpOrder::Sbp21, opts), Error);
}
