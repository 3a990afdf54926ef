#include "worldline/diagnostics.hpp"
#include "worldline/error.hpp"
#include "worldline/solver.hpp"

#include <doctest.h>

using namespace worldline;

TEST_CASE("charge deviation vanishes in the interior of a solution") {
    for (SbpOrder order : {SbpOrder::Sbp21, SbpOrder::Sbp42}) {
        const auto cfg = quartic_example(order, 24);
        const auto sol = solve(cfg);
        const auto traj = physical_trajectory(sol.state);
        const auto de = charge_deviation(traj, cfg);
        CHECK(max_interior_abs(de) <= 1e-9);
        CHECK(std::abs(de(0)) <= 1e-9);
        CHECK(std::abs(de(de.size() - 1)) > 1e-6);
    }
}

TEST_CASE("straight lines have zero geodesic residuals in free space") {
    ProblemConfig cfg;
    cfg.n_gamma = 12;
    cfg.order = SbpOrder::Sbp42;
    const Vector g = cfg.gamma_grid();
    const Trajectory traj{(2.0 + 3.0 * g.array()).matrix(), (1.0 - 0.5 * g.array()).matrix()};
    const auto r = geodesic_residuals(traj, cfg);
    CHECK(r.t.lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK(r.x.lpNorm<Eigen::Infinity>() <= 1e-12);
    const auto q = free_case_charges(traj, cfg);
    CHECK(q.q_x.maxCoeff() - q.q_x.minCoeff() <= 1e-13);
    CHECK(q.q_boost.maxCoeff() - q.q_boost.minCoeff() <= 1e-12);
}

TEST_CASE("boost charge is conserved for c different from one") {
    ProblemConfig cfg;
    cfg.c = 3.0;
    cfg.n_gamma = 16;
    cfg.tdot_i = 1.2;
    cfg.xdot_i = 2.0;
    cfg.x_i = -1.0;
    const auto sol = solve(cfg);
    const auto q = free_case_charges(physical_trajectory(sol.state), cfg);
    CHECK(q.q_boost.maxCoeff() - q.q_boost.minCoeff() <= 1e-10);
}

TEST_CASE("free charges need a free potential") {
    const auto cfg = linear_example(SbpOrder::Sbp21, 8);
    const Trajectory traj{Vector::LinSpaced(8, 0, 1), Vector::Ones(8)};
    CHECK_THROWS_AS(free_case_charges(traj, cfg), Error);
}

TEST_CASE("split branches violate the physical limit") {
    auto s = initial_guess(linear_example(SbpOrder::Sbp21, 8));
    s.x2(3) += 1e-6;
    const auto gap = physical_limit_gap(s);
    CHECK(gap.max_dx == doctest::Approx(1e-6));
    try {
        physical_trajectory(s);
        FAIL("expected a violation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PhysicalLimitViolated);
    }
    CHECK_NOTHROW(physical_trajectory(s, 1e-5));
}

TEST_CASE("H_BVP stays below the linear growth bound") {
    const auto cfg = quartic_example(SbpOrder::Sbp21, 32);
    const auto traj = physical_trajectory(solve(cfg).state);
    const auto h = h_bvp_profile(traj, cfg);
    CHECK(h.total <= h.bound);
    CHECK(h.profile.size() == 32);
}

TEST_CASE("error norms against a reference") {
    const auto op = build_sbp21(5, 0.25);
    const Trajectory a{Vector::Zero(5), Vector::Zero(5)};
    Trajectory b = a;
    CHECK(error_norms(a, b, op.h).l2_x == 0.0);
    b.x.setConstant(2.0);
    b.t(4) = -0.5;
    const auto e = error_norms(a, b, op.h);
    CHECK(e.final_x == doctest::Approx(2.0));
    CHECK(e.final_t == doctest::Approx(0.5));
    CHECK(e.l2_x == doctest::Approx(2.0));
}

TEST_CASE("report collects every profile") {
    const auto cfg = linear_example(SbpOrder::Sbp21, 16);
    const auto traj = physical_trajectory(solve(cfg).state);
    const auto rep = build_report(traj, cfg);
    CHECK(rep.gamma.size() == 16);
    CHECK_FALSE(rep.free_charges.has_value());
    CHECK_FALSE(rep.errors.has_value());
    CHECK(rep.delta_e.isApprox(charge_deviation(traj, cfg)));
    CHECK_THROWS_AS(build_report(traj, linear_example(SbpOrder::Sbp21, 17)), Error);
}
