#include "worldline/action.hpp"
#include "worldline/error.hpp"
#include "worldline/solver.hpp"

#include <doctest.h>

#include <random>

using namespace worldline;

namespace {

StateVector random_state(const ProblemConfig& cfg, std::mt19937_64& rng, double spread) {
    std::normal_distribution<double> noise(0.0, spread);
    Vector z = initial_guess(cfg).pack();
    for (Eigen::Index k = 0; k < z.size(); ++k) z(k) += noise(rng);
    return StateVector::unpack(z, cfg.n_gamma);
}

}  // namespace

TEST_CASE("pack and unpack are inverse") {
    std::mt19937_64 rng(1);
    const auto cfg = linear_example(SbpOrder::Sbp21, 7);
    const auto s = random_state(cfg, rng, 1.0);
    const Vector z = s.pack();
    CHECK(z.size() == StateVector::packed_size(7));
    CHECK((StateVector::unpack(z, 7).pack() - z).norm() == 0.0);
    CHECK_THROWS_AS(StateVector::unpack(z.head(10), 7), Error);
}

TEST_CASE("gradient and Hessian agree with finite differences") {
    std::mt19937_64 rng(7);
    for (const auto& cfg : {linear_example(SbpOrder::Sbp21, 10), quartic_example(SbpOrder::Sbp42, 10)}) {
        const DiscreteAction action(cfg);
        for (int trial = 0; trial < 5; ++trial) {
            const auto s = random_state(cfg, rng, 0.1);
            const Vector z = s.pack();
            const Vector g = action.gradient(s);
            const Matrix hess = action.hessian(s);
            CHECK((hess - hess.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * hess.cwiseAbs().maxCoeff());
            for (Eigen::Index k = 0; k < z.size(); k += 3) {
                const double h = 1e-5;
                Vector zp = z, zm = z;
                zp(k) += h;
                zm(k) -= h;
                const auto sp = StateVector::unpack(zp, cfg.n_gamma);
                const auto sm = StateVector::unpack(zm, cfg.n_gamma);
                const double fd = (action.value(sp) - action.value(sm)) / (2 * h);
                CHECK(fd == doctest::Approx(g(k)).epsilon(1e-6).scale(1.0));
                const Vector col = (action.gradient(sp) - action.gradient(sm)) / (2 * h);
                CHECK((col - hess.col(k)).norm() <= 1e-5 * (1.0 + hess.col(k).norm()));
            }
        }
    }
}

TEST_CASE("identical branches cancel the bulk action") {
    std::mt19937_64 rng(3);
    const auto cfg = quartic_example(SbpOrder::Sbp21, 9);
    auto s = random_state(cfg, rng, 0.2);
    s.t2 = s.t1;
    s.x2 = s.x1;
    CHECK(DiscreteAction(cfg).bulk_value(s) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("bulk action is invariant under a common time shift") {
    std::mt19937_64 rng(11);
    const auto cfg = linear_example(SbpOrder::Sbp42, 12);
    const auto s = random_state(cfg, rng, 0.1);
    for (double shift : {0.5, -3.0, 100.0}) {
        ProblemConfig moved = cfg;
        moved.t_i += shift;
        StateVector t = s;
        t.t1.array() += shift;
        t.t2.array() += shift;
        const double before = DiscreteAction(cfg).bulk_value(s);
        const double after = DiscreteAction(moved).bulk_value(t);
        CHECK(after == doctest::Approx(before).epsilon(1e-11));
    }
}

TEST_CASE("shifting t alone moves only the t_i multiplier term") {
    std::mt19937_64 rng(12);
    const auto cfg = linear_example(SbpOrder::Sbp21, 12);
    const DiscreteAction action(cfg);
    const auto s = random_state(cfg, rng, 0.1);
    StateVector t = s;
    const double shift = 0.25;
    t.t1.array() += shift;
    t.t2.array() += shift;
    CHECK(action.constraint_value(t) - action.constraint_value(s) ==
          doctest::Approx(s.lambda[0] * shift).epsilon(1e-10));
}

TEST_CASE("constraint residuals vanish on the straight-line guess") {
    const auto cfg = quartic_example(SbpOrder::Sbp42, 16);
    const auto r = DiscreteAction(cfg).constraint_residuals(initial_guess(cfg));
    for (double v : r) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("regularized derivative carries the initial value") {
    const auto cfg = linear_example(SbpOrder::Sbp21, 8);
    const DiscreteAction action(cfg);
    const Vector x = Vector::Constant(8, cfg.x_i);
    CHECK(action.reg_derivative_x(x).lpNorm<Eigen::Infinity>() <= 1e-13);
    const Vector t = Vector::Constant(8, cfg.t_i + 1.0);
    CHECK(action.reg_derivative_t(t)(0) != doctest::Approx(0.0));
}

TEST_CASE("action rejects mismatched states") {
    const auto cfg = linear_example(SbpOrder::Sbp21, 8);
    const auto s = initial_guess(linear_example(SbpOrder::Sbp21, 9));
    CHECK_THROWS_AS(DiscreteAction(cfg).gradient(s), Error);
}
