#include "worldline/error.hpp"
#include "worldline/sbp.hpp"

#include <Eigen/SVD>
#include <doctest.h>

using namespace worldline;

namespace {

Matrix boundary_matrix(int n) {
    Matrix b = Matrix::Zero(n, n);
    b(0, 0) = -1.0;
    b(n - 1, n - 1) = 1.0;
    return b;
}

Vector monomial(const SbpOperator& op, int p) {
    return Vector::LinSpaced(op.n, 0.0, op.dgamma * (op.n - 1)).array().pow(p);
}

}  // namespace

TEST_CASE("sbp21 on three points matches the trapezoidal stencil") {
    const auto op = build_sbp21(3, 0.5);
    Matrix d(3, 3);
    d << -2, 2, 0, -1, 0, 1, 0, -2, 2;
    CHECK((op.d - d).cwiseAbs().maxCoeff() == 0.0);
    CHECK(op.h.diagonal().isApprox(Vector::Map(std::array{0.25, 0.5, 0.25}.data(), 3)));
    CHECK(op.interior_order == 2);
    CHECK(op.boundary_order == 1);
}

TEST_CASE("sbp property holds to roundoff for both orders") {
    for (SbpOrder order : {SbpOrder::Sbp21, SbpOrder::Sbp42}) {
        for (int n : {min_points(order), 16, 33, 100}) {
            const auto op = build_sbp(order, n, 0.37 / (n - 1));
            const Matrix q = op.q();
            CHECK((q + q.transpose() - boundary_matrix(n)).cwiseAbs().maxCoeff() <= 1e-14);
            CHECK(op.h.diagonal().minCoeff() > 0.0);
        }
    }
}

TEST_CASE("sbp42 weights sum to the interval length") {
    const auto op = build_sbp42(20, 0.1);
    CHECK(op.h.trace() == doctest::Approx(1.9).epsilon(1e-14));
}

TEST_CASE("polynomial exactness matches the advertised orders") {
    for (SbpOrder order : {SbpOrder::Sbp21, SbpOrder::Sbp42}) {
        const auto op = build_sbp(order, 24, 1.0 / 23);
        const int b = op.boundary_rows;
        for (int p = 0; p <= op.interior_order; ++p) {
            const Vector exact = p == 0 ? Vector::Zero(op.n) : Vector(p * monomial(op, p - 1));
            const Vector err = op.d * monomial(op, p) - exact;
            CHECK(err.segment(b, op.n - 2 * b).lpNorm<Eigen::Infinity>() <= 1e-11);
            if (p <= op.boundary_order) CHECK(err.lpNorm<Eigen::Infinity>() <= 1e-11);
        }
        const int p = op.interior_order + 1;
        const Vector err = op.d * monomial(op, p) - p * monomial(op, p - 1);
        CHECK(err.segment(b, op.n - 2 * b).lpNorm<Eigen::Infinity>() > 1e-8);
    }
}

TEST_CASE("grids below the closure width are rejected") {
    CHECK_THROWS_AS(build_sbp21(2, 0.5), Error);
    CHECK_THROWS_AS(build_sbp42(8, 0.1), Error);
    CHECK_THROWS_AS(build_sbp21(5, 0.0), Error);
    try {
        build_sbp42(4, 0.1);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidDimension);
    }
}

TEST_CASE("regularized operator absorbs the initial value") {
    const double dg = 0.25;
    const auto op = build_sbp21(5, dg);
    const auto reg = regularize(op, 0.0);
    CHECK(reg.dbar(0, 0) == doctest::Approx(1.0 / dg));
    CHECK(reg.dbar(0, 1) == doctest::Approx(1.0 / dg));
    for (int c = 2; c <= 5; ++c) CHECK(reg.dbar(0, c) == 0.0);
    CHECK(reg.dbar(5, 5) == 1.0);
    CHECK(reg.hbar(5, 5) == 0.0);

    // The penalty vanishes once u[0] equals the initial value.
    const auto shifted = regularize(op, 0.7);
    Vector u = Vector::LinSpaced(5, 0.7, 1.7);
    const Vector out = apply(shifted, affine(u));
    CHECK(out(5) == 1.0);
    CHECK((out.head(5) - op.d * u).lpNorm<Eigen::Infinity>() <= 1e-13);
}

TEST_CASE("regularized operators are nonsingular") {
    for (SbpOrder order : {SbpOrder::Sbp21, SbpOrder::Sbp42}) {
        for (int n : {16, 64}) {
            const auto reg = regularize(build_sbp(order, n, 1.0 / (n - 1)), 0.3);
            Eigen::JacobiSVD<Matrix> svd(reg.dbar);
            const Vector s = svd.singularValues();
            CHECK(s(s.size() - 1) / s(0) > 1e-10);
        }
    }
}

TEST_CASE("apply and inner_product check sizes") {
    const auto op = build_sbp21(4, 1.0);
    CHECK_THROWS_AS(apply(op, Vector::Ones(5)), Error);
    CHECK_THROWS_AS(inner_product(op.h, Vector::Ones(4), Vector::Ones(3)), Error);
    CHECK(inner_product(op.h, Vector::Ones(4), Vector::Ones(4)) == doctest::Approx(3.0));
}

TEST_CASE("order names round trip") {
    CHECK(parse_sbp_order(to_string(SbpOrder::Sbp42)) == SbpOrder::Sbp42);
    CHECK_THROWS_AS(parse_sbp_order("sbp63"), Error);
}
