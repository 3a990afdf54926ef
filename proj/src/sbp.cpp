#include "worldline/sbp.hpp"

#include "worldline/error.hpp"

#include <array>
#include <string>

namespace worldline {

std::string_view to_string(SbpOrder order) noexcept {
    return order == SbpOrder::Sbp21 ? "sbp21" : "sbp42";
}

SbpOrder parse_sbp_order(std::string_view name) {
    if (name == "sbp21" || name == "SBP21") return SbpOrder::Sbp21;
    if (name == "sbp42" || name == "SBP42") return SbpOrder::Sbp42;
    throw Error(ErrorKind::InvalidConfig, "unknown operator order '" + std::string(name) + "'");
}

int min_points(SbpOrder order) noexcept {
    return order == SbpOrder::Sbp21 ? 3 : 9;
}

namespace {

void check_grid(SbpOrder order, int n, double dgamma) {
    if (n < min_points(order)) {
        throw Error(ErrorKind::InvalidDimension,
                    std::string(to_string(order)) + " needs at least " +
                        std::to_string(min_points(order)) + " points, got " + std::to_string(n));
    }
    if (!(dgamma > 0.0)) {
        throw Error(ErrorKind::InvalidDimension, "grid spacing must be positive");
    }
}

}  // namespace

SbpOperator build_sbp21(int n, double dgamma) {
    check_grid(SbpOrder::Sbp21, n, dgamma);

    SbpOperator op;
    op.order = SbpOrder::Sbp21;
    op.n = n;
    op.dgamma = dgamma;
    op.interior_order = 2;
    op.boundary_order = 1;
    op.boundary_rows = 1;

    op.d = Matrix::Zero(n, n);
    op.d(0, 0) = -1.0;
    op.d(0, 1) = 1.0;
    for (int k = 1; k < n - 1; ++k) {
        op.d(k, k - 1) = -0.5;
        op.d(k, k + 1) = 0.5;
    }
    op.d(n - 1, n - 2) = -1.0;
    op.d(n - 1, n - 1) = 1.0;
    op.d /= dgamma;

    op.h = Matrix::Identity(n, n) * dgamma;
    op.h(0, 0) = 0.5 * dgamma;
    op.h(n - 1, n - 1) = 0.5 * dgamma;
    return op;
}

SbpOperator build_sbp42(int n, double dgamma) {
    check_grid(SbpOrder::Sbp42, n, dgamma);

    // Left closure; the right one is its mirror image with the sign flipped.
    constexpr std::array<std::array<double, 6>, 4> closure{{
        {-24.0 / 17.0, 59.0 / 34.0, -4.0 / 17.0, -3.0 / 34.0, 0.0, 0.0},
        {-1.0 / 2.0, 0.0, 1.0 / 2.0, 0.0, 0.0, 0.0},
        {4.0 / 43.0, -59.0 / 86.0, 0.0, 59.0 / 86.0, -4.0 / 43.0, 0.0},
        {3.0 / 98.0, 0.0, -59.0 / 98.0, 0.0, 32.0 / 49.0, -4.0 / 49.0},
    }};
    constexpr std::array<double, 4> weights{17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0};
    constexpr std::array<double, 5> stencil{1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0};

    SbpOperator op;
    op.order = SbpOrder::Sbp42;
    op.n = n;
    op.dgamma = dgamma;
    op.interior_order = 4;
    op.boundary_order = 2;
    op.boundary_rows = 4;

    op.d = Matrix::Zero(n, n);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 6; ++c) {
            op.d(r, c) = closure[r][c];
            op.d(n - 1 - r, n - 1 - c) = -closure[r][c];
        }
    }
    for (int k = 4; k < n - 4; ++k) {
        for (int j = 0; j < 5; ++j) op.d(k, k - 2 + j) = stencil[j];
    }
    op.d /= dgamma;

    op.h = Matrix::Identity(n, n) * dgamma;
    for (int r = 0; r < 4; ++r) {
        op.h(r, r) = weights[r] * dgamma;
        op.h(n - 1 - r, n - 1 - r) = weights[r] * dgamma;
    }
    return op;
}

SbpOperator build_sbp(SbpOrder order, int n, double dgamma) {
    return order == SbpOrder::Sbp21 ? build_sbp21(n, dgamma) : build_sbp42(n, dgamma);
}

RegularizedOperator regularize(const SbpOperator& op, double init_value) {
    const int n = op.n;
    RegularizedOperator reg;
    reg.init_value = init_value;
    reg.sigma0 = -1.0;

    // sigma0 H^{-1} E0 only touches the (0, 0) entry.
    const double penalty = reg.sigma0 / op.h(0, 0);

    reg.dbar = Matrix::Zero(n + 1, n + 1);
    reg.dbar.topLeftCorner(n, n) = op.d;
    reg.dbar(0, 0) -= penalty;
    reg.dbar(0, n) = penalty * init_value + 0.0;  // no negative zero
    reg.dbar(n, n) = 1.0;

    reg.hbar = Matrix::Zero(n + 1, n + 1);
    reg.hbar.topLeftCorner(n, n) = op.h;
    return reg;
}

Vector affine(const Vector& v) {
    Vector out(v.size() + 1);
    out.head(v.size()) = v;
    out(v.size()) = 1.0;
    return out;
}

Vector apply(const Matrix& m, const Vector& v) {
    if (m.cols() != v.size()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "matrix has " + std::to_string(m.cols()) + " columns, vector has " +
                        std::to_string(v.size()) + " entries");
    }
    return m * v;
}

Vector apply(const SbpOperator& op, const Vector& v) { return apply(op.d, v); }

Vector apply(const RegularizedOperator& op, const Vector& v) { return apply(op.dbar, v); }

double inner_product(const Matrix& h, const Vector& u, const Vector& v) {
    if (h.rows() != h.cols() || h.rows() != u.size() || u.size() != v.size()) {
        throw Error(ErrorKind::DimensionMismatch, "inner product operands disagree in size");
    }
    return u.dot(h * v);
}

}  // namespace worldline
