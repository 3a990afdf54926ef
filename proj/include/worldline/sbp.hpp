#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>

namespace worldline {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class SbpOrder { Sbp21, Sbp42 };

std::string_view to_string(SbpOrder order) noexcept;
SbpOrder parse_sbp_order(std::string_view name);

/// Smallest grid for which the left and right boundary closures do not overlap.
int min_points(SbpOrder order) noexcept;

/// Classical diagonal-norm summation-by-parts first-derivative operator.
///
/// d = h^{-1} q with q + q^T = diag(-1, 0, ..., 0, 1). Both matrices are
/// stored dense; the grids used here never exceed a few hundred points.
struct SbpOperator {
    SbpOrder order = SbpOrder::Sbp21;
    int n = 0;
    double dgamma = 0.0;
    Matrix d;
    Matrix h;
    int interior_order = 0;
    int boundary_order = 0;
    /// Rows at each end that use the one-sided closure.
    int boundary_rows = 0;

    Matrix q() const { return h * d; }
    Vector h_diagonal() const { return h.diagonal(); }
};

SbpOperator build_sbp21(int n, double dgamma);
SbpOperator build_sbp42(int n, double dgamma);
SbpOperator build_sbp(SbpOrder order, int n, double dgamma);

/// Affine (n+1)x(n+1) operator with the initial-value penalty absorbed.
///
/// Acting on (u, 1) it returns (D u - sigma0 H^{-1} E0 (u - g), 1) with
/// g = (init_value, 0, ..., 0). hbar is H padded with a zero row and column,
/// so the trailing affine entry never contributes to inner products.
struct RegularizedOperator {
    Matrix dbar;
    Matrix hbar;
    double init_value = 0.0;
    double sigma0 = -1.0;

    int n() const { return static_cast<int>(dbar.rows()) - 1; }

    /// Leading n x n block acting on the coordinates.
    Matrix linear_part() const { return dbar.topLeftCorner(n(), n()); }
    /// Shift column restricted to the coordinate rows.
    Vector shift() const { return dbar.col(n()).head(n()); }
};

RegularizedOperator regularize(const SbpOperator& op, double init_value);

/// Appends the trailing affine 1.
Vector affine(const Vector& v);

Vector apply(const Matrix& m, const Vector& v);
Vector apply(const SbpOperator& op, const Vector& v);
/// Expects v to carry the trailing affine entry; the result carries it too.
Vector apply(const RegularizedOperator& op, const Vector& v);

double inner_product(const Matrix& h, const Vector& u, const Vector& v);

}  // namespace worldline
