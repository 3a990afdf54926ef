#pragma once

#include "worldline/config.hpp"
#include "worldline/sbp.hpp"

#include <array>

namespace worldline {

inline constexpr int kMultiplierCount = 8;

/// Unknowns of the doubled problem: forward (1) and backward (2) copies of
/// t and x on the gamma grid plus the eight Lagrange multipliers.
///
/// Packed order is (t1, t2, x1, x2, lambda_1..8), 4 n + 8 entries in total.
struct StateVector {
    Vector t1, t2, x1, x2;
    std::array<double, kMultiplierCount> lambda{};

    int n() const { return static_cast<int>(t1.size()); }
    Vector pack() const;
    static StateVector unpack(const Vector& packed, int n);
    static int packed_size(int n) { return 4 * n + kMultiplierCount; }
};

/// Offsets of each block inside the packed vector.
struct StateLayout {
    int n;
    int t1() const { return 0; }
    int t2() const { return n; }
    int x1() const { return 2 * n; }
    int x2() const { return 3 * n; }
    int lambda(int k) const { return 4 * n + k; }
    int size() const { return 4 * n + kMultiplierCount; }
};

/// The discretized doubled-degree-of-freedom action for one ProblemConfig.
///
///   E = 1/2 [ (Dt t1)^T d[g00(x1)] Hbar (Dt t1) - (Dx x1)^T Hbar (Dx x1) ]
///     - 1/2 [ same with index 2 ]
///     + l1 (t1[0] - t_i) + l2 ((D t1)[0] - tdot_i) + l3 (x1[0] - x_i) + l4 ((D x1)[0] - xdot_i)
///     + l5 (t1[N] - t2[N]) + l6 (x1[N] - x2[N])
///     + l7 ((D t1)[N] - (D t2)[N]) + l8 ((D x1)[N] - (D x2)[N])
///
/// Dt, Dx are the regularized operators carrying t_i and x_i; the multiplier
/// rows use the classical D.
class DiscreteAction {
public:
    explicit DiscreteAction(ProblemConfig cfg);

    const ProblemConfig& config() const noexcept { return cfg_; }
    const SbpOperator& sbp() const noexcept { return sbp_; }
    const RegularizedOperator& reg_t() const noexcept { return reg_t_; }
    const RegularizedOperator& reg_x() const noexcept { return reg_x_; }
    int n() const noexcept { return sbp_.n; }
    StateLayout layout() const noexcept { return {sbp_.n}; }

    /// Bulk (forward minus backward) part only.
    double bulk_value(const StateVector& s) const;
    /// Multiplier terms only.
    double constraint_value(const StateVector& s) const;
    double value(const StateVector& s) const { return bulk_value(s) + constraint_value(s); }

    /// The eight constraint residuals in multiplier order.
    std::array<double, kMultiplierCount> constraint_residuals(const StateVector& s) const;

    Vector gradient(const StateVector& s) const;
    Matrix hessian(const StateVector& s) const;

    /// Regularized derivative (Dbar u)[0..n) for a plain length-n vector.
    Vector reg_derivative_t(const Vector& t) const;
    Vector reg_derivative_x(const Vector& x) const;

private:
    void check(const StateVector& s) const;

    ProblemConfig cfg_;
    SbpOperator sbp_;
    RegularizedOperator reg_t_, reg_x_;
    Matrix a_;       // shared linear part of both regularized operators
    Vector hdiag_;
    Matrix kinetic_x_;  // a^T diag(h) a
};

double action_value(const StateVector& s, const ProblemConfig& cfg);
Vector action_gradient(const StateVector& s, const ProblemConfig& cfg);
Matrix action_hessian(const StateVector& s, const ProblemConfig& cfg);

}  // namespace worldline
