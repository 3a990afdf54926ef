#include "worldline/action.hpp"

#include "worldline/error.hpp"

#include <utility>

namespace worldline {

Vector StateVector::pack() const {
    const int n = this->n();
    Vector out(packed_size(n));
    out.segment(0, n) = t1;
    out.segment(n, n) = t2;
    out.segment(2 * n, n) = x1;
    out.segment(3 * n, n) = x2;
    for (int k = 0; k < kMultiplierCount; ++k) out(4 * n + k) = lambda[k];
    return out;
}

StateVector StateVector::unpack(const Vector& packed, int n) {
    if (packed.size() != packed_size(n)) {
        throw Error(ErrorKind::DimensionMismatch,
                    "packed state has " + std::to_string(packed.size()) + " entries, expected " +
                        std::to_string(packed_size(n)));
    }
    StateVector s;
    s.t1 = packed.segment(0, n);
    s.t2 = packed.segment(n, n);
    s.x1 = packed.segment(2 * n, n);
    s.x2 = packed.segment(3 * n, n);
    for (int k = 0; k < kMultiplierCount; ++k) s.lambda[k] = packed(4 * n + k);
    return s;
}

namespace {

enum Block { T1 = 0, T2 = 1, X1 = 2, X2 = 3, None = -1 };

/// One multiplier term: lambda * (coeff . first - coeff . second - target).
struct ConstraintRow {
    Block first;
    Block second;
    Vector coeff;
    double target;
};

std::array<ConstraintRow, kMultiplierCount> constraint_rows(const SbpOperator& sbp,
                                                            const ProblemConfig& cfg) {
    const int n = sbp.n;
    Vector e0 = Vector::Zero(n);
    e0(0) = 1.0;
    Vector en = Vector::Zero(n);
    en(n - 1) = 1.0;
    const Vector d0 = sbp.d.row(0).transpose();
    const Vector dn = sbp.d.row(n - 1).transpose();
    return {{
        {T1, None, e0, cfg.t_i},
        {T1, None, d0, cfg.tdot_i},
        {X1, None, e0, cfg.x_i},
        {X1, None, d0, cfg.xdot_i},
        {T1, T2, en, 0.0},
        {X1, X2, en, 0.0},
        {T1, T2, dn, 0.0},
        {X1, X2, dn, 0.0},
    }};
}

const Vector& block_of(const StateVector& s, Block b) {
    switch (b) {
        case T1: return s.t1;
        case T2: return s.t2;
        case X1: return s.x1;
        default: return s.x2;
    }
}

}  // namespace

DiscreteAction::DiscreteAction(ProblemConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    sbp_ = build_sbp(cfg_.order, cfg_.n_gamma, cfg_.dgamma());
    reg_t_ = regularize(sbp_, cfg_.t_i);
    reg_x_ = regularize(sbp_, cfg_.x_i);
    a_ = reg_t_.linear_part();
    hdiag_ = sbp_.h_diagonal();
    kinetic_x_ = a_.transpose() * hdiag_.asDiagonal() * a_;
}

void DiscreteAction::check(const StateVector& s) const {
    const auto n = static_cast<Eigen::Index>(sbp_.n);
    if (s.t1.size() != n || s.t2.size() != n || s.x1.size() != n || s.x2.size() != n) {
        throw Error(ErrorKind::DimensionMismatch,
                    "state vectors must have n_gamma = " + std::to_string(n) + " entries");
    }
}

Vector DiscreteAction::reg_derivative_t(const Vector& t) const { return a_ * t + reg_t_.shift(); }

Vector DiscreteAction::reg_derivative_x(const Vector& x) const { return a_ * x + reg_x_.shift(); }

double DiscreteAction::bulk_value(const StateVector& s) const {
    check(s);
    auto branch = [this](const Vector& t, const Vector& x) {
        const Vector ut = reg_derivative_t(t);
        const Vector ux = reg_derivative_x(x);
        const Vector g = metric_g00(x, cfg_);
        return 0.5 * (hdiag_.array() * g.array() * ut.array().square()).sum() -
               0.5 * (hdiag_.array() * ux.array().square()).sum();
    };
    return branch(s.t1, s.x1) - branch(s.t2, s.x2);
}

std::array<double, kMultiplierCount> DiscreteAction::constraint_residuals(const StateVector& s) const {
    check(s);
    const auto rows = constraint_rows(sbp_, cfg_);
    std::array<double, kMultiplierCount> r{};
    for (int j = 0; j < kMultiplierCount; ++j) {
        const auto& row = rows[j];
        r[j] = row.coeff.dot(block_of(s, row.first)) - row.target;
        if (row.second != None) r[j] -= row.coeff.dot(block_of(s, row.second));
    }
    return r;
}

double DiscreteAction::constraint_value(const StateVector& s) const {
    const auto r = constraint_residuals(s);
    double sum = 0.0;
    for (int j = 0; j < kMultiplierCount; ++j) sum += s.lambda[j] * r[j];
    return sum;
}

Vector DiscreteAction::gradient(const StateVector& s) const {
    check(s);
    const StateLayout lay = layout();
    const int n = lay.n;
    Vector grad = Vector::Zero(lay.size());

    auto branch = [&](const Vector& t, const Vector& x, int t_off, int x_off, double sign) {
        const Vector ut = reg_derivative_t(t);
        const Vector ux = reg_derivative_x(x);
        const Vector g = metric_g00(x, cfg_);
        const Vector gp = metric_g00_prime(x, cfg_);
        const Vector weighted_ut = (hdiag_.array() * g.array() * ut.array()).matrix();
        const Vector weighted_ux = (hdiag_.array() * ux.array()).matrix();
        grad.segment(t_off, n) += sign * (a_.transpose() * weighted_ut);
        grad.segment(x_off, n) += sign * ((0.5 * hdiag_.array() * gp.array() * ut.array().square()).matrix() -
                                          a_.transpose() * weighted_ux);
    };
    branch(s.t1, s.x1, lay.t1(), lay.x1(), 1.0);
    branch(s.t2, s.x2, lay.t2(), lay.x2(), -1.0);

    const auto rows = constraint_rows(sbp_, cfg_);
    const auto r = constraint_residuals(s);
    for (int j = 0; j < kMultiplierCount; ++j) {
        const auto& row = rows[j];
        grad.segment(row.first * n, n) += s.lambda[j] * row.coeff;
        if (row.second != None) grad.segment(row.second * n, n) -= s.lambda[j] * row.coeff;
        grad(lay.lambda(j)) = r[j];
    }
    return grad;
}

Matrix DiscreteAction::hessian(const StateVector& s) const {
    check(s);
    const StateLayout lay = layout();
    const int n = lay.n;
    Matrix hess = Matrix::Zero(lay.size(), lay.size());

    auto branch = [&](const Vector& t, const Vector& x, int t_off, int x_off, double sign) {
        const Vector ut = reg_derivative_t(t);
        const Vector g = metric_g00(x, cfg_);
        const Vector gp = metric_g00_prime(x, cfg_);
        const Vector gpp = x.unaryExpr([this](double xk) { return 2.0 * cfg_.potential.d2v(xk) / cfg_.m; });

        const Vector tt_weight = (hdiag_.array() * g.array()).matrix();
        hess.block(t_off, t_off, n, n) += sign * (a_.transpose() * tt_weight.asDiagonal() * a_);

        Matrix xx = -kinetic_x_;
        xx.diagonal() += (0.5 * hdiag_.array() * gpp.array() * ut.array().square()).matrix();
        hess.block(x_off, x_off, n, n) += sign * xx;

        const Vector xt_weight = (hdiag_.array() * gp.array() * ut.array()).matrix();
        const Matrix xt = xt_weight.asDiagonal() * a_;
        hess.block(x_off, t_off, n, n) += sign * xt;
        hess.block(t_off, x_off, n, n) += sign * xt.transpose();
    };
    branch(s.t1, s.x1, lay.t1(), lay.x1(), 1.0);
    branch(s.t2, s.x2, lay.t2(), lay.x2(), -1.0);

    const auto rows = constraint_rows(sbp_, cfg_);
    for (int j = 0; j < kMultiplierCount; ++j) {
        const auto& row = rows[j];
        const int lj = lay.lambda(j);
        hess.block(row.first * n, lj, n, 1) += row.coeff;
        hess.block(lj, row.first * n, 1, n) += row.coeff.transpose();
        if (row.second != None) {
            hess.block(row.second * n, lj, n, 1) -= row.coeff;
            hess.block(lj, row.second * n, 1, n) -= row.coeff.transpose();
        }
    }
    return hess;
}

double action_value(const StateVector& s, const ProblemConfig& cfg) {
    return DiscreteAction(cfg).value(s);
}

Vector action_gradient(const StateVector& s, const ProblemConfig& cfg) {
    return DiscreteAction(cfg).gradient(s);
}

Matrix action_hessian(const StateVector& s, const ProblemConfig& cfg) {
    return DiscreteAction(cfg).hessian(s);
}

}  // namespace worldline
