#include "worldline/diagnostics.hpp"

#include "worldline/error.hpp"

#include <cmath>
#include <sstream>

namespace worldline {

namespace {

SbpOperator sbp_for(const ProblemConfig& cfg) { return build_sbp(cfg.order, cfg.n_gamma, cfg.dgamma()); }

void check(const Trajectory& traj, const ProblemConfig& cfg) {
    if (traj.t.size() != cfg.n_gamma || traj.x.size() != cfg.n_gamma) {
        throw Error(ErrorKind::DimensionMismatch, "trajectory length differs from n_gamma");
    }
}

}  // namespace

PhysicalLimitGap physical_limit_gap(const StateVector& s) {
    return {(s.t1 - s.t2).lpNorm<Eigen::Infinity>(), (s.x1 - s.x2).lpNorm<Eigen::Infinity>()};
}

Trajectory physical_trajectory(const StateVector& s, double tol) {
    const auto gap = physical_limit_gap(s);
    if (!(gap.max_dt <= tol && gap.max_dx <= tol)) {
        std::ostringstream msg;
        msg << "branches differ by |dt| = " << gap.max_dt << ", |dx| = " << gap.max_dx;
        throw Error(ErrorKind::PhysicalLimitViolated, msg.str());
    }
    return {s.t1, s.x1};
}

Vector noether_charge_t(const Trajectory& traj, const ProblemConfig& cfg) {
    check(traj, cfg);
    const auto sbp = sbp_for(cfg);
    return ((sbp.d * traj.t).array() * metric_g00(traj.x, cfg).array()).matrix();
}

Vector charge_deviation(const Trajectory& traj, const ProblemConfig& cfg) {
    const double continuum = cfg.tdot_i * metric_g00(cfg.x_i, cfg);
    return (noether_charge_t(traj, cfg).array() - continuum).matrix();
}

GeodesicResiduals geodesic_residuals(const Trajectory& traj, const ProblemConfig& cfg) {
    check(traj, cfg);
    const auto sbp = sbp_for(cfg);
    const Vector dt = sbp.d * traj.t;
    const Vector charge = (dt.array() * metric_g00(traj.x, cfg).array()).matrix();
    GeodesicResiduals r;
    r.t = sbp.d * charge;
    r.x = sbp.d * (sbp.d * traj.x) +
          (0.5 * metric_g00_prime(traj.x, cfg).array() * dt.array().square()).matrix();
    return r;
}

FreeCharges free_case_charges(const Trajectory& traj, const ProblemConfig& cfg) {
    if (!cfg.potential.is_free()) {
        throw Error(ErrorKind::NotFreePotential, "translation and boost charges need V = 0");
    }
    check(traj, cfg);
    const auto sbp = sbp_for(cfg);
    const Vector dt = sbp.d * traj.t;
    const Vector dx = sbp.d * traj.x;
    // Killing vectors K_x = (0, 1) and K_eta = (x / c^2, t) of g = diag(c^2, -1).
    FreeCharges q;
    q.q_x = -dx;
    q.q_boost = (traj.x.array() * dt.array() - traj.t.array() * dx.array()).matrix();
    return q;
}

HBvp h_bvp_profile(const Trajectory& traj, const ProblemConfig& cfg) {
    check(traj, cfg);
    const auto sbp = sbp_for(cfg);
    const Vector dt = sbp.d * traj.t;
    const Vector dx = sbp.d * traj.x;
    HBvp out;
    out.profile = (0.5 * (metric_g00(traj.x, cfg).array() * dt.array().square() + dx.array().square())).matrix();
    out.total = sbp.h.diagonal().dot(out.profile);
    out.bound = metric_g00(cfg.x_i, cfg) * cfg.tdot_i * (traj.t(traj.t.size() - 1) - traj.t(0));
    return out;
}

ErrorNorms error_norms(const Trajectory& traj, const Trajectory& reference, const Matrix& h) {
    const auto n = traj.t.size();
    if (traj.x.size() != n || reference.t.size() != n || reference.x.size() != n || h.rows() != n ||
        h.cols() != n) {
        throw Error(ErrorKind::DimensionMismatch, "error norms need equally sized trajectories");
    }
    const Vector ex = traj.x - reference.x;
    const Vector et = traj.t - reference.t;
    ErrorNorms e;
    e.final_x = std::abs(ex(n - 1));
    e.final_t = std::abs(et(n - 1));
    e.l2_x = std::sqrt(ex.dot(h * ex));
    e.l2_t = std::sqrt(et.dot(h * et));
    return e;
}

double max_interior_abs(const Vector& v) {
    if (v.size() < 3) return 0.0;
    return v.segment(1, v.size() - 2).lpNorm<Eigen::Infinity>();
}

DiagnosticsReport build_report(const Trajectory& traj, const ProblemConfig& cfg,
                               const std::optional<Trajectory>& reference) {
    check(traj, cfg);
    const auto sbp = sbp_for(cfg);
    DiagnosticsReport r;
    r.gamma = cfg.gamma_grid();
    r.traj = traj;
    r.time_mesh_velocity = sbp.d * traj.t;
    r.q_t = noether_charge_t(traj, cfg);
    r.delta_e = charge_deviation(traj, cfg);
    const auto g = geodesic_residuals(traj, cfg);
    r.delta_g_t = g.t;
    r.delta_g_x = g.x;
    r.h_bvp = h_bvp_profile(traj, cfg);
    if (cfg.potential.is_free()) r.free_charges = free_case_charges(traj, cfg);
    if (reference) r.errors = error_norms(traj, *reference, sbp.h);
    return r;
}

}  // namespace worldline
