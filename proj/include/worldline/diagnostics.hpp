#pragma once

#include "worldline/action.hpp"
#include "worldline/config.hpp"
#include "worldline/sbp.hpp"

#include <optional>
#include <utility>

namespace worldline {

/// A single physical trajectory sampled on the gamma grid.
struct Trajectory {
    Vector t;
    Vector x;
};

struct PhysicalLimitGap {
    double max_dt = 0.0;  // max |t1 - t2|
    double max_dx = 0.0;  // max |x1 - x2|
};

PhysicalLimitGap physical_limit_gap(const StateVector& s);

/// Returns (t1, x1) after checking both branches coincide to `tol`;
/// throws Error(PhysicalLimitViolated) otherwise.
Trajectory physical_trajectory(const StateVector& s, double tol = 1e-9);

/// Q_t = (D t) o g00(x).
Vector noether_charge_t(const Trajectory& traj, const ProblemConfig& cfg);
/// Q_t minus its value fixed by the initial data, tdot_i g00(x_i).
Vector charge_deviation(const Trajectory& traj, const ProblemConfig& cfg);

struct GeodesicResiduals {
    Vector t;  // D (g00(x) o D t)
    Vector x;  // D D x + g00'(x)/2 o (D t) o (D t)
};
GeodesicResiduals geodesic_residuals(const Trajectory& traj, const ProblemConfig& cfg);

struct FreeCharges {
    Vector q_x;      // -(D x)
    Vector q_boost;  // x o (D t) - t o (D x)
};
/// Translation and boost charges; only defined for V = 0.
FreeCharges free_case_charges(const Trajectory& traj, const ProblemConfig& cfg);

struct HBvp {
    Vector profile;      // 1/2 (g00 (Dt)^2 + (Dx)^2)
    double total = 0.0;  // 1^T H profile
    double bound = 0.0;  // g00(x_i) tdot_i (t[N] - t[0])
};
HBvp h_bvp_profile(const Trajectory& traj, const ProblemConfig& cfg);

struct ErrorNorms {
    double final_x = 0.0;
    double final_t = 0.0;
    double l2_x = 0.0;
    double l2_t = 0.0;
};
/// Endpoint and H-weighted L2 deviations from a reference on the same grid.
ErrorNorms error_norms(const Trajectory& traj, const Trajectory& reference, const Matrix& h);

/// max |v_k| over the interior indices 1 .. N-2.
double max_interior_abs(const Vector& v);

struct DiagnosticsReport {
    Vector gamma;
    Trajectory traj;
    Vector time_mesh_velocity;
    Vector q_t;
    Vector delta_e;
    Vector delta_g_t;
    Vector delta_g_x;
    HBvp h_bvp;
    std::optional<FreeCharges> free_charges;
    std::optional<ErrorNorms> errors;

    double max_interior_delta_e() const { return max_interior_abs(delta_e); }
    double endpoint_delta_e() const { return delta_e(delta_e.size() - 1); }
};

DiagnosticsReport build_report(const Trajectory& traj, const ProblemConfig& cfg,
                               const std::optional<Trajectory>& reference = std::nullopt);

}  // namespace worldline
