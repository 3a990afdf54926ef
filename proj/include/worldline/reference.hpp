#pragma once

#include "worldline/config.hpp"
#include "worldline/diagnostics.hpp"
#include "worldline/solver.hpp"

#include <map>
#include <string>
#include <vector>

namespace worldline {

/// Dense-output solution of the continuum geodesic equations
///   d/dgamma (g00 tdot) = 0,   xddot + g00'(x)/2 tdot^2 = 0.
class ReferenceTrajectory {
public:
    struct Point {
        double t, x, tdot, xdot;
    };

    ReferenceTrajectory() = default;
    ReferenceTrajectory(std::vector<double> gamma, std::vector<Point> samples, std::vector<Point> rates);

    /// Cubic Hermite interpolation; reproduces the stored samples at the nodes.
    Point evaluate(double gamma) const;
    Trajectory sample(const Vector& gamma) const;

    const std::vector<double>& gamma_samples() const noexcept { return gamma_; }
    const std::vector<Point>& samples() const noexcept { return samples_; }

private:
    std::vector<double> gamma_;
    std::vector<Point> samples_;
    std::vector<Point> rates_;  // d/dgamma of each sample
};

/// Adaptive Dormand-Prince 5(4) integration over [gamma_i, gamma_f] with
/// relative and absolute tolerance `tol` in [1e-14, 1e-6].
ReferenceTrajectory solve_geodesic_ode(const ProblemConfig& cfg, double tol = 1e-12);

/// x(t) from the relativistic equation of motion in physical time,
///   d^2x/dt^2 = -V'(x)/m (1 - (dx/dt)^2 / c^2)^{3/2}.
class PhysicalTrajectory {
public:
    struct Point {
        double x, v;
    };

    PhysicalTrajectory() = default;
    PhysicalTrajectory(std::vector<double> t, std::vector<Point> samples, std::vector<Point> rates);

    Point evaluate(double t) const;
    double t_begin() const { return t_.front(); }
    double t_end() const { return t_.back(); }

private:
    std::vector<double> t_;
    std::vector<Point> samples_;
    std::vector<Point> rates_;
};

/// Integrates from t_i with x(t_i) = x_i, dx/dt(t_i) = xdot_i / tdot_i up to t_end.
PhysicalTrajectory solve_physical_eom(const ProblemConfig& cfg, double t_end, double tol = 1e-12);

/// L2 distance over gamma between the geodesic oracle's x(gamma) and the
/// physical-time solution evaluated at the oracle's t(gamma).
double oracle_discrepancy_l2(const ProblemConfig& cfg, double tol = 1e-12, int samples = 2001);

struct ExponentFit {
    double beta = 0.0;
    /// Root-mean-square residual of the log-log fit.
    double residual = 0.0;
    int points = 0;
};

/// Least-squares fit of log eps = beta log dgamma + const. Needs >= 3 points.
ExponentFit fit_exponent(const std::vector<double>& dgamma, const std::vector<double>& eps);

struct ConvergenceRow {
    int n_gamma = 0;
    double dgamma = 0.0;
    double tdot_i = 0.0;
    ErrorNorms eps;
    double endpoint_delta_e = 0.0;
    double max_interior_delta_e = 0.0;
    double t_final = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    /// Keyed by eps_final_x, eps_final_t, eps_l2_x, eps_l2_t.
    std::map<std::string, ExponentFit> fits;
};

struct StudyOptions {
    SolveOptions solve;
    double oracle_tol = 1e-12;
    /// Rows with n_gamma below this are tabulated but excluded from the fits.
    int fit_min_n = 0;
    /// Upper bound on concurrently running per-n solves.
    int threads = 1;
    /// Optional per-row tdot_i (same length as n_list); xdot_i is scaled along
    /// so the physical initial velocity stays fixed.
    std::vector<double> tdot_list;
};

ConvergenceTable convergence_study(const ProblemConfig& tmpl, const std::vector<int>& n_list, SbpOrder order,
                                   const StudyOptions& opts = {});

}  // namespace worldline
