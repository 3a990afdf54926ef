#pragma once

#include "worldline/action.hpp"
#include "worldline/config.hpp"

#include <optional>
#include <vector>

namespace worldline {

struct SolveOptions {
    /// Absolute threshold on |grad E|_2. When unset the threshold is
    /// grad_tol_rel * (1 + |state|_inf), evaluated at the current iterate.
    std::optional<double> grad_tol;
    double grad_tol_rel = 1e-12;
    int max_iter = 200;
    double lm_damping_init = 1e-8;
    double lm_damping_max = 1e8;
    double ls_shrink = 0.5;
    double ls_sufficient_decrease = 1e-4;
    double ls_min_step = 1e-4;
    /// Fall back to a continuation in the potential strength when Newton from
    /// the straight-line guess stalls.
    bool homotopy_fallback = true;
    int homotopy_max_steps = 64;

    void validate() const;
};

struct Solution {
    StateVector state;
    double grad_norm = 0.0;
    double grad_tol = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Number of continuation stages used (0 when Newton succeeded directly).
    int homotopy_steps = 0;
    /// |grad E|^2 after every accepted step, starting with the initial guess.
    std::vector<double> merit_history;
};

/// Straight line through the initial data on both branches, multipliers zero.
StateVector initial_guess(const ProblemConfig& cfg);

/// Critical point of the discrete action. Throws Error(NonConvergence) with
/// the best gradient norm in the message when no iterate meets grad_tol.
Solution solve(const ProblemConfig& cfg, const SolveOptions& opts = {});

/// Same contract as solve(), starting from `from` linearly interpolated in
/// gamma onto cfg's grid.
Solution continuation_solve(const ProblemConfig& cfg, const SolveOptions& opts, const Solution& from);

/// Damped Newton from an explicit starting state, no fallback. Never throws on
/// non-convergence; check Solution::converged.
Solution newton_solve(const DiscreteAction& action, const SolveOptions& opts, StateVector start);

/// Linear interpolation of a state onto n_target equidistant points spanning
/// the same gamma interval; multipliers are copied.
StateVector resample(const StateVector& s, int n_target);

}  // namespace worldline
