#include "worldline/solver.hpp"

#include "worldline/error.hpp"
#include "worldline/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace worldline {

void SolveOptions::validate() const {
    const bool ok = (!grad_tol || *grad_tol > 0.0) && grad_tol_rel > 0.0 && max_iter > 0 &&
                    lm_damping_init > 0.0 && lm_damping_max > lm_damping_init && ls_shrink > 0.0 &&
                    ls_shrink < 1.0 && ls_sufficient_decrease > 0.0 && ls_sufficient_decrease < 0.5 &&
                    ls_min_step > 0.0 && homotopy_max_steps > 0;
    if (!ok) throw Error(ErrorKind::InvalidConfig, "solver options must be positive and consistent");
}

StateVector initial_guess(const ProblemConfig& cfg) {
    cfg.validate();
    const Vector gamma = cfg.gamma_grid();
    const Vector offset = gamma.array() - cfg.gamma_i;
    StateVector s;
    s.t1 = (cfg.t_i + cfg.tdot_i * offset.array()).matrix();
    s.x1 = (cfg.x_i + cfg.xdot_i * offset.array()).matrix();
    s.t2 = s.t1;
    s.x2 = s.x1;
    s.lambda.fill(0.0);
    return s;
}

namespace {

double tolerance_for(const SolveOptions& opts, const Vector& z) {
    return opts.grad_tol ? *opts.grad_tol : opts.grad_tol_rel * (1.0 + z.lpNorm<Eigen::Infinity>());
}

}  // namespace

Solution newton_solve(const DiscreteAction& action, const SolveOptions& opts, StateVector start) {
    opts.validate();
    const int n = action.n();
    Vector z = start.pack();
    Vector grad = action.gradient(start);
    double merit = grad.squaredNorm();

    Solution sol;
    sol.merit_history.push_back(merit);
    double mu = 0.0;

    for (int it = 0;; ++it) {
        sol.grad_tol = tolerance_for(opts, z);
        if (std::sqrt(merit) <= sol.grad_tol) {
            sol.converged = true;
            break;
        }
        if (it >= opts.max_iter) break;

        const StateVector current = StateVector::unpack(z, n);
        Matrix hess = action.hessian(current);
        bool accepted = false;
        Vector z_next;
        Vector grad_next;
        double merit_next = merit;

        while (!accepted) {
            Matrix system = hess;
            system.diagonal().array() += mu;
            const auto step = solve_symmetric_indefinite(system, -grad);
            if (step) {
                // Armijo on |g|^2: along the undamped Newton direction its slope is -2 |g|^2.
                for (double alpha = 1.0; alpha >= opts.ls_min_step; alpha *= opts.ls_shrink) {
                    Vector trial = z + alpha * *step;
                    if (!trial.allFinite()) continue;
                    Vector g = action.gradient(StateVector::unpack(trial, n));
                    const double m = g.squaredNorm();
                    if (std::isfinite(m) && m <= (1.0 - 2.0 * opts.ls_sufficient_decrease * alpha) * merit) {
                        z_next = std::move(trial);
                        grad_next = std::move(g);
                        merit_next = m;
                        accepted = true;
                        break;
                    }
                }
            }
            if (accepted) break;
            mu = mu == 0.0 ? opts.lm_damping_init : mu * 10.0;
            if (mu > opts.lm_damping_max) {
                if (!step) {
                    throw Error(ErrorKind::SingularSystem, "Newton system singular even at maximum damping");
                }
                break;
            }
        }
        if (!accepted) break;  // stalled

        z = std::move(z_next);
        grad = std::move(grad_next);
        merit = merit_next;
        sol.merit_history.push_back(merit);
        sol.iterations = it + 1;
        mu = mu * 0.1 < opts.lm_damping_init ? 0.0 : mu * 0.1;
    }

    sol.state = StateVector::unpack(z, n);
    sol.grad_norm = std::sqrt(merit);
    return sol;
}

namespace {

[[noreturn]] void throw_nonconvergence(double best) {
    std::ostringstream msg;
    msg << "no critical point found; best |grad E| = " << best;
    throw Error(ErrorKind::NonConvergence, msg.str());
}

/// Continuation in the potential strength from the free problem, whose
/// straight-line guess is exact, up to the full potential.
Solution homotopy_solve(const ProblemConfig& cfg, const SolveOptions& opts) {
    StateVector state = initial_guess(cfg);
    double reached = 0.0;
    double step = 0.25;
    int stages = 0;
    int total_iterations = 0;
    std::vector<double> history;
    double best = std::numeric_limits<double>::infinity();

    while (reached < 1.0) {
        if (stages >= opts.homotopy_max_steps || step < 1.0 / 1024.0) throw_nonconvergence(best);
        const double target = std::min(1.0, reached + step);
        ProblemConfig stage_cfg = cfg;
        stage_cfg.potential = cfg.potential.scaled(target);
        Solution stage = newton_solve(DiscreteAction(stage_cfg), opts, state);
        ++stages;
        total_iterations += stage.iterations;
        if (target == 1.0) best = std::min(best, stage.grad_norm);
        if (stage.converged) {
            state = stage.state;
            reached = target;
            step = std::min(0.5, step * 1.5);
            if (reached == 1.0) {
                stage.iterations = total_iterations;
                stage.homotopy_steps = stages;
                return stage;
            }
        } else {
            step *= 0.5;
        }
    }
    throw_nonconvergence(best);
}

}  // namespace

Solution solve(const ProblemConfig& cfg, const SolveOptions& opts) {
    cfg.validate();
    opts.validate();
    const DiscreteAction action(cfg);
    Solution direct = newton_solve(action, opts, initial_guess(cfg));
    if (direct.converged) return direct;
    if (!opts.homotopy_fallback || cfg.potential.is_free()) throw_nonconvergence(direct.grad_norm);
    Solution fallback = homotopy_solve(cfg, opts);
    fallback.iterations += direct.iterations;
    return fallback;
}

StateVector resample(const StateVector& s, int n_target) {
    const int n = s.n();
    if (n < 2 || n_target < 2) throw Error(ErrorKind::InvalidDimension, "resampling needs at least two points");
    auto interp = [&](const Vector& v) {
        Vector out(n_target);
        for (int k = 0; k < n_target; ++k) {
            const double pos = static_cast<double>(k) * (n - 1) / (n_target - 1);
            const int left = std::min(static_cast<int>(pos), n - 2);
            const double w = pos - left;
            out(k) = (1.0 - w) * v(left) + w * v(left + 1);
        }
        return out;
    };
    StateVector out;
    out.t1 = interp(s.t1);
    out.t2 = interp(s.t2);
    out.x1 = interp(s.x1);
    out.x2 = interp(s.x2);
    out.lambda = s.lambda;
    return out;
}

Solution continuation_solve(const ProblemConfig& cfg, const SolveOptions& opts, const Solution& from) {
    cfg.validate();
    opts.validate();
    const DiscreteAction action(cfg);
    StateVector start = from.state.n() == cfg.n_gamma ? from.state : resample(from.state, cfg.n_gamma);
    Solution warm = newton_solve(action, opts, std::move(start));
    if (warm.converged) return warm;
    Solution cold = solve(cfg, opts);
    cold.iterations += warm.iterations;
    return cold;
}

}  // namespace worldline
