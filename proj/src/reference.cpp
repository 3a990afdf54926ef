#include "worldline/reference.hpp"

#include "worldline/error.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <utility>

namespace worldline {

namespace odeint = boost::numeric::odeint;

namespace {

struct Hermite {
    double h00, h10, h01, h11;
};

Hermite hermite_basis(double s, double h) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return {2 * s3 - 3 * s2 + 1, (s3 - 2 * s2 + s) * h, -2 * s3 + 3 * s2, (s3 - s2) * h};
}

double hermite(const Hermite& b, double f0, double d0, double f1, double d1) {
    return b.h00 * f0 + b.h10 * d0 + b.h01 * f1 + b.h11 * d1;
}

/// Index of the interval [nodes[k], nodes[k+1]] holding `at`.
std::size_t locate(const std::vector<double>& nodes, double at) {
    const double span = nodes.back() - nodes.front();
    const double slack = 1e-12 * std::max(1.0, std::abs(span));
    if (at < nodes.front() - slack || at > nodes.back() + slack) {
        throw Error(ErrorKind::DimensionMismatch, "dense output requested outside the integrated range");
    }
    auto it = std::upper_bound(nodes.begin(), nodes.end(), at);
    std::size_t k = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
    return std::min(k, nodes.size() - 2);
}

void check_tolerance(double tol) {
    if (!(tol >= 1e-14 && tol <= 1e-6)) {
        throw Error(ErrorKind::InvalidConfig, "oracle tolerance must lie in [1e-14, 1e-6]");
    }
}

/// Controlled Dormand-Prince stepping with a step cap so the cubic Hermite
/// dense output stays well below the integration tolerance.
template <class State, class Rhs, class Record, class Check>
void integrate_recorded(Rhs&& rhs, State y, double begin, double end, double tol, Record&& record,
                        Check&& check) {
    auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(tol, tol);
    const double span = end - begin;
    const double max_step = span / 2000.0;
    double at = begin;
    double step = max_step / 16.0;
    constexpr long max_steps = 2'000'000;
    long taken = 0;
    record(at, y);
    while (at < end) {
        step = std::min({step, max_step, end - at});
        if (step < 1e-14 * span) {
            throw Error(ErrorKind::StiffnessSuspected, "step size collapsed near " + std::to_string(at));
        }
        const auto result = stepper.try_step(rhs, y, at, step);
        if (result != odeint::success) continue;
        for (double v : y) {
            if (!std::isfinite(v)) throw Error(ErrorKind::StepFailure, "non-finite state");
        }
        check(y);
        record(at, y);
        if (++taken > max_steps) throw Error(ErrorKind::StepFailure, "step budget exhausted");
        if (end - at < 1e-15 * span) break;
    }
}

}  // namespace

ReferenceTrajectory::ReferenceTrajectory(std::vector<double> gamma, std::vector<Point> samples,
                                         std::vector<Point> rates)
    : gamma_(std::move(gamma)), samples_(std::move(samples)), rates_(std::move(rates)) {
    if (gamma_.size() < 2 || samples_.size() != gamma_.size() || rates_.size() != gamma_.size()) {
        throw Error(ErrorKind::DimensionMismatch, "reference trajectory needs matching samples");
    }
    for (std::size_t k = 1; k < gamma_.size(); ++k) {
        if (!(gamma_[k] > gamma_[k - 1])) {
            throw Error(ErrorKind::InvalidDimension, "reference samples must increase in gamma");
        }
    }
}

ReferenceTrajectory::Point ReferenceTrajectory::evaluate(double gamma) const {
    const std::size_t k = locate(gamma_, gamma);
    const double h = gamma_[k + 1] - gamma_[k];
    const auto b = hermite_basis((gamma - gamma_[k]) / h, h);
    const Point& p0 = samples_[k];
    const Point& p1 = samples_[k + 1];
    const Point& r0 = rates_[k];
    const Point& r1 = rates_[k + 1];
    return {hermite(b, p0.t, r0.t, p1.t, r1.t), hermite(b, p0.x, r0.x, p1.x, r1.x),
            hermite(b, p0.tdot, r0.tdot, p1.tdot, r1.tdot), hermite(b, p0.xdot, r0.xdot, p1.xdot, r1.xdot)};
}

Trajectory ReferenceTrajectory::sample(const Vector& gamma) const {
    Trajectory out{Vector(gamma.size()), Vector(gamma.size())};
    for (Eigen::Index k = 0; k < gamma.size(); ++k) {
        const auto p = evaluate(gamma(k));
        out.t(k) = p.t;
        out.x(k) = p.x;
    }
    return out;
}

ReferenceTrajectory solve_geodesic_ode(const ProblemConfig& cfg, double tol) {
    cfg.validate();
    check_tolerance(tol);
    using State = std::array<double, 4>;  // t, tdot, x, xdot

    auto rhs = [&cfg](const State& y, State& dy, double /*gamma*/) {
        const double g = metric_g00(y[2], cfg);
        const double gp = 2.0 * cfg.potential.dv(y[2]) / cfg.m;
        dy[0] = y[1];
        dy[1] = -(gp * y[3] / g) * y[1];
        dy[2] = y[3];
        dy[3] = -0.5 * gp * y[1] * y[1];
    };

    std::vector<double> gamma;
    std::vector<ReferenceTrajectory::Point> samples, rates;
    auto record = [&](double at, const State& y) {
        State dy;
        rhs(y, dy, at);
        gamma.push_back(at);
        samples.push_back({y[0], y[2], y[1], y[3]});
        rates.push_back({dy[0], dy[2], dy[1], dy[3]});
    };
    auto check = [&cfg](const State& y) {
        if (!(metric_g00(y[2], cfg) > 0.0)) throw Error(ErrorKind::StepFailure, "g00 turned non-positive");
    };
    integrate_recorded(rhs, State{cfg.t_i, cfg.tdot_i, cfg.x_i, cfg.xdot_i}, cfg.gamma_i, cfg.gamma_f, tol,
                       record, check);
    return ReferenceTrajectory(std::move(gamma), std::move(samples), std::move(rates));
}

PhysicalTrajectory::PhysicalTrajectory(std::vector<double> t, std::vector<Point> samples, std::vector<Point> rates)
    : t_(std::move(t)), samples_(std::move(samples)), rates_(std::move(rates)) {
    if (t_.size() < 2 || samples_.size() != t_.size() || rates_.size() != t_.size()) {
        throw Error(ErrorKind::DimensionMismatch, "physical trajectory needs matching samples");
    }
}

PhysicalTrajectory::Point PhysicalTrajectory::evaluate(double t) const {
    const std::size_t k = locate(t_, t);
    const double h = t_[k + 1] - t_[k];
    const auto b = hermite_basis((t - t_[k]) / h, h);
    return {hermite(b, samples_[k].x, rates_[k].x, samples_[k + 1].x, rates_[k + 1].x),
            hermite(b, samples_[k].v, rates_[k].v, samples_[k + 1].v, rates_[k + 1].v)};
}

PhysicalTrajectory solve_physical_eom(const ProblemConfig& cfg, double t_end, double tol) {
    cfg.validate();
    check_tolerance(tol);
    if (!(t_end > cfg.t_i)) throw Error(ErrorKind::InvalidConfig, "t_end must exceed t_i");
    using State = std::array<double, 2>;  // x, v

    const double c2 = cfg.c * cfg.c;
    auto rhs = [&cfg, c2](const State& y, State& dy, double /*t*/) {
        const double lorentz = std::max(0.0, 1.0 - y[1] * y[1] / c2);
        dy[0] = y[1];
        dy[1] = -cfg.potential.dv(y[0]) / cfg.m * lorentz * std::sqrt(lorentz);
    };

    std::vector<double> times;
    std::vector<PhysicalTrajectory::Point> samples, rates;
    auto record = [&](double at, const State& y) {
        State dy;
        rhs(y, dy, at);
        times.push_back(at);
        samples.push_back({y[0], y[1]});
        rates.push_back({dy[0], dy[1]});
    };
    auto check = [&cfg](const State& y) {
        if (!(std::abs(y[1]) < cfg.c)) throw Error(ErrorKind::SuperluminalVelocity, "|dx/dt| reached c");
    };
    integrate_recorded(rhs, State{cfg.x_i, cfg.initial_velocity()}, cfg.t_i, t_end, tol, record, check);
    return PhysicalTrajectory(std::move(times), std::move(samples), std::move(rates));
}

double oracle_discrepancy_l2(const ProblemConfig& cfg, double tol, int samples) {
    const auto geodesic = solve_geodesic_ode(cfg, tol);
    const double t_end = geodesic.samples().back().t;
    const auto physical = solve_physical_eom(cfg, t_end, tol);
    const Vector gamma = Vector::LinSpaced(samples, cfg.gamma_i, cfg.gamma_f);
    const double step = (cfg.gamma_f - cfg.gamma_i) / (samples - 1);
    double sum = 0.0;
    for (int k = 0; k < samples; ++k) {
        const auto p = geodesic.evaluate(gamma(k));
        const double t = std::clamp(p.t, physical.t_begin(), physical.t_end());
        const double diff = p.x - physical.evaluate(t).x;
        const double w = (k == 0 || k == samples - 1) ? 0.5 : 1.0;
        sum += w * step * diff * diff;
    }
    return std::sqrt(sum);
}

ExponentFit fit_exponent(const std::vector<double>& dgamma, const std::vector<double>& eps) {
    if (dgamma.size() != eps.size()) throw Error(ErrorKind::DimensionMismatch, "fit inputs differ in length");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k < eps.size(); ++k) {
        if (dgamma[k] > 0.0 && eps[k] > 0.0 && std::isfinite(eps[k])) {
            pts.emplace_back(std::log(dgamma[k]), std::log(eps[k]));
        }
    }
    if (pts.size() < 3) {
        throw Error(ErrorKind::FitRefused, "need at least 3 positive points, have " + std::to_string(pts.size()));
    }
    const double m = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
    }
    const double mx = sx / m;
    const double my = sy / m;
    double sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    ExponentFit fit;
    fit.beta = sxy / sxx;
    const double intercept = my - fit.beta * mx;
    double ss = 0;
    for (auto [x, y] : pts) ss += std::pow(y - (fit.beta * x + intercept), 2);
    fit.residual = std::sqrt(ss / m);
    fit.points = static_cast<int>(pts.size());
    return fit;
}

namespace {

ConvergenceRow study_row(const ProblemConfig& tmpl, int n, SbpOrder order, double tdot, const StudyOptions& opts) {
    ProblemConfig cfg = tmpl;
    cfg.n_gamma = n;
    cfg.order = order;
    if (tdot > 0.0) {
        cfg.xdot_i = tmpl.xdot_i * tdot / tmpl.tdot_i;
        cfg.tdot_i = tdot;
    }
    ConvergenceRow row;
    row.n_gamma = n;
    row.dgamma = cfg.dgamma();
    row.tdot_i = cfg.tdot_i;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
        const Solution sol = solve(cfg, opts.solve);
        row.converged = sol.converged;
        row.grad_norm = sol.grad_norm;
        row.iterations = sol.iterations;
        const Trajectory traj = physical_trajectory(sol.state);
        const auto reference = solve_geodesic_ode(cfg, opts.oracle_tol).sample(cfg.gamma_grid());
        const auto report = build_report(traj, cfg, reference);
        row.eps = *report.errors;
        row.endpoint_delta_e = report.endpoint_delta_e();
        row.max_interior_delta_e = report.max_interior_delta_e();
        row.t_final = traj.t(n - 1);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NonConvergence && e.kind() != ErrorKind::PhysicalLimitViolated) throw;
        row.converged = false;
        row.eps = {nan, nan, nan, nan};
        row.endpoint_delta_e = row.max_interior_delta_e = row.t_final = row.grad_norm = nan;
    }
    return row;
}

}  // namespace

ConvergenceTable convergence_study(const ProblemConfig& tmpl, const std::vector<int>& n_list, SbpOrder order,
                                   const StudyOptions& opts) {
    if (!std::is_sorted(n_list.begin(), n_list.end()) || n_list.empty()) {
        throw Error(ErrorKind::InvalidConfig, "n_list must be non-empty and ascending");
    }
    if (!opts.tdot_list.empty() && opts.tdot_list.size() != n_list.size()) {
        throw Error(ErrorKind::InvalidConfig, "tdot_list must match n_list in length");
    }

    ConvergenceTable table;
    table.rows.resize(n_list.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < n_list.size(); k = next++) {
            try {
                const double tdot = opts.tdot_list.empty() ? 0.0 : opts.tdot_list[k];
                table.rows[k] = study_row(tmpl, n_list[k], order, tdot, opts);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int threads = std::clamp(opts.threads, 1, static_cast<int>(n_list.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<double> dg;
    std::array<std::vector<double>, 4> eps;
    for (const auto& row : table.rows) {
        if (!row.converged || row.n_gamma < opts.fit_min_n) continue;
        dg.push_back(row.dgamma);
        eps[0].push_back(row.eps.final_x);
        eps[1].push_back(row.eps.final_t);
        eps[2].push_back(row.eps.l2_x);
        eps[3].push_back(row.eps.l2_t);
    }
    // Scaled rows solve different problems, so no single exponent describes them.
    if (dg.size() >= 3 && opts.tdot_list.empty()) {
        const std::array<const char*, 4> names{"eps_final_x", "eps_final_t", "eps_l2_x", "eps_l2_t"};
        for (std::size_t k = 0; k < 4; ++k) table.fits[names[k]] = fit_exponent(dg, eps[k]);
    }
    return table;
}

}  // namespace worldline
