#include "worldline/cli.hpp"

#include "worldline/diagnostics.hpp"
#include "worldline/error.hpp"
#include "worldline/io.hpp"
#include "worldline/reference.hpp"
#include "worldline/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace worldline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* const kHelpFooter = R"(Output files
  trajectory.csv   gamma,t1,t2,x1,x2
                   both branches of the doubled world line, one row per grid index
  diagnostics.csv  gamma,t,x,dt_dgamma,q_t,delta_e,delta_g_t,delta_g_x,h_bvp
                   dt_dgamma = (D t), q_t = g00(x) (D t), delta_e = q_t - g00(x_i) tdot_i,
                   delta_g_* = discrete geodesic residuals, h_bvp = 1/2 (g00 (D t)^2 + (D x)^2)
  convergence.csv  n,dgamma,tdot_i,eps_final_x,eps_final_t,eps_l2_x,eps_l2_t,
                   endpoint_delta_e,max_interior_delta_e,t_final,grad_norm,iterations,converged
  summary.json, fit.json, manifest.json (every emitted file with its sha256)

Exit status
  0 success, 1 bad flags or config, 2 solver did not converge (files still written), 3 i/o error

Environment
  WORLDLINE_THREADS  upper bound on concurrent solves during sweep)";

struct Emitter {
    fs::path dir;
    json files = json::array();

    void emit(const std::string& name, const std::string& bytes) {
        write_file(dir / name, bytes);
        files.push_back({{"name", name}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
    }

    void finish(const std::string& subcommand, const std::string& config_path) {
        const json manifest{{"subcommand", subcommand},
                            {"config", config_path},
                            {"out_dir", dir.string()},
                            {"files", files}};
        write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    }
};

void prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error(ErrorKind::Io, "cannot create output directory " + dir.string());
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

int sweep_threads() {
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("WORLDLINE_THREADS")) {
        try {
            threads = std::max(1, std::stoi(env));
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidConfig, "WORLDLINE_THREADS must be a positive integer");
        }
    }
    return threads;
}

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::optional<std::string> order;
    std::optional<double> tol;
    std::optional<int> max_iter;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "problem configuration (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", f.out_dir, "output directory (created if missing)")->required();
    cmd->add_option("--order", f.order, "operator order, overrides the config")
        ->check(CLI::IsMember({"sbp21", "sbp42"}));
    cmd->add_option("--tol", f.tol, "absolute tolerance on |grad E| (default relative 1e-12)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", f.max_iter, "Newton iteration cap per solve")->check(CLI::PositiveNumber);
}

ProblemConfig configure(const CommonFlags& f) {
    ProblemConfig cfg = load_config(f.config_path);
    if (f.order) cfg.order = parse_sbp_order(*f.order);
    cfg.validate();
    return cfg;
}

SolveOptions solve_options(const CommonFlags& f) {
    SolveOptions opts;
    if (f.tol) opts.grad_tol = *f.tol;
    if (f.max_iter) opts.max_iter = *f.max_iter;
    return opts;
}

int cmd_solve(const CommonFlags& f, std::ostream& out) {
    const ProblemConfig cfg = configure(f);
    const SolveOptions opts = solve_options(f);
    prepare_dir(f.out_dir);

    Solution sol;
    try {
        sol = solve(cfg, opts);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NonConvergence) throw;
        sol = newton_solve(DiscreteAction(cfg), opts, initial_guess(cfg));
    }

    const Trajectory traj{sol.state.t1, sol.state.x1};
    const PhysicalLimitGap gap = physical_limit_gap(sol.state);
    std::optional<Trajectory> reference;
    std::string oracle_error;
    try {
        reference = solve_geodesic_ode(cfg).sample(cfg.gamma_grid());
    } catch (const Error& e) {
        oracle_error = e.what();
    }
    const DiagnosticsReport report = build_report(traj, cfg, reference);
    const int n = cfg.n_gamma;

    json summary{
        {"converged", sol.converged},
        {"grad_norm", sol.grad_norm},
        {"grad_tol", sol.grad_tol},
        {"iterations", sol.iterations},
        {"homotopy_steps", sol.homotopy_steps},
        {"t_final", traj.t(n - 1)},
        {"x_final", traj.x(n - 1)},
        {"dt_dgamma_final", report.time_mesh_velocity(n - 1)},
        {"endpoint_delta_e", report.endpoint_delta_e()},
        {"max_interior_delta_e", report.max_interior_delta_e()},
        {"max_abs_delta_g_t", report.delta_g_t.lpNorm<Eigen::Infinity>()},
        {"max_abs_delta_g_x", report.delta_g_x.lpNorm<Eigen::Infinity>()},
        {"physical_limit_gap", {{"t", gap.max_dt}, {"x", gap.max_dx}}},
        {"h_bvp_total", report.h_bvp.total},
        {"h_bvp_bound", report.h_bvp.bound},
        {"lambda", sol.state.lambda},
        {"config", cfg},
    };
    if (report.errors) {
        summary["eps_final_x"] = report.errors->final_x;
        summary["eps_final_t"] = report.errors->final_t;
        summary["eps_l2_x"] = report.errors->l2_x;
        summary["eps_l2_t"] = report.errors->l2_t;
    } else {
        summary["oracle_error"] = oracle_error;
    }
    if (report.free_charges) {
        const auto spread = [](const Vector& v) { return v.maxCoeff() - v.minCoeff(); };
        summary["q_t_spread"] = spread(report.q_t);
        summary["q_x_spread"] = spread(report.free_charges->q_x);
        summary["q_boost_spread"] = spread(report.free_charges->q_boost);
    }

    Emitter emitter{f.out_dir};
    emitter.emit("trajectory.csv", trajectory_csv(cfg.gamma_grid(), sol.state));
    emitter.emit("diagnostics.csv", diagnostics_csv(report));
    emitter.emit("summary.json", summary.dump(2) + "\n");
    emitter.finish("solve", f.config_path);

    out << "solve n=" << n << " order=" << to_string(cfg.order) << " converged=" << (sol.converged ? "yes" : "no")
        << " |grad|=" << format_double(sol.grad_norm) << " t_final=" << format_double(traj.t(n - 1))
        << " endpoint_delta_e=" << format_double(report.endpoint_delta_e()) << '\n';
    return sol.converged ? kExitOk : kExitNonConvergence;
}

int cmd_sweep(const CommonFlags& f, const std::vector<int>& n_list, const std::vector<double>& tdot_list,
              int fit_min_n, std::ostream& out) {
    const ProblemConfig cfg = configure(f);
    if (n_list.empty()) throw Error(ErrorKind::InvalidConfig, "--n-list is empty");
    for (int n : n_list) {
        if (n < min_points(cfg.order)) {
            throw Error(ErrorKind::InvalidConfig, "--n-list entry " + std::to_string(n) + " below operator minimum");
        }
    }
    StudyOptions study;
    study.solve = solve_options(f);
    study.fit_min_n = fit_min_n;
    study.threads = sweep_threads();
    study.tdot_list = tdot_list;
    prepare_dir(f.out_dir);

    const ConvergenceTable table = convergence_study(cfg, n_list, cfg.order, study);

    json fit{{"order", std::string(to_string(cfg.order))}, {"fit_min_n", fit_min_n}, {"fits", fits_json(table)}};
    if (!tdot_list.empty()) {
        fit["fit_refused"] = "rows use different initial data";
    } else if (table.fits.empty()) {
        fit["fit_refused"] = "fewer than 3 converged rows";
    }
    json endpoint = json::array();
    for (const auto& row : table.rows) endpoint.push_back(finite_or_null(row.endpoint_delta_e));
    fit["endpoint_delta_e"] = endpoint;

    Emitter emitter{f.out_dir};
    emitter.emit("convergence.csv", convergence_csv(table));
    emitter.emit("fit.json", fit.dump(2) + "\n");
    emitter.finish("sweep", f.config_path);

    bool all_converged = true;
    for (const auto& row : table.rows) {
        all_converged = all_converged && row.converged;
        out << "n=" << row.n_gamma << " tdot_i=" << format_double(row.tdot_i)
            << " eps_final_x=" << format_double(row.eps.final_x) << " eps_final_t=" << format_double(row.eps.final_t)
            << " endpoint_delta_e=" << format_double(row.endpoint_delta_e) << '\n';
    }
    for (const auto& [name, e] : table.fits) out << name << " beta=" << format_double(e.beta) << '\n';
    return all_converged ? kExitOk : kExitNonConvergence;
}

int cmd_dump_operator(const std::string& order_name, int n, double dgamma, bool regularized, double init_value,
                      std::ostream& out) {
    const SbpOrder order = parse_sbp_order(order_name);
    const SbpOperator op = build_sbp(order, n, dgamma);
    json dump{{"order", std::string(to_string(order))},
              {"n", n},
              {"dgamma", dgamma},
              {"D", matrix_json(op.d)},
              {"H", matrix_json(op.h)}};
    if (regularized) {
        const RegularizedOperator reg = regularize(op, init_value);
        dump["init_value"] = init_value;
        dump["sigma0"] = reg.sigma0;
        dump["Dbar"] = matrix_json(reg.dbar);
        dump["Hbar"] = matrix_json(reg.hbar);
    }
    out << dump.dump(2) << '\n';
    return kExitOk;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Io: return kExitIo;
        case ErrorKind::NonConvergence: return kExitNonConvergence;
        default: return kExitUsage;
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time-symmetric world-line solver for one-dimensional particle motion"};
    app.name("worldline");
    app.require_subcommand(1);
    app.footer(kHelpFooter);

    CommonFlags solve_flags;
    auto* solve_cmd = app.add_subcommand("solve", "solve one configuration and write its profiles");
    add_common(solve_cmd, solve_flags);

    CommonFlags sweep_flags;
    std::vector<int> n_list;
    std::vector<double> tdot_list;
    int fit_min_n = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "grid refinement study against the reference integrator");
    add_common(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--n-list", n_list, "grid sizes, comma separated and ascending")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--scale-tdot", tdot_list,
                          "initial dt/dgamma per grid size, comma separated; dx/dgamma scales along")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--fit-min-n", fit_min_n, "exclude smaller grids from the exponent fits");

    std::string dump_order = "sbp21";
    int dump_n = 0;
    double dump_dgamma = 0.0;
    bool dump_regularized = false;
    double dump_init = 0.0;
    auto* dump_cmd = app.add_subcommand("dump-operator", "print an operator as JSON");
    dump_cmd->add_option("--order", dump_order, "sbp21 or sbp42")->check(CLI::IsMember({"sbp21", "sbp42"}));
    dump_cmd->add_option("--n", dump_n, "number of grid points")->required();
    dump_cmd->add_option("--dgamma", dump_dgamma, "grid spacing")->required();
    dump_cmd->add_flag("--regularized", dump_regularized, "also print the affine initial-value operators");
    dump_cmd->add_option("--init-value", dump_init, "initial value absorbed by the regularized operator");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*solve_cmd) return cmd_solve(solve_flags, out);
        if (*sweep_cmd) {
            if (!tdot_list.empty() && tdot_list.size() != n_list.size()) {
                throw Error(ErrorKind::InvalidConfig, "--scale-tdot needs one value per --n-list entry");
            }
            return cmd_sweep(sweep_flags, n_list, tdot_list, fit_min_n, out);
        }
        return cmd_dump_operator(dump_order, dump_n, dump_dgamma, dump_regularized, dump_init, out);
    } catch (const Error& e) {
        err << "worldline: " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
}

}  // namespace worldline
