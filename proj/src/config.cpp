#include "worldline/config.hpp"

#include "worldline/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace worldline {

Vector ProblemConfig::gamma_grid() const {
    return Vector::LinSpaced(n_gamma, gamma_i, gamma_f);
}

void ProblemConfig::validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); };
    if (!(m > 0.0)) fail("mass must be positive");
    if (!(c > 0.0)) fail("speed of light must be positive");
    if (!(gamma_f > gamma_i)) fail("gamma_f must exceed gamma_i");
    if (n_gamma < min_points(order)) {
        fail(std::string(to_string(order)) + " needs n_gamma >= " + std::to_string(min_points(order)));
    }
    if (!(tdot_i > 0.0)) fail("tdot_i must be positive (time flows forward)");
    if (!std::isfinite(t_i) || !std::isfinite(x_i) || !std::isfinite(xdot_i)) fail("non-finite initial data");
    if (!(std::abs(initial_velocity()) < c)) fail("initial velocity xdot_i/tdot_i must be below c");
    if (!(metric_g00(x_i, *this) > 0.0)) fail("g00 must be positive at the initial position");
}

double metric_g00(double x, const ProblemConfig& cfg) {
    return cfg.c * cfg.c + 2.0 * cfg.potential.v(x) / cfg.m;
}

Vector metric_g00(const Vector& x, const ProblemConfig& cfg) {
    return x.unaryExpr([&cfg](double xk) { return metric_g00(xk, cfg); });
}

Vector metric_g00_prime(const Vector& x, const ProblemConfig& cfg) {
    return x.unaryExpr([&cfg](double xk) { return 2.0 * cfg.potential.dv(xk) / cfg.m; });
}

void to_json(nlohmann::json& j, const ProblemConfig& cfg) {
    nlohmann::json pot{{"type", cfg.potential.label()}};
    if (cfg.potential.kind() == PotentialKind::Linear) pot["alpha"] = cfg.potential.strength();
    if (cfg.potential.kind() == PotentialKind::Quartic) pot["kappa"] = cfg.potential.strength();
    j = nlohmann::json{
        {"m", cfg.m},
        {"c", cfg.c},
        {"t_i", cfg.t_i},
        {"x_i", cfg.x_i},
        {"tdot_i", cfg.tdot_i},
        {"xdot_i", cfg.xdot_i},
        {"n_gamma", cfg.n_gamma},
        {"gamma_i", cfg.gamma_i},
        {"gamma_f", cfg.gamma_f},
        {"order", std::string(to_string(cfg.order))},
        {"potential", pot},
    };
}

void from_json(const nlohmann::json& j, ProblemConfig& cfg) {
    try {
        ProblemConfig out;
        out.m = j.value("m", out.m);
        out.c = j.value("c", out.c);
        out.t_i = j.value("t_i", out.t_i);
        out.x_i = j.value("x_i", out.x_i);
        out.tdot_i = j.value("tdot_i", out.tdot_i);
        out.xdot_i = j.value("xdot_i", out.xdot_i);
        out.n_gamma = j.value("n_gamma", out.n_gamma);
        out.gamma_i = j.value("gamma_i", out.gamma_i);
        out.gamma_f = j.value("gamma_f", out.gamma_f);
        if (j.contains("order")) out.order = parse_sbp_order(j.at("order").get<std::string>());
        if (j.contains("potential")) {
            const auto& p = j.at("potential");
            const auto type = p.at("type").get<std::string>();
            if (type == "free") {
                out.potential = Potential::free();
            } else if (type == "linear") {
                out.potential = Potential::linear(p.at("alpha").get<double>());
            } else if (type == "quartic") {
                out.potential = Potential::quartic(p.at("kappa").get<double>());
            } else {
                throw Error(ErrorKind::InvalidConfig, "unknown potential type '" + type + "'");
            }
        }
        cfg = std::move(out);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidConfig, e.what());
    }
}

ProblemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidConfig, "cannot read config " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidConfig, path.string() + ": " + e.what());
    }
    auto cfg = j.get<ProblemConfig>();
    cfg.validate();
    return cfg;
}

namespace {

ProblemConfig worked_example(Potential potential, SbpOrder order, int n_gamma) {
    ProblemConfig cfg;
    cfg.t_i = 0.0;
    cfg.x_i = 1.0;
    cfg.tdot_i = 1.0;
    cfg.xdot_i = 0.1;
    cfg.n_gamma = n_gamma;
    cfg.order = order;
    cfg.potential = std::move(potential);
    return cfg;
}

}  // namespace

ProblemConfig linear_example(SbpOrder order, int n_gamma) {
    return worked_example(Potential::linear(0.25), order, n_gamma);
}

ProblemConfig quartic_example(SbpOrder order, int n_gamma) {
    return worked_example(Potential::quartic(0.5), order, n_gamma);
}

}  // namespace worldline
