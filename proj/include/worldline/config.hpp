#pragma once

#include "worldline/potential.hpp"
#include "worldline/sbp.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace worldline {

/// Physical constants, initial data and world-line grid of one problem.
struct ProblemConfig {
    double m = 1.0;
    double c = 1.0;
    double t_i = 0.0;
    double x_i = 0.0;
    /// Initial world-line velocities dt/dgamma and dx/dgamma.
    double tdot_i = 1.0;
    double xdot_i = 0.0;
    int n_gamma = 32;
    double gamma_i = 0.0;
    double gamma_f = 1.0;
    SbpOrder order = SbpOrder::Sbp21;
    Potential potential = Potential::free();

    double dgamma() const { return (gamma_f - gamma_i) / (n_gamma - 1); }
    double initial_velocity() const { return xdot_i / tdot_i; }
    Vector gamma_grid() const;

    /// Throws Error(InvalidConfig) when an invariant does not hold.
    void validate() const;
};

/// g00 = c^2 + 2 V(x) / m, elementwise.
Vector metric_g00(const Vector& x, const ProblemConfig& cfg);
double metric_g00(double x, const ProblemConfig& cfg);
/// d g00 / dx = 2 V'(x) / m, elementwise.
Vector metric_g00_prime(const Vector& x, const ProblemConfig& cfg);

void to_json(nlohmann::json& j, const ProblemConfig& cfg);
void from_json(const nlohmann::json& j, ProblemConfig& cfg);

ProblemConfig load_config(const std::filesystem::path& path);

/// The two worked examples: x_i = 1, v_i = 1/10, tdot_i = 1, 32 points.
ProblemConfig linear_example(SbpOrder order = SbpOrder::Sbp21, int n_gamma = 32);
ProblemConfig quartic_example(SbpOrder order = SbpOrder::Sbp21, int n_gamma = 32);

}  // namespace worldline
