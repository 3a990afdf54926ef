#pragma once

#include "worldline/action.hpp"
#include "worldline/diagnostics.hpp"
#include "worldline/reference.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace worldline {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

inline constexpr std::string_view kTrajectoryColumns = "gamma,t1,t2,x1,x2";
inline constexpr std::string_view kDiagnosticsColumns =
    "gamma,t,x,dt_dgamma,q_t,delta_e,delta_g_t,delta_g_x,h_bvp";
inline constexpr std::string_view kConvergenceColumns =
    "n,dgamma,tdot_i,eps_final_x,eps_final_t,eps_l2_x,eps_l2_t,endpoint_delta_e,max_interior_delta_e,t_final,"
    "grad_norm,iterations,converged";

std::string trajectory_csv(const Vector& gamma, const StateVector& s);
std::string diagnostics_csv(const DiagnosticsReport& report);
std::string convergence_csv(const ConvergenceTable& table);

nlohmann::json fits_json(const ConvergenceTable& table);
/// Row-major nested arrays.
nlohmann::json matrix_json(const Matrix& m);

std::string sha256_hex(std::string_view bytes);

/// Writes bytes verbatim; throws Error(Io) on failure.
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace worldline
