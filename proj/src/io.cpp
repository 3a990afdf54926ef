#include "worldline/io.hpp"

#include "worldline/error.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <memory>

namespace worldline {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw Error(ErrorKind::Io, "could not format number");
    return std::string(buf.data(), end);
}

namespace {

template <class... Columns>
void append_row(std::string& out, const Columns&... cols) {
    bool first = true;
    auto put = [&](const auto& v) {
        if (!first) out += ',';
        first = false;
        if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>) {
            out += format_double(v);
        } else if constexpr (std::is_same_v<std::decay_t<decltype(v)>, bool>) {
            out += v ? "true" : "false";
        } else {
            out += std::to_string(v);
        }
    };
    (put(cols), ...);
    out += '\n';
}

std::string header(std::string_view cols) { return std::string(cols) + '\n'; }

}  // namespace

std::string trajectory_csv(const Vector& gamma, const StateVector& s) {
    if (gamma.size() != s.n()) throw Error(ErrorKind::DimensionMismatch, "gamma grid and state differ");
    std::string out = header(kTrajectoryColumns);
    for (int k = 0; k < s.n(); ++k) append_row(out, gamma(k), s.t1(k), s.t2(k), s.x1(k), s.x2(k));
    return out;
}

std::string diagnostics_csv(const DiagnosticsReport& r) {
    std::string out = header(kDiagnosticsColumns);
    for (Eigen::Index k = 0; k < r.gamma.size(); ++k) {
        append_row(out, r.gamma(k), r.traj.t(k), r.traj.x(k), r.time_mesh_velocity(k), r.q_t(k), r.delta_e(k),
                   r.delta_g_t(k), r.delta_g_x(k), r.h_bvp.profile(k));
    }
    return out;
}

std::string convergence_csv(const ConvergenceTable& table) {
    std::string out = header(kConvergenceColumns);
    for (const auto& r : table.rows) {
        append_row(out, r.n_gamma, r.dgamma, r.tdot_i, r.eps.final_x, r.eps.final_t, r.eps.l2_x, r.eps.l2_t,
                   r.endpoint_delta_e, r.max_interior_delta_e, r.t_final, r.grad_norm, r.iterations, r.converged);
    }
    return out;
}

nlohmann::json fits_json(const ConvergenceTable& table) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [name, fit] : table.fits) {
        out[name] = {{"beta", fit.beta}, {"residual", fit.residual}, {"points", fit.points}};
    }
    return out;
}

nlohmann::json matrix_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::Io, "sha256 failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int k = 0; k < len; ++k) {
        std::array<char, 3> b{};
        std::snprintf(b.data(), b.size(), "%02x", digest[k]);
        hex += b.data();
    }
    return hex;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error(ErrorKind::Io, "write to " + path.string() + " failed");
}

}  // namespace worldline
