#pragma once

#include "worldline/sbp.hpp"

#include <optional>

namespace worldline {

/// Solves a dense symmetric (possibly indefinite) system with Bunch-Kaufman
/// pivoting. Only the lower triangle of `a` is read. Returns nullopt when the
/// factorization hits an exactly singular pivot or produces non-finite values.
std::optional<Vector> solve_symmetric_indefinite(const Matrix& a, const Vector& b);

}  // namespace worldline
