#include "worldline/linalg.hpp"

#include "worldline/error.hpp"

#include <lapacke.h>

#include <vector>

namespace worldline {

std::optional<Vector> solve_symmetric_indefinite(const Matrix& a, const Vector& b) {
    const auto n = static_cast<lapack_int>(a.rows());
    if (a.cols() != n || b.size() != n) {
        throw Error(ErrorKind::DimensionMismatch, "symmetric solve operands disagree in size");
    }
    Matrix work = a;  // column-major, overwritten by the factorization
    Vector x = b;
    std::vector<lapack_int> pivots(static_cast<std::size_t>(n));
    const lapack_int info = LAPACKE_dsysv(LAPACK_COL_MAJOR, 'L', n, 1, work.data(), n,
                                          pivots.data(), x.data(), n);
    if (info != 0 || !x.allFinite()) return std::nullopt;
    return x;
}

}  // namespace worldline
