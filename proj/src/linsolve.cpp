#include "voltau/linsolve.hpp"

#include <stdexcept>

namespace voltau {

std::vector<Real> solve_dense(Matrix A, std::vector<Real> rhs) {
    const std::size_t k = rhs.size();
    if (A.size() != k) throw std::invalid_argument("solve_dense: matrix/rhs size mismatch");
    for (const auto& row : A)
        if (row.size() != k) throw std::invalid_argument("solve_dense: matrix is not square");
    if (k == 0) return {};

    const Real pivot_tol = pow10(-static_cast<int>(working_digits()) + 2);

    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        Real best = abs(A[col][col]);
        for (std::size_t r = col + 1; r < k; ++r) {
            Real v = abs(A[r][col]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best < pivot_tol) throw SingularSystemError("solve_dense: singular pivot at column " +
                                                        std::to_string(col));
        if (piv != col) {
            std::swap(A[piv], A[col]);
            std::swap(rhs[piv], rhs[col]);
        }
        for (std::size_t r = col + 1; r < k; ++r) {
            if (A[r][col] == 0) continue;
            Real f = A[r][col] / A[col][col];
            A[r][col] = 0;
            for (std::size_t c = col + 1; c < k; ++c) A[r][c] -= f * A[col][c];
            rhs[r] -= f * rhs[col];
        }
    }

    std::vector<Real> x(k);
    for (std::size_t ri = k; ri-- > 0;) {
        Real acc = rhs[ri];
        for (std::size_t c = ri + 1; c < k; ++c) acc -= A[ri][c] * x[c];
        x[ri] = acc / A[ri][ri];
    }
    return x;
}

}  // namespace voltau
