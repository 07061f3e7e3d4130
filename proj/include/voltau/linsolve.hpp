#pragma once

#include "voltau/real.hpp"

#include <vector>

namespace voltau {

using Matrix = std::vector<std::vector<Real>>;

/// Thrown when elimination meets a pivot below the singularity threshold.
struct SingularSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Solves A x = rhs by Gaussian elimination with partial pivoting.
/// A must be square with rhs.size() rows. A pivot with magnitude below
/// 10^(-digits+2) raises SingularSystemError.
std::vector<Real> solve_dense(Matrix A, std::vector<Real> rhs);

}  // namespace voltau
