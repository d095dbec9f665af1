#pragma once

#include "hybeam/types.hpp"

#include <stdexcept>
#include <string>

namespace hybeam {

struct SingularTriplet {
    double sigma = 0.0;
    VecC left;
    VecC right;
    int iterations = 0;
};

/// Power iteration ran out of iterations; carries the last iterate.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, SingularTriplet last_iterate)
        : std::runtime_error(what), last(std::move(last_iterate)) {}
    SingularTriplet last;
};

/// Requested direction is numerically inside the span of the basis.
class DegenerateDirectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Leading singular triplet (sigma, left, right) of q by alternating power
/// iteration from a deterministic start. Converged when the triplet residual
/// ||q g - sigma p|| drops below tol*sigma.
SingularTriplet power_iteration_rank1(const MatC& q, double tol = 1e-10, int max_iter = 1000);

/// Residual of v against an orthonormal basis (matrix of columns), normalized.
/// Throws DegenerateDirectionError when ||residual|| < 1e-10 * ||v||.
VecC gram_schmidt_append(const MatC& basis, const VecC& v);

/// log2 |det(m)| from the pivots of a partially pivoted LU factorization;
/// -infinity for singular m.
double logdet2_abs(const MatC& m);

/// |w^H q f|, evaluated as a materialized matrix-vector product followed by a
/// conjugated dot. Candidate searches reuse the same two stages so their
/// scores are bit-identical to this function.
inline double pair_objective(const MatC& q, const VecC& f, const VecC& w)
{
    VecC y = q * f;
    return std::abs(w.dot(y));
}

} // namespace hybeam
