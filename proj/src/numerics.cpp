#include "hybeam/numerics.hpp"

#include <Eigen/LU>

#include <cmath>
#include <stdexcept>

namespace hybeam {

SingularTriplet power_iteration_rank1(const MatC& q, double tol, int max_iter)
{
    if (q.rows() == 0 || q.cols() == 0 || q.norm() == 0.0)
        throw std::invalid_argument("power_iteration_rank1: q must be nonzero");
    if (max_iter < 1)
        throw std::invalid_argument("power_iteration_rank1: max_iter must be positive");

    const Eigen::Index n = q.cols();
    VecC g = VecC::Ones(n) / std::sqrt(static_cast<double>(n));
    VecC pr = q * g;
    // Deterministic fallback when the start lies in the null space.
    for (Eigen::Index k = 0; pr.norm() == 0.0 && k < n; ++k) {
        g = VecC::Unit(n, k);
        pr = q * g;
    }
    VecC p = pr / pr.norm();

    double sigma = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        const VecC gr = q.adjoint() * p;
        g = gr / gr.norm();
        pr.noalias() = q * g;
        const double tau = pr.norm();
        sigma = std::real(p.dot(pr)); // Rayleigh value against the previous left vector
        const double res2 = std::max(tau * tau - sigma * sigma, 0.0);
        p = pr / tau;
        if (sigma > 0.0 && std::sqrt(res2) <= tol * sigma)
            return {tau, p, g, it};
        sigma = tau;
    }
    throw ConvergenceError("power_iteration_rank1: no convergence within max_iter",
                           {sigma, p, g, max_iter});
}

VecC gram_schmidt_append(const MatC& basis, const VecC& v)
{
    const double vn = v.norm();
    if (vn == 0.0)
        throw DegenerateDirectionError("gram_schmidt_append: zero input vector");
    VecC q = v;
    if (basis.cols() > 0) {
        if (basis.rows() != v.size())
            throw std::invalid_argument("gram_schmidt_append: dimension mismatch");
        const MatC gram = basis.adjoint() * basis;
        const double dev = (gram - MatC::Identity(basis.cols(), basis.cols()))
                               .cwiseAbs()
                               .maxCoeff();
        if (dev > 1e-9)
            throw std::invalid_argument("gram_schmidt_append: basis is not orthonormal");
        q.noalias() -= basis * (basis.adjoint() * v);
        q.noalias() -= basis * (basis.adjoint() * q); // second pass for stability
    }
    const double qn = q.norm();
    if (qn < 1e-10 * vn)
        throw DegenerateDirectionError("gram_schmidt_append: vector lies in the basis span");
    return q / qn;
}

double logdet2_abs(const MatC& m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("logdet2_abs: matrix must be square");
    if (m.rows() == 0)
        return 0.0;
    Eigen::PartialPivLU<MatC> lu(m);
    double sum = 0.0;
    const auto& diag = lu.matrixLU().diagonal();
    for (Eigen::Index i = 0; i < diag.size(); ++i)
        sum += std::log2(std::abs(diag(i)));
    return sum;
}

} // namespace hybeam
