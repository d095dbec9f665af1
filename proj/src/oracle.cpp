#include "hybeam/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hybeam {

namespace {

// Lexicographic odometer over member indices, last digit fastest.
bool advance(std::vector<std::size_t>& digits, std::size_t radix)
{
    for (std::size_t pos = digits.size(); pos-- > 0;) {
        if (++digits[pos] < radix)
            return true;
        digits[pos] = 0;
    }
    return false;
}

VecC build_vector(const std::vector<std::size_t>& digits, const PhaseCodebook& cb, double scale)
{
    VecC v(static_cast<Eigen::Index>(digits.size()));
    for (std::size_t i = 0; i < digits.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = scale * cb.phasor(digits[i]);
    return v;
}

// Rotate member indices by a whole codebook step so the first entry lands on
// the 2*pi member; a global codebook rotation leaves |w^H Q f| unchanged.
void canonicalize(std::vector<std::size_t>& digits, std::size_t radix)
{
    const std::size_t shift = (radix - 1 + radix - digits[0]) % radix;
    for (auto& d : digits)
        d = (d + shift) % radix;
}

} // namespace

ExhaustivePair exhaustive_pair(const MatC& q, const PhaseCodebook& codebook)
{
    const Eigen::Index nr = q.rows();
    const Eigen::Index nt = q.cols();
    if (nr < 1 || nt < 1)
        throw std::invalid_argument("exhaustive_pair: empty matrix");
    const std::size_t m = codebook.size();
    const double total = std::pow(static_cast<double>(m), static_cast<double>(nt + nr));
    if (total > static_cast<double>(std::size_t{1} << 26))
        throw SearchSpaceError("exhaustive_pair: search space exceeds 2^26 pairs");

    const double tx_scale = 1.0 / std::sqrt(static_cast<double>(nt));
    const double rx_scale = 1.0 / std::sqrt(static_cast<double>(nr));

    std::vector<std::size_t> fd(static_cast<std::size_t>(nt), 0);
    std::vector<std::size_t> best_fd, best_wd;
    double best = -1.0;
    VecC y(nr);
    do {
        const VecC f = build_vector(fd, codebook, tx_scale);
        y.noalias() = q * f;
        std::vector<std::size_t> wd(static_cast<std::size_t>(nr), 0);
        do {
            const VecC w = build_vector(wd, codebook, rx_scale);
            const double val = std::abs(w.dot(y));
            if (val > best) {
                best = val;
                best_fd = fd;
                best_wd = wd;
            }
        } while (advance(wd, m));
    } while (advance(fd, m));

    canonicalize(best_fd, m);
    canonicalize(best_wd, m);
    return {build_vector(best_fd, codebook, tx_scale), build_vector(best_wd, codebook, rx_scale),
            best};
}

double grid_phase_oracle(const MatC& q, const VecR& theta, const VecR& phi, Eigen::Index index,
                         Side side, int grid_points)
{
    if (grid_points < 3)
        throw std::invalid_argument("grid_phase_oracle: need at least 3 grid points");
    const Eigen::Index nt = q.cols();
    const Eigen::Index nr = q.rows();
    if (theta.size() != nt || phi.size() != nr)
        throw std::invalid_argument("grid_phase_oracle: phase vector dimensions mismatch");
    if (index < 0 || index >= (side == Side::tx ? nt : nr))
        throw std::invalid_argument("grid_phase_oracle: index out of range");

    const double tx_scale = 1.0 / std::sqrt(static_cast<double>(nt));
    const double rx_scale = 1.0 / std::sqrt(static_cast<double>(nr));
    VecC f(nt), w(nr);
    for (Eigen::Index i = 0; i < nt; ++i)
        f(i) = tx_scale * unit_phasor(theta(i));
    for (Eigen::Index j = 0; j < nr; ++j)
        w(j) = rx_scale * unit_phasor(phi(j));

    double best_val = -1.0;
    double best_x = 0.0;
    if (side == Side::tx) {
        const Eigen::RowVectorXcd row = w.adjoint() * q;
        for (int gp = 0; gp < grid_points; ++gp) {
            const double x = two_pi * static_cast<double>(gp) / static_cast<double>(grid_points);
            f(index) = tx_scale * unit_phasor(x);
            const double val = std::abs((row * f).value());
            if (val > best_val) {
                best_val = val;
                best_x = x;
            }
        }
    } else {
        const VecC col = q * f;
        for (int gp = 0; gp < grid_points; ++gp) {
            const double x = two_pi * static_cast<double>(gp) / static_cast<double>(grid_points);
            w(index) = rx_scale * unit_phasor(x);
            const double val = std::abs(w.dot(col));
            if (val > best_val) {
                best_val = val;
                best_x = x;
            }
        }
    }
    return best_x;
}

} // namespace hybeam
