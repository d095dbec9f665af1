#pragma once

#include "hybeam/core.hpp"
#include "hybeam/numerics.hpp"
#include "hybeam/types.hpp"

#include <stdexcept>

namespace hybeam {

class SearchSpaceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExhaustivePair {
    VecC f;
    VecC w;
    double value = 0.0;
};

/// Global maximum of |w^H q f| over all codebook phase assignments on both
/// sides. Guarded to |B|^{n_tx} * |B|^{n_rx} <= 2^26 pairs. The reported pair
/// is rotated so both first entries sit at codebook phase 2*pi.
ExhaustivePair exhaustive_pair(const MatC& q, const PhaseCodebook& codebook);

/// Brute-force single-coordinate reference: the grid point in [0, 2*pi)
/// maximizing |w^H q f| as the indexed phase varies (first max wins).
double grid_phase_oracle(const MatC& q, const VecR& theta, const VecR& phi, Eigen::Index index,
                         Side side, int grid_points);

} // namespace hybeam
