#pragma once

#include "hybeam/channel.hpp"
#include "hybeam/core.hpp"
#include "hybeam/phase_match.hpp"
#include "hybeam/types.hpp"

#include <vector>

namespace hybeam {

struct AngleFold {
    VecR psi_hat;              // folded angles in [-pi/2, pi/2)
    std::vector<bool> flips;   // true where a half-turn was removed
};

/// Fold the entry phases of g into [-pi/2, pi/2), recording which entries
/// were shifted by pi. Zero entries fold to 0 without a flip.
AngleFold fold_angles(const VecC& g);

/// The N binary vectors, one per sorted-angle sub-interval, that are
/// guaranteed to contain the maximizer of |f^H g| over {+-1/sqrt(N)}^N.
struct CandidateSet {
    MatR vectors;                   // N x N, one candidate per column
    std::vector<int> permutation;   // ascending stable sort order of psi_hat
    std::vector<bool> flips;
};

CandidateSet candidate_vectors(const VecC& g);

struct BinaryPair {
    VecR f;            // {+-1/sqrt(n_tx)}^{n_tx}, first entry positive
    VecR w;            // {+-1/sqrt(n_rx)}^{n_rx}, first entry positive
    double value = 0;  // |w^H Q f| at the selected pair
    int iterations = 0;
};

/// One-bit pair for one stream: rank-1 factors of Q by power iteration,
/// candidate sets from both singular vectors, then the joint argmax of
/// |w^H Q f| over all candidate pairs (first pair wins ties).
BinaryPair onebit_pair(const InterferenceChannel& q, double tol = 1e-10, int max_iter = 1000);

/// design_analog_su with the per-stream matcher replaced by onebit_pair.
/// Requires cfg.bits == 1.
AnalogDesign design_analog_su_onebit(const ChannelRealization& h, const SystemConfig& cfg,
                                     const DesignOptions& opts = {});

} // namespace hybeam
