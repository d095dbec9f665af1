#pragma once

#include "hybeam/core.hpp"
#include "hybeam/types.hpp"

#include <stdexcept>

namespace hybeam {

class DegenerateBeamformerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Effective baseband channel W_RF^H H F_RF.
MatC effective_channel(const MatC& h, const AnalogBeamformer& f_rf, const AnalogBeamformer& w_rf);

struct BasebandPair {
    MatC f_bb;    // right singular vectors of the effective channel
    MatC w_bb;    // left singular vectors
};

/// SVD-based digital stage, before power normalization.
BasebandPair baseband_svd(const MatC& h_eff);

/// Rescale bb so that ||rf * bb||_F^2 equals the stream count.
MatC normalize_power(const MatC& rf, const MatC& bb);

/// Full hybrid quadruple: digital SVD stage on top of a designed analog pair,
/// power-normalized on both ends.
HybridBeamformer complete_hybrid(const MatC& h, const AnalogBeamformer& f_rf,
                                 const AnalogBeamformer& w_rf);

} // namespace hybeam
