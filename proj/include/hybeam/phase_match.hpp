#pragma once

#include "hybeam/channel.hpp"
#include "hybeam/core.hpp"
#include "hybeam/types.hpp"

#include <stdexcept>
#include <vector>

namespace hybeam {

/// The regularized linear solve inside the interference-included channel
/// failed; retry with a larger alpha.
class RegularizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Interference-included channel matrix for one stream: the truncated channel
/// with the already-designed other-stream beamformers folded in.
struct InterferenceChannel {
    MatC q;          // n_rx x n_tx
    double alpha;    // regularizer used to build it
};

/// Q = U ( alpha*I + S V^H F_excl W_excl^H U )^{-1} S V^H. Empty exclusion
/// matrices stand for all-zero columns.
InterferenceChannel interference_channel(const TruncatedSvd& svd, const MatC& f_excl,
                                         const MatC& w_excl, double alpha);

struct PhaseMatchState {
    VecR theta;                 // transmit phases, one per antenna
    VecR phi;                   // receive phases, one per antenna
    double objective = 0.0;     // |w^H Q f| of the phases
    int sweeps = 0;
    bool converged = false;
    std::vector<double> trace;  // objective after each accepted update
};

struct PhaseMatchOptions {
    int max_sweeps = 50;
    bool quantize = true;        // false: keep the continuous optimizers
    bool record_trace = false;
};

/// Continuous conditional optimizer of the indexed phase holding all other
/// phases fixed: the angle aligning the coordinate's term with the rest of
/// w^H Q f. angle(0) is taken as 0.
double conditional_phase(const InterferenceChannel& q, const VecR& theta, const VecR& phi,
                         Eigen::Index index, Side side);

/// Alternating coordinate sweeps over transmit then receive phases; each
/// update is the codebook argmax of |w^H Q f| at that coordinate and is
/// accepted only on strict improvement. Stops when a full sweep changes no
/// phase or the sweep cap is hit (cap exit is flagged, not an error).
PhaseMatchState match_pair(const InterferenceChannel& q, const PhaseCodebook& codebook,
                           PhaseMatchState init, const PhaseMatchOptions& opts = {});

struct AnalogDesign {
    AnalogBeamformer f_rf;
    AnalogBeamformer w_rf;
    int outer_iters = 0;
    int inner_sweeps = 0;        // total match sweeps (or power iterations)
    bool converged = false;
};

struct DesignOptions {
    double alpha_rel = 1e-6;     // regularizer relative to the top singular value
    int outer_cap = 10;
    PhaseMatchOptions pm;
};

/// Stream-by-stream analog pair design: for each stream build the
/// interference-included channel from the other columns (zero on the first
/// pass), run match_pair, install the pair; repeat until no column changes.
AnalogDesign design_analog_su(const ChannelRealization& h, const SystemConfig& cfg,
                              const DesignOptions& opts = {});

/// Per-stream initial phases: the quantized phases of the stream's singular
/// vectors (raw phases when opts.quantize is off).
PhaseMatchState initial_state_from_svd(const TruncatedSvd& svd, int stream,
                                       const PhaseCodebook& codebook, bool quantize);

} // namespace hybeam
