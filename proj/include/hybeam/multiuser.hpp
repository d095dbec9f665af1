#pragma once

#include "hybeam/core.hpp"
#include "hybeam/metrics.hpp"
#include "hybeam/phase_match.hpp"
#include "hybeam/types.hpp"

#include <vector>

namespace hybeam {

enum class MuEngine { phase_matching, one_bit };

struct MultiuserDesign {
    std::vector<VecC> f;    // per-user transmit vectors, n_tx each
    MatC w_rf;              // BS analog combiners, n_rx x K
    MatC w_bb;              // MMSE digital combiners, K x K (column per user)
    MatC d;                 // orthonormal combiner directions, n_rx x K
    int total_inner = 0;    // sweeps / power iterations across users
};

/// Remove the span of d (orthonormal columns) from the rows of h_k:
/// (I - d d^H) h_k.
MatC project_channel(const MatC& h_k, const MatC& d);

/// Successive per-user analog pair design: user 1 on its raw channel, later
/// users on their channels projected away from the accumulated combiner
/// directions; MMSE digital combiners attached at the end.
MultiuserDesign design_multiuser(const std::vector<MatC>& channels, const SystemConfig& cfg,
                                 MuEngine engine, const DesignOptions& opts = {});

/// w_bb_k = [H^e (H^e)^H + sigma^2 W_RF^H W_RF]^{-1} h^e_k for every user.
MatC mmse_combiners(const MatC& h_eff, const MatC& w_rf, double noise_var);

/// Sum rate of a multiuser design with its MMSE combiners.
double multiuser_sum_rate(const std::vector<MatC>& channels, const MultiuserDesign& design,
                          const LinkBudget& budget);

} // namespace hybeam
