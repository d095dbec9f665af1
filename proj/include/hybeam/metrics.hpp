#pragma once

#include "hybeam/core.hpp"
#include "hybeam/types.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hybeam {

class DegenerateCombinerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LinkBudget {
    double power = 1.0;        // P, linear
    double noise_var = 1.0;    // sigma^2, linear
    double snr_db = 0.0;

    /// Convention: sigma^2 = 1, P = 10^(snr_db/10).
    static LinkBudget from_snr_db(double snr_db);
};

/// Achievable rate of the hybrid link under Gaussian signaling,
/// log2 |I + (P/N_s) R_n^{-1} W^H H F F^H H^H W| with W = W_RF W_BB,
/// F = F_RF F_BB and R_n the post-combining noise covariance.
double spectral_efficiency(const MatC& h, const HybridBeamformer& bf, const LinkBudget& budget);

/// Unconstrained SVD beamforming with equal power split:
/// sum_i log2(1 + P sigma_i^2 / (N_s sigma^2)).
double full_digital_reference(const MatC& h, int n_streams, const LinkBudget& budget);

/// Uplink SINR of user k given per-user channels, transmit vectors and
/// composite receive vectors (equal transmit powers).
double user_sinr(int k, const std::vector<MatC>& channels, const std::vector<VecC>& precoders,
                 const std::vector<VecC>& combiners, const LinkBudget& budget);

/// Sum of log2(1 + gamma_k); throws on negative SINR.
double sum_rate(const std::vector<double>& sinrs);

/// One Monte-Carlo trial row. `objective` is an in-memory extra used by the
/// oracle-compare experiment; it is not part of the CSV schema.
struct ExperimentResult {
    std::string kind;
    std::string sweep_name;
    double sweep_value = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::string algorithm;
    int bits = 0;
    int n_tx = 0;
    int n_rx = 0;
    int n_streams = 0;
    int users = 0;
    double spectral_efficiency = std::nan("");
    double sum_rate = std::nan("");
    double objective = std::nan("");
    int inner_sweeps = 0;
    int outer_iters = 0;
    double wall_time_s = 0.0;
    std::string error;
};

} // namespace hybeam
