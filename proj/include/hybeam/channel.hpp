#pragma once

#include "hybeam/core.hpp"
#include "hybeam/types.hpp"

#include <random>
#include <string>
#include <vector>

namespace hybeam {

struct PathParams {
    cxd gain;      // complex path gain, CN(0, 1/L)
    double aod;    // angle of departure, [-pi/2, pi/2]
    double aoa;    // angle of arrival, [-pi/2, pi/2]
};

struct ChannelRealization {
    MatC h;                          // n_rx x n_tx
    std::vector<PathParams> paths;
    double spacing_over_lambda = 0.5;
};

struct TruncatedSvd {
    MatC u_hat;        // n_rx x n_streams, orthonormal columns
    VecR sigma_hat;    // non-increasing, non-negative
    MatC v_hat;        // n_tx x n_streams, orthonormal columns
};

/// ULA steering vector: entry k is (1/sqrt(n)) * exp(j*2*pi*spacing*k*sin(theta)).
VecC array_response(int n, double theta, double spacing_over_lambda);

/// Derive a deterministic per-stream seed from a master seed (splitmix64 mix).
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream);

/// Draw one geometric multipath channel: L rank-1 terms with CN(0, 1/L) gains
/// and uniform angles. Draw order per path: gain re, gain im, aod, aoa.
ChannelRealization sample_channel(const SystemConfig& cfg, std::mt19937_64& rng,
                                  double spacing_over_lambda = 0.5);

/// Leading n_streams singular triplets of h. Phases are fixed so the
/// largest-modulus entry of each right-singular column is real positive.
TruncatedSvd truncate_svd(const MatC& h, int n_streams);

/// Regression-fixture dump: h as interleaved re/im CSV, path parameters in a
/// ".paths" sidecar next to it.
void save_channel_csv(const ChannelRealization& ch, const std::string& path);
ChannelRealization load_channel_csv(const std::string& path);

} // namespace hybeam
