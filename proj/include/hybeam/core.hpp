#pragma once

#include "hybeam/types.hpp"

#include <cstdint>
#include <vector>

namespace hybeam {

/// Link and array dimensions for one experiment configuration.
struct SystemConfig {
    int n_tx = 64;            // transmit antennas
    int n_rx = 64;            // receive antennas
    int n_rf_tx = 6;          // transmit RF chains
    int n_rf_rx = 6;          // receive RF chains
    int n_streams = 6;        // data streams
    int bits = 2;             // phase-shifter resolution
    int n_paths = 6;          // propagation paths
    double snr_db = 0.0;
    std::uint64_t seed = 1;
};

/// Point-to-point constraints: streams match RF chains on both ends.
void validate_su(const SystemConfig& cfg);

/// Uplink multiuser constraints: single-stream users, one RF chain each,
/// BS RF chains equal to the user count.
void validate_mu(const SystemConfig& cfg, int users);

/// The discrete phase set {2*pi*b / 2^B, b = 1..2^B} of a B-bit phase shifter.
class PhaseCodebook {
public:
    explicit PhaseCodebook(int bits);

    int bits() const noexcept { return bits_; }
    std::size_t size() const noexcept { return phases_.size(); }
    const std::vector<double>& phases() const noexcept { return phases_; }

    /// 0-based index of the member nearest to theta under circular distance;
    /// exact midpoints resolve to the smaller member index.
    std::size_t quantize_index(double theta) const;

    /// Nearest member phase (an exact element of phases()).
    double quantize(double theta) const { return phases_[quantize_index(theta)]; }

    /// Unit phasor of member idx; cardinal angles are exact (+1, -1, +i, -i).
    cxd phasor(std::size_t idx) const { return phasors_[idx]; }

    bool contains(double theta, double tol = 1e-12) const;

private:
    int bits_;
    std::vector<double> phases_;
    std::vector<cxd> phasors_;
};

double quantize_phase(double theta, const PhaseCodebook& codebook);

/// Constant-modulus phase-shifter network; every entry has modulus `scale`
/// (1/sqrt(rows)) and a phase drawn from a codebook.
struct AnalogBeamformer {
    MatC matrix;
    double scale = 0.0;

    static AnalogBeamformer from_phases(const MatR& phases);

    /// Throws std::invalid_argument if any entry violates the modulus or
    /// codebook-membership constraints.
    void validate(const PhaseCodebook& codebook, double tol = 1e-12) const;
};

struct HybridBeamformer {
    AnalogBeamformer f_rf;
    MatC f_bb;
    AnalogBeamformer w_rf;
    MatC w_bb;

    /// Checks ||F_RF F_BB||_F^2 = N_s and ||W_RF W_BB||_F^2 = N_s.
    void validate_power(double rel_tol = 1e-9) const;
};

} // namespace hybeam
