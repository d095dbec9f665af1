#include "hybeam/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hybeam {

namespace {

void check_positive(int value, const char* name)
{
    if (value < 1)
        throw std::invalid_argument(std::string(name) + " must be positive");
}

// Members with b/2^B in {1/4, 1/2, 3/4, 1} get exact axis phasors; polar()
// would leave ~1e-16 dust on the zero component.
cxd member_phasor(std::size_t b, std::size_t m, double phase)
{
    const std::size_t four_b = 4 * b;
    if (four_b % m == 0) {
        switch (four_b / m) {
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        case 3: return {0.0, -1.0};
        case 4: return {1.0, 0.0};
        default: break;
        }
    }
    return unit_phasor(phase);
}

} // namespace

void validate_su(const SystemConfig& cfg)
{
    check_positive(cfg.n_tx, "n_tx");
    check_positive(cfg.n_rx, "n_rx");
    check_positive(cfg.n_rf_tx, "n_rf_tx");
    check_positive(cfg.n_rf_rx, "n_rf_rx");
    check_positive(cfg.n_streams, "n_streams");
    check_positive(cfg.bits, "bits");
    check_positive(cfg.n_paths, "n_paths");
    if (cfg.n_streams != cfg.n_rf_tx || cfg.n_streams != cfg.n_rf_rx)
        throw std::invalid_argument("point-to-point config requires n_streams = n_rf_tx = n_rf_rx");
    if (cfg.n_streams > std::min(cfg.n_tx, cfg.n_rx))
        throw std::invalid_argument("n_streams exceeds min(n_tx, n_rx)");
    if (cfg.n_paths < cfg.n_streams)
        throw std::invalid_argument("n_paths must be at least n_streams");
}

void validate_mu(const SystemConfig& cfg, int users)
{
    check_positive(cfg.n_tx, "n_tx");
    check_positive(cfg.n_rx, "n_rx");
    check_positive(cfg.bits, "bits");
    check_positive(cfg.n_paths, "n_paths");
    check_positive(users, "users");
    if (cfg.n_streams != 1 || cfg.n_rf_tx != 1)
        throw std::invalid_argument("multiuser config requires single-stream users with one RF chain");
    if (cfg.n_rf_rx != users)
        throw std::invalid_argument("multiuser config requires n_rf_rx equal to the user count");
}

PhaseCodebook::PhaseCodebook(int bits) : bits_(bits)
{
    if (bits < 1)
        throw std::invalid_argument("PhaseCodebook: bits must be at least 1");
    if (bits > 24)
        throw std::invalid_argument("PhaseCodebook: bits too large");
    const std::size_t m = std::size_t{1} << bits;
    phases_.resize(m);
    phasors_.resize(m);
    for (std::size_t b = 1; b <= m; ++b) {
        phases_[b - 1] = two_pi * static_cast<double>(b) / static_cast<double>(m);
        phasors_[b - 1] = member_phasor(b, m, phases_[b - 1]);
    }
}

std::size_t PhaseCodebook::quantize_index(double theta) const
{
    if (!std::isfinite(theta))
        throw std::invalid_argument("quantize_phase: theta must be finite");
    const std::size_t m = phases_.size();
    const double delta = two_pi / static_cast<double>(m);
    const double x = wrap_phase(theta) / delta; // in (0, m]
    const double k_lo = std::floor(x);
    const double d_lo = x - k_lo;
    const double d_hi = 1.0 - d_lo;
    // 1-based member index of each neighbouring multiple; multiple 0 wraps to
    // the 2*pi member, multiple m+1 wraps to the first member.
    const std::size_t b_lo = (k_lo < 1.0) ? m : static_cast<std::size_t>(k_lo);
    const std::size_t b_hi = (static_cast<std::size_t>(k_lo) + 1 > m)
                                 ? 1
                                 : static_cast<std::size_t>(k_lo) + 1;
    std::size_t pick;
    if (d_lo < d_hi)
        pick = b_lo;
    else if (d_hi < d_lo)
        pick = b_hi;
    else
        pick = std::min(b_lo, b_hi);
    return pick - 1;
}

bool PhaseCodebook::contains(double theta, double tol) const
{
    return circular_distance(theta, quantize(theta)) <= tol;
}

double quantize_phase(double theta, const PhaseCodebook& codebook)
{
    return codebook.quantize(theta);
}

AnalogBeamformer AnalogBeamformer::from_phases(const MatR& phases)
{
    if (phases.rows() < 1)
        throw std::invalid_argument("AnalogBeamformer: empty phase matrix");
    AnalogBeamformer bf;
    bf.scale = 1.0 / std::sqrt(static_cast<double>(phases.rows()));
    bf.matrix.resize(phases.rows(), phases.cols());
    for (Eigen::Index j = 0; j < phases.cols(); ++j)
        for (Eigen::Index i = 0; i < phases.rows(); ++i)
            bf.matrix(i, j) = bf.scale * unit_phasor(phases(i, j));
    return bf;
}

void AnalogBeamformer::validate(const PhaseCodebook& codebook, double tol) const
{
    if (!(scale > 0.0))
        throw std::invalid_argument("AnalogBeamformer: scale must be positive");
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
        for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
            const cxd z = matrix(i, j);
            if (std::abs(std::abs(z) - scale) > tol * scale) {
                std::ostringstream os;
                os << "AnalogBeamformer: entry (" << i << "," << j << ") modulus " << std::abs(z)
                   << " deviates from " << scale;
                throw std::invalid_argument(os.str());
            }
            const double ph = std::arg(z);
            if (circular_distance(ph, codebook.quantize(ph)) > tol) {
                std::ostringstream os;
                os << "AnalogBeamformer: entry (" << i << "," << j << ") phase " << ph
                   << " is not a codebook member";
                throw std::invalid_argument(os.str());
            }
        }
    }
}

void HybridBeamformer::validate_power(double rel_tol) const
{
    const double ns = static_cast<double>(f_bb.cols());
    const double tx = (f_rf.matrix * f_bb).squaredNorm();
    const double rx = (w_rf.matrix * w_bb).squaredNorm();
    if (std::abs(tx - ns) > rel_tol * ns)
        throw std::invalid_argument("HybridBeamformer: ||F_RF F_BB||_F^2 != N_s");
    if (std::abs(rx - ns) > rel_tol * ns)
        throw std::invalid_argument("HybridBeamformer: ||W_RF W_BB||_F^2 != N_s");
}

} // namespace hybeam
