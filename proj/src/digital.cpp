#include "hybeam/digital.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace hybeam {

MatC effective_channel(const MatC& h, const AnalogBeamformer& f_rf, const AnalogBeamformer& w_rf)
{
    if (w_rf.matrix.rows() != h.rows() || f_rf.matrix.rows() != h.cols())
        throw std::invalid_argument("effective_channel: dimension mismatch");
    return w_rf.matrix.adjoint() * h * f_rf.matrix;
}

BasebandPair baseband_svd(const MatC& h_eff)
{
    if (h_eff.rows() != h_eff.cols())
        throw std::invalid_argument("baseband_svd: effective channel must be square");
    Eigen::JacobiSVD<MatC> svd(h_eff, Eigen::ComputeFullU | Eigen::ComputeFullV);
    MatC u = svd.matrixU();
    MatC v = svd.matrixV();
    // Same phase convention as the channel SVD: the largest-modulus entry of
    // each right column is made real positive.
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
        Eigen::Index best = 0;
        double best_mod = 0.0;
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            const double m = std::abs(v(i, k));
            if (m > best_mod) {
                best_mod = m;
                best = i;
            }
        }
        if (best_mod == 0.0)
            continue;
        const cxd rot = unit_phasor(-std::arg(v(best, k)));
        v.col(k) *= rot;
        u.col(k) *= rot;
    }
    return {std::move(v), std::move(u)};
}

MatC normalize_power(const MatC& rf, const MatC& bb)
{
    if (rf.cols() != bb.rows())
        throw std::invalid_argument("normalize_power: dimension mismatch");
    const double norm = (rf * bb).norm();
    if (!(norm > 0.0))
        throw DegenerateBeamformerError("normalize_power: zero product norm");
    return bb * (std::sqrt(static_cast<double>(bb.cols())) / norm);
}

HybridBeamformer complete_hybrid(const MatC& h, const AnalogBeamformer& f_rf,
                                 const AnalogBeamformer& w_rf)
{
    const MatC h_eff = effective_channel(h, f_rf, w_rf);
    BasebandPair bb = baseband_svd(h_eff);
    HybridBeamformer out;
    out.f_rf = f_rf;
    out.w_rf = w_rf;
    out.f_bb = normalize_power(f_rf.matrix, bb.f_bb);
    out.w_bb = normalize_power(w_rf.matrix, bb.w_bb);
    return out;
}

} // namespace hybeam
