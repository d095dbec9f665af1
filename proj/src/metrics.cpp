#include "hybeam/metrics.hpp"

#include "hybeam/numerics.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace hybeam {

LinkBudget LinkBudget::from_snr_db(double snr_db)
{
    return {std::pow(10.0, snr_db / 10.0), 1.0, snr_db};
}

double spectral_efficiency(const MatC& h, const HybridBeamformer& bf, const LinkBudget& budget)
{
    if (!(budget.power > 0.0) || !(budget.noise_var > 0.0))
        throw std::invalid_argument("spectral_efficiency: power and noise_var must be positive");
    const MatC w = bf.w_rf.matrix * bf.w_bb;
    const MatC f = bf.f_rf.matrix * bf.f_bb;
    if (w.rows() != h.rows() || f.rows() != h.cols())
        throw std::invalid_argument("spectral_efficiency: dimension mismatch");
    const Eigen::Index ns = f.cols();
    const MatC rn = budget.noise_var * (w.adjoint() * w);
    Eigen::FullPivLU<MatC> lu(rn);
    if (!lu.isInvertible())
        throw DegenerateCombinerError("spectral_efficiency: singular post-combining noise covariance");
    const MatC a = w.adjoint() * h * f;
    const MatC g = MatC::Identity(ns, ns) +
                   (budget.power / static_cast<double>(ns)) * lu.solve(a * a.adjoint());
    const double r = logdet2_abs(g);
    // det(I + PSD) >= 1; tiny negative values are roundoff.
    return (r < 0.0 && r > -1e-9) ? 0.0 : r;
}

double full_digital_reference(const MatC& h, int n_streams, const LinkBudget& budget)
{
    if (n_streams < 1 || n_streams > std::min(h.rows(), h.cols()))
        throw std::invalid_argument("full_digital_reference: invalid stream count");
    Eigen::JacobiSVD<MatC> svd(h);
    const VecR sig = svd.singularValues();
    const double per_stream = budget.power / (static_cast<double>(n_streams) * budget.noise_var);
    double r = 0.0;
    for (int i = 0; i < n_streams; ++i)
        r += std::log2(1.0 + per_stream * sig(i) * sig(i));
    return r;
}

double user_sinr(int k, const std::vector<MatC>& channels, const std::vector<VecC>& precoders,
                 const std::vector<VecC>& combiners, const LinkBudget& budget)
{
    const std::size_t users = channels.size();
    if (precoders.size() != users || combiners.size() != users)
        throw std::invalid_argument("user_sinr: per-user sequence lengths differ");
    if (k < 0 || static_cast<std::size_t>(k) >= users)
        throw std::invalid_argument("user_sinr: user index out of range");
    const VecC& wk = combiners[static_cast<std::size_t>(k)];
    double signal = 0.0;
    double interference = 0.0;
    for (std::size_t i = 0; i < users; ++i) {
        const cxd gain = wk.dot(channels[i] * precoders[i]);
        const double p = budget.power * std::norm(gain);
        if (i == static_cast<std::size_t>(k))
            signal = p;
        else
            interference += p;
    }
    return signal / (interference + budget.noise_var * wk.squaredNorm());
}

double sum_rate(const std::vector<double>& sinrs)
{
    double r = 0.0;
    for (double g : sinrs) {
        if (g < 0.0 || std::isnan(g))
            throw std::invalid_argument("sum_rate: SINR must be non-negative");
        r += std::log2(1.0 + g);
    }
    return r;
}

} // namespace hybeam
