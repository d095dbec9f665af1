#include "hybeam/multiuser.hpp"

#include "hybeam/channel.hpp"
#include "hybeam/numerics.hpp"
#include "hybeam/onebit.hpp"

#include <Eigen/LU>

#include <cmath>
#include <stdexcept>

namespace hybeam {

MatC project_channel(const MatC& h_k, const MatC& d)
{
    if (d.cols() == 0)
        return h_k;
    if (d.rows() != h_k.rows())
        throw std::invalid_argument("project_channel: dimension mismatch");
    const MatC gram = d.adjoint() * d;
    if ((gram - MatC::Identity(d.cols(), d.cols())).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("project_channel: directions are not orthonormal");
    return h_k - d * (d.adjoint() * h_k);
}

namespace {

struct SinglePair {
    VecC f;
    VecC w;
    int inner = 0;
};

// One-stream analog pair on a given (possibly projected) channel, through the
// rank-1 truncated interference-included channel.
SinglePair design_pair_single(const MatC& h, const SystemConfig& cfg, MuEngine engine,
                              const DesignOptions& opts)
{
    const TruncatedSvd svd = truncate_svd(h, 1);
    if (!(svd.sigma_hat(0) > 0.0))
        throw std::invalid_argument("design_multiuser: degenerate projected channel");
    const double alpha = opts.alpha_rel * svd.sigma_hat(0);
    const InterferenceChannel q =
        interference_channel(svd, MatC(h.cols(), 0), MatC(h.rows(), 0), alpha);

    SinglePair out;
    if (engine == MuEngine::one_bit) {
        const BinaryPair pair = onebit_pair(q);
        out.f = pair.f.cast<cxd>();
        out.w = pair.w.cast<cxd>();
        out.inner = pair.iterations;
        return out;
    }
    const PhaseCodebook cb(cfg.bits);
    PhaseMatchState st =
        match_pair(q, cb, initial_state_from_svd(svd, 0, cb, opts.pm.quantize), opts.pm);
    out.inner = st.sweeps;
    const double tx_scale = 1.0 / std::sqrt(static_cast<double>(h.cols()));
    const double rx_scale = 1.0 / std::sqrt(static_cast<double>(h.rows()));
    out.f.resize(h.cols());
    out.w.resize(h.rows());
    for (Eigen::Index i = 0; i < h.cols(); ++i)
        out.f(i) = tx_scale * cb.phasor(cb.quantize_index(st.theta(i)));
    for (Eigen::Index j = 0; j < h.rows(); ++j)
        out.w(j) = rx_scale * cb.phasor(cb.quantize_index(st.phi(j)));
    return out;
}

} // namespace

MultiuserDesign design_multiuser(const std::vector<MatC>& channels, const SystemConfig& cfg,
                                 MuEngine engine, const DesignOptions& opts)
{
    const int users = static_cast<int>(channels.size());
    validate_mu(cfg, users);
    if (engine == MuEngine::one_bit && cfg.bits != 1)
        throw std::invalid_argument("design_multiuser: one-bit engine requires bits == 1");
    for (const MatC& h : channels)
        if (h.rows() != cfg.n_rx || h.cols() != cfg.n_tx)
            throw std::invalid_argument("design_multiuser: channel dimensions disagree with config");

    MultiuserDesign out;
    out.f.resize(static_cast<std::size_t>(users));
    out.w_rf.resize(cfg.n_rx, users);
    out.d.resize(cfg.n_rx, users);

    for (int k = 0; k < users; ++k) {
        const MatC basis = out.d.leftCols(k);
        const MatC h_eff = (k == 0) ? channels[0] : project_channel(channels[k], basis);
        SinglePair pair = design_pair_single(h_eff, cfg, engine, opts);
        out.total_inner += pair.inner;
        out.w_rf.col(k) = pair.w;
        out.f[static_cast<std::size_t>(k)] = std::move(pair.f);
        out.d.col(k) = gram_schmidt_append(basis, out.w_rf.col(k));
    }

    const LinkBudget budget = LinkBudget::from_snr_db(cfg.snr_db);
    MatC h_e(users, users);
    const double sqrt_p = std::sqrt(budget.power);
    for (int k = 0; k < users; ++k)
        h_e.col(k) = sqrt_p * (out.w_rf.adjoint() *
                               (channels[static_cast<std::size_t>(k)] *
                                out.f[static_cast<std::size_t>(k)]));
    out.w_bb = mmse_combiners(h_e, out.w_rf, budget.noise_var);
    return out;
}

MatC mmse_combiners(const MatC& h_eff, const MatC& w_rf, double noise_var)
{
    if (h_eff.rows() != w_rf.cols())
        throw std::invalid_argument("mmse_combiners: dimension mismatch");
    if (!(noise_var > 0.0))
        throw std::invalid_argument("mmse_combiners: noise_var must be positive");
    const MatC a = h_eff * h_eff.adjoint() + noise_var * (w_rf.adjoint() * w_rf);
    Eigen::FullPivLU<MatC> lu(a);
    if (!lu.isInvertible())
        throw DegenerateCombinerError("mmse_combiners: singular regularized matrix");
    return lu.solve(h_eff);
}

double multiuser_sum_rate(const std::vector<MatC>& channels, const MultiuserDesign& design,
                          const LinkBudget& budget)
{
    const std::size_t users = channels.size();
    std::vector<VecC> combiners(users);
    for (std::size_t k = 0; k < users; ++k)
        combiners[k] = design.w_rf * design.w_bb.col(static_cast<Eigen::Index>(k));
    std::vector<double> sinrs(users);
    for (std::size_t k = 0; k < users; ++k)
        sinrs[k] = user_sinr(static_cast<int>(k), channels, design.f, combiners, budget);
    return sum_rate(sinrs);
}

} // namespace hybeam
