#include "hybeam/onebit.hpp"

#include "hybeam/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hybeam {

AngleFold fold_angles(const VecC& g)
{
    const Eigen::Index n = g.size();
    AngleFold out;
    out.psi_hat.resize(n);
    out.flips.assign(static_cast<std::size_t>(n), false);
    constexpr double half_pi = std::numbers::pi / 2.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(g(i)) == 0.0) {
            out.psi_hat(i) = 0.0;
            continue;
        }
        const double psi = std::arg(g(i)); // (-pi, pi]
        if (psi >= half_pi) {
            out.psi_hat(i) = psi - std::numbers::pi;
            out.flips[static_cast<std::size_t>(i)] = true;
        } else if (psi < -half_pi) {
            out.psi_hat(i) = psi + std::numbers::pi;
            out.flips[static_cast<std::size_t>(i)] = true;
        } else {
            out.psi_hat(i) = psi;
        }
    }
    return out;
}

CandidateSet candidate_vectors(const VecC& g)
{
    const Eigen::Index n = g.size();
    if (n < 1)
        throw std::invalid_argument("candidate_vectors: empty vector");
    AngleFold fold = fold_angles(g);

    CandidateSet set;
    set.flips = fold.flips;
    set.permutation.resize(static_cast<std::size_t>(n));
    std::iota(set.permutation.begin(), set.permutation.end(), 0);
    std::stable_sort(set.permutation.begin(), set.permutation.end(),
                     [&](int a, int b) { return fold.psi_hat(a) < fold.psi_hat(b); });

    // Candidate k in the sorted domain is k leading ones then trailing minus
    // ones; undo the sort, then undo the folding sign flips.
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    set.vectors.resize(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        for (Eigen::Index pos = 0; pos < n; ++pos) {
            const double v = (pos < k) ? s : -s;
            set.vectors(set.permutation[static_cast<std::size_t>(pos)], k - 1) = v;
        }
        for (Eigen::Index i = 0; i < n; ++i)
            if (set.flips[static_cast<std::size_t>(i)])
                set.vectors(i, k - 1) = -set.vectors(i, k - 1);
    }
    return set;
}

BinaryPair onebit_pair(const InterferenceChannel& q, double tol, int max_iter)
{
    const MatC& m = q.q;
    const SingularTriplet top = power_iteration_rank1(m, tol, max_iter);
    const CandidateSet fc = candidate_vectors(top.right);
    const CandidateSet wc = candidate_vectors(top.left);
    const Eigen::Index nt = m.cols();
    const Eigen::Index nr = m.rows();

    // Scores follow the exact pair_objective float path: one materialized
    // product per precoder candidate, then conjugated dots.
    BinaryPair best;
    best.value = -1.0;
    best.iterations = top.iterations;
    VecC fv(nt), y(nr), wv(nr);
    for (Eigen::Index fi = 0; fi < nt; ++fi) {
        fv = fc.vectors.col(fi).cast<cxd>();
        y.noalias() = m * fv;
        for (Eigen::Index wi = 0; wi < nr; ++wi) {
            wv = wc.vectors.col(wi).cast<cxd>();
            const double val = std::abs(wv.dot(y));
            if (val > best.value) {
                best.value = val;
                best.f = fc.vectors.col(fi);
                best.w = wc.vectors.col(wi);
            }
        }
    }
    if (best.f(0) < 0.0)
        best.f = -best.f;
    if (best.w(0) < 0.0)
        best.w = -best.w;
    return best;
}

AnalogDesign design_analog_su_onebit(const ChannelRealization& h, const SystemConfig& cfg,
                                     const DesignOptions& opts)
{
    if (cfg.bits != 1)
        throw std::invalid_argument("design_analog_su_onebit: requires bits == 1");
    validate_su(cfg);
    if (h.h.rows() != cfg.n_rx || h.h.cols() != cfg.n_tx)
        throw std::invalid_argument("design_analog_su_onebit: channel dimensions disagree with config");
    const int ns = cfg.n_streams;
    const Eigen::Index nt = cfg.n_tx;
    const Eigen::Index nr = cfg.n_rx;

    const TruncatedSvd svd = truncate_svd(h.h, ns);
    if (!(svd.sigma_hat(0) > 0.0))
        throw std::invalid_argument("design_analog_su_onebit: zero channel");
    const double alpha = opts.alpha_rel * svd.sigma_hat(0);

    MatC f = MatC::Zero(nt, ns);
    MatC w = MatC::Zero(nr, ns);
    MatR f_real = MatR::Zero(nt, ns);
    MatR w_real = MatR::Zero(nr, ns);
    std::vector<char> designed(ns, 0);

    AnalogDesign out;
    for (int outer = 1; outer <= opts.outer_cap; ++outer) {
        bool any_changed = false;
        for (int l = 0; l < ns; ++l) {
            MatC f_ex(nt, ns - 1), w_ex(nr, ns - 1);
            Eigen::Index c = 0;
            for (int k = 0; k < ns; ++k) {
                if (k == l)
                    continue;
                f_ex.col(c) = f.col(k);
                w_ex.col(c) = w.col(k);
                ++c;
            }
            const InterferenceChannel q = interference_channel(svd, f_ex, w_ex, alpha);
            const BinaryPair pair = onebit_pair(q);
            out.inner_sweeps += pair.iterations;
            const bool col_changed = !designed[l] ||
                                     !(pair.f.array() == f_real.col(l).array()).all() ||
                                     !(pair.w.array() == w_real.col(l).array()).all();
            f_real.col(l) = pair.f;
            w_real.col(l) = pair.w;
            f.col(l) = pair.f.cast<cxd>();
            w.col(l) = pair.w.cast<cxd>();
            designed[l] = 1;
            any_changed = any_changed || col_changed;
        }
        out.outer_iters = outer;
        if (!any_changed) {
            out.converged = true;
            break;
        }
    }
    out.f_rf = AnalogBeamformer{std::move(f), 1.0 / std::sqrt(static_cast<double>(nt))};
    out.w_rf = AnalogBeamformer{std::move(w), 1.0 / std::sqrt(static_cast<double>(nr))};
    return out;
}

} // namespace hybeam
