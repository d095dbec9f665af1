#include "hybeam/phase_match.hpp"

#include <Eigen/LU>

#include <cmath>
#include <stdexcept>

namespace hybeam {

InterferenceChannel interference_channel(const TruncatedSvd& svd, const MatC& f_excl,
                                         const MatC& w_excl, double alpha)
{
    if (!(alpha > 0.0))
        throw std::invalid_argument("interference_channel: alpha must be positive");
    const Eigen::Index ns = svd.sigma_hat.size();
    MatC m = MatC::Zero(ns, ns);
    if (f_excl.size() > 0 || w_excl.size() > 0) {
        if (f_excl.cols() != w_excl.cols())
            throw std::invalid_argument("interference_channel: exclusion column counts differ");
        if (f_excl.rows() != svd.v_hat.rows() || w_excl.rows() != svd.u_hat.rows())
            throw std::invalid_argument("interference_channel: exclusion row dimensions mismatch");
        m = svd.sigma_hat.asDiagonal() * (svd.v_hat.adjoint() * f_excl) *
            (w_excl.adjoint() * svd.u_hat);
    }
    MatC a = m;
    a.diagonal().array() += alpha;
    Eigen::FullPivLU<MatC> lu(a);
    if (!lu.isInvertible())
        throw RegularizationError(
            "interference_channel: inner matrix numerically singular; increase alpha");
    const MatC sv = svd.sigma_hat.asDiagonal() * svd.v_hat.adjoint();
    return {svd.u_hat * lu.solve(sv), alpha};
}

double conditional_phase(const InterferenceChannel& q, const VecR& theta, const VecR& phi,
                         Eigen::Index index, Side side)
{
    const MatC& m = q.q;
    if (theta.size() != m.cols() || phi.size() != m.rows())
        throw std::invalid_argument("conditional_phase: phase vector dimensions mismatch");
    if (index < 0 || index >= (side == Side::tx ? theta.size() : phi.size()))
        throw std::invalid_argument("conditional_phase: index out of range");
    const VecC b = phasors(theta);
    const VecC a = phasors(phi);
    if (side == Side::tx) {
        // w^H Q f = sum_i b_i s_i with s_i = sum_j conj(a_j) Q(j,i); align the
        // indexed term with the rest.
        const VecC s = (m.adjoint() * a).conjugate();
        const cxd z = (s.array() * b.array()).sum();
        const cxd rest = z - b(index) * s(index);
        return angle_or_zero(rest) - angle_or_zero(s(index));
    }
    // w^H Q f = sum_j conj(a_j) t_j with t = Q f; the indexed phase enters
    // conjugated, flipping the alignment.
    const VecC t = m * b;
    const cxd z = a.dot(t);
    const cxd rest = z - std::conj(a(index)) * t(index);
    return angle_or_zero(t(index)) - angle_or_zero(rest);
}

namespace {

bool member_phases(const VecR& phases, const PhaseCodebook& cb)
{
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        if (!cb.contains(phases(i)))
            return false;
    return true;
}

} // namespace

PhaseMatchState match_pair(const InterferenceChannel& q, const PhaseCodebook& codebook,
                           PhaseMatchState init, const PhaseMatchOptions& opts)
{
    const MatC& m = q.q;
    const Eigen::Index nt = m.cols();
    const Eigen::Index nr = m.rows();
    if (init.theta.size() != nt || init.phi.size() != nr)
        throw std::invalid_argument("match_pair: init phase dimensions mismatch");
    if (opts.max_sweeps < 1)
        throw std::invalid_argument("match_pair: max_sweeps must be positive");

    VecR th = init.theta;
    VecR ph = init.phi;
    VecC b(nt);
    VecC a(nr);
    if (opts.quantize) {
        if (!member_phases(th, codebook) || !member_phases(ph, codebook))
            throw std::invalid_argument("match_pair: init phases are not codebook members");
        // Snap to the stored member values so later comparisons are exact.
        for (Eigen::Index i = 0; i < nt; ++i) {
            const std::size_t idx = codebook.quantize_index(th(i));
            th(i) = codebook.phases()[idx];
            b(i) = codebook.phasor(idx);
        }
        for (Eigen::Index j = 0; j < nr; ++j) {
            const std::size_t idx = codebook.quantize_index(ph(j));
            ph(j) = codebook.phases()[idx];
            a(j) = codebook.phasor(idx);
        }
    } else {
        for (Eigen::Index i = 0; i < nt; ++i)
            th(i) = wrap_phase(th(i));
        for (Eigen::Index j = 0; j < nr; ++j)
            ph(j) = wrap_phase(ph(j));
        b = phasors(th);
        a = phasors(ph);
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(nt) * static_cast<double>(nr));

    PhaseMatchState state;
    // z tracks the unscaled sum a^H Q b incrementally; accepted updates reuse
    // the exact float compared against, so the recorded trace never dips.
    VecC s = (m.adjoint() * a).conjugate();
    cxd z = (s.array() * b.array()).sum();
    if (opts.record_trace)
        state.trace.push_back(std::abs(z) * scale);

    int sweeps = 0;
    bool converged = false;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        bool changed = false;
        if (sweep > 0)
            s = (m.adjoint() * a).conjugate();
        for (Eigen::Index i = 0; i < nt; ++i) {
            const cxd si = s(i);
            const cxd rest = z - b(i) * si;
            const double want = angle_or_zero(rest) - angle_or_zero(si);
            double cand_phase;
            cxd cand;
            if (opts.quantize) {
                const std::size_t idx = codebook.quantize_index(want);
                cand_phase = codebook.phases()[idx];
                if (cand_phase == th(i))
                    continue;
                cand = codebook.phasor(idx);
            } else {
                cand_phase = wrap_phase(want);
                if (circular_distance(cand_phase, th(i)) <= 1e-9)
                    continue;
                cand = unit_phasor(cand_phase);
            }
            const cxd z_new = rest + cand * si;
            if (std::abs(z_new) > std::abs(z)) {
                th(i) = cand_phase;
                b(i) = cand;
                z = z_new;
                changed = true;
                if (opts.record_trace)
                    state.trace.push_back(std::abs(z) * scale);
            }
        }
        const VecC t = m * b;
        for (Eigen::Index j = 0; j < nr; ++j) {
            const cxd tj = t(j);
            const cxd rest = z - std::conj(a(j)) * tj;
            const double want = angle_or_zero(tj) - angle_or_zero(rest);
            double cand_phase;
            cxd cand;
            if (opts.quantize) {
                const std::size_t idx = codebook.quantize_index(want);
                cand_phase = codebook.phases()[idx];
                if (cand_phase == ph(j))
                    continue;
                cand = codebook.phasor(idx);
            } else {
                cand_phase = wrap_phase(want);
                if (circular_distance(cand_phase, ph(j)) <= 1e-9)
                    continue;
                cand = unit_phasor(cand_phase);
            }
            const cxd z_new = rest + std::conj(cand) * tj;
            if (std::abs(z_new) > std::abs(z)) {
                ph(j) = cand_phase;
                a(j) = cand;
                z = z_new;
                changed = true;
                if (opts.record_trace)
                    state.trace.push_back(std::abs(z) * scale);
            }
        }
        ++sweeps;
        if (!changed) {
            converged = true;
            break;
        }
    }

    state.theta = std::move(th);
    state.phi = std::move(ph);
    state.sweeps = sweeps;
    state.converged = converged;
    state.objective = std::abs(a.dot(m * b)) * scale;
    return state;
}

PhaseMatchState initial_state_from_svd(const TruncatedSvd& svd, int stream,
                                       const PhaseCodebook& codebook, bool quantize)
{
    if (stream < 0 || stream >= svd.sigma_hat.size())
        throw std::invalid_argument("initial_state_from_svd: stream out of range");
    PhaseMatchState st;
    st.theta.resize(svd.v_hat.rows());
    st.phi.resize(svd.u_hat.rows());
    for (Eigen::Index i = 0; i < svd.v_hat.rows(); ++i) {
        const double ang = angle_or_zero(svd.v_hat(i, stream));
        st.theta(i) = quantize ? codebook.quantize(ang) : wrap_phase(ang);
    }
    for (Eigen::Index j = 0; j < svd.u_hat.rows(); ++j) {
        const double ang = angle_or_zero(svd.u_hat(j, stream));
        st.phi(j) = quantize ? codebook.quantize(ang) : wrap_phase(ang);
    }
    return st;
}

namespace {

MatC drop_column(const MatC& m, Eigen::Index col)
{
    MatC out(m.rows(), m.cols() - 1);
    if (col > 0)
        out.leftCols(col) = m.leftCols(col);
    if (col + 1 < m.cols())
        out.rightCols(m.cols() - col - 1) = m.rightCols(m.cols() - col - 1);
    return out;
}

} // namespace

AnalogDesign design_analog_su(const ChannelRealization& h, const SystemConfig& cfg,
                              const DesignOptions& opts)
{
    validate_su(cfg);
    if (h.h.rows() != cfg.n_rx || h.h.cols() != cfg.n_tx)
        throw std::invalid_argument("design_analog_su: channel dimensions disagree with config");
    const int ns = cfg.n_streams;
    const Eigen::Index nt = cfg.n_tx;
    const Eigen::Index nr = cfg.n_rx;

    const PhaseCodebook cb(cfg.bits);
    const TruncatedSvd svd = truncate_svd(h.h, ns);
    if (!(svd.sigma_hat(0) > 0.0))
        throw std::invalid_argument("design_analog_su: zero channel");
    const double alpha = opts.alpha_rel * svd.sigma_hat(0);

    const double tx_scale = 1.0 / std::sqrt(static_cast<double>(nt));
    const double rx_scale = 1.0 / std::sqrt(static_cast<double>(nr));

    std::vector<VecR> th(ns), ph(ns);
    MatC f = MatC::Zero(nt, ns);
    MatC w = MatC::Zero(nr, ns);
    std::vector<char> designed(ns, 0);

    AnalogDesign out;
    for (int outer = 1; outer <= opts.outer_cap; ++outer) {
        bool any_changed = false;
        for (int l = 0; l < ns; ++l) {
            const MatC f_ex = drop_column(f, l);
            const MatC w_ex = drop_column(w, l);
            const InterferenceChannel q = interference_channel(svd, f_ex, w_ex, alpha);
            PhaseMatchState init;
            if (designed[l]) {
                init.theta = th[l];
                init.phi = ph[l];
            } else {
                init = initial_state_from_svd(svd, l, cb, opts.pm.quantize);
            }
            PhaseMatchState st = match_pair(q, cb, std::move(init), opts.pm);
            out.inner_sweeps += st.sweeps;
            bool col_changed = !designed[l];
            if (designed[l]) {
                for (Eigen::Index i = 0; i < nt && !col_changed; ++i)
                    col_changed = opts.pm.quantize
                                      ? st.theta(i) != th[l](i)
                                      : circular_distance(st.theta(i), th[l](i)) > 1e-9;
                for (Eigen::Index j = 0; j < nr && !col_changed; ++j)
                    col_changed = opts.pm.quantize
                                      ? st.phi(j) != ph[l](j)
                                      : circular_distance(st.phi(j), ph[l](j)) > 1e-9;
            }
            th[l] = st.theta;
            ph[l] = st.phi;
            for (Eigen::Index i = 0; i < nt; ++i)
                f(i, l) = tx_scale * (opts.pm.quantize
                                          ? cb.phasor(cb.quantize_index(th[l](i)))
                                          : unit_phasor(th[l](i)));
            for (Eigen::Index j = 0; j < nr; ++j)
                w(j, l) = rx_scale * (opts.pm.quantize
                                          ? cb.phasor(cb.quantize_index(ph[l](j)))
                                          : unit_phasor(ph[l](j)));
            designed[l] = 1;
            any_changed = any_changed || col_changed;
        }
        out.outer_iters = outer;
        if (!any_changed) {
            out.converged = true;
            break;
        }
    }
    out.f_rf = AnalogBeamformer{std::move(f), tx_scale};
    out.w_rf = AnalogBeamformer{std::move(w), rx_scale};
    return out;
}

} // namespace hybeam
