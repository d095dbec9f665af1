#include "hybeam/harness.hpp"

#include "hybeam/channel.hpp"
#include "hybeam/digital.hpp"
#include "hybeam/multiuser.hpp"
#include "hybeam/onebit.hpp"
#include "hybeam/oracle.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace hybeam {

const char* const csv_header =
    "kind,sweep_name,sweep_value,trial,seed,algorithm,bits,n_tx,n_rx,n_streams,users,"
    "spectral_efficiency,sum_rate,inner_sweeps,outer_iters,wall_time_s,error";

std::string to_string(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::su_snr_sweep: return "su-snr-sweep";
    case ExperimentKind::su_antenna_sweep: return "su-antenna-sweep";
    case ExperimentKind::su_iteration_trace: return "su-iteration-trace";
    case ExperimentKind::su_bit_sweep: return "su-bit-sweep";
    case ExperimentKind::su_oracle_compare: return "su-oracle-compare";
    case ExperimentKind::mu_snr_sweep: return "mu-snr-sweep";
    case ExperimentKind::mu_user_sweep: return "mu-user-sweep";
    }
    throw std::invalid_argument("unknown experiment kind");
}

std::string to_string(Algorithm algo)
{
    switch (algo) {
    case Algorithm::pm: return "pm";
    case Algorithm::onebit: return "onebit";
    case Algorithm::quantized_baseline: return "quantized-baseline";
    case Algorithm::full_digital: return "full-digital";
    case Algorithm::exhaustive: return "exhaustive";
    }
    throw std::invalid_argument("unknown algorithm");
}

ExperimentKind kind_from_string(const std::string& s)
{
    for (ExperimentKind k :
         {ExperimentKind::su_snr_sweep, ExperimentKind::su_antenna_sweep,
          ExperimentKind::su_iteration_trace, ExperimentKind::su_bit_sweep,
          ExperimentKind::su_oracle_compare, ExperimentKind::mu_snr_sweep,
          ExperimentKind::mu_user_sweep})
        if (to_string(k) == s)
            return k;
    throw std::invalid_argument("unknown experiment kind: " + s);
}

Algorithm algorithm_from_string(const std::string& s)
{
    for (Algorithm a : {Algorithm::pm, Algorithm::onebit, Algorithm::quantized_baseline,
                        Algorithm::full_digital, Algorithm::exhaustive})
        if (to_string(a) == s)
            return a;
    throw std::invalid_argument("unknown algorithm: " + s);
}

std::string sweep_name(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::su_snr_sweep:
    case ExperimentKind::su_oracle_compare:
    case ExperimentKind::mu_snr_sweep: return "snr_db";
    case ExperimentKind::su_antenna_sweep: return "n_antennas";
    case ExperimentKind::su_iteration_trace: return "outer_iters";
    case ExperimentKind::su_bit_sweep: return "bits";
    case ExperimentKind::mu_user_sweep: return "users";
    }
    throw std::invalid_argument("unknown experiment kind");
}

std::vector<Algorithm> default_algorithms(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::su_oracle_compare:
        return {Algorithm::onebit, Algorithm::exhaustive};
    case ExperimentKind::mu_snr_sweep:
    case ExperimentKind::mu_user_sweep:
        return {Algorithm::pm};
    default:
        return {Algorithm::pm, Algorithm::quantized_baseline, Algorithm::full_digital};
    }
}

void validate_spec(const ExperimentSpec& spec)
{
    if (spec.trials < 1)
        throw std::invalid_argument("experiment spec: trials must be at least 1");
    if (spec.sweep.empty())
        throw std::invalid_argument("experiment spec: sweep values must be non-empty");
    if (spec.workers < 1)
        throw std::invalid_argument("experiment spec: workers must be at least 1");
    if (spec.users < 1)
        throw std::invalid_argument("experiment spec: users must be at least 1");
    const bool mu = spec.kind == ExperimentKind::mu_snr_sweep ||
                    spec.kind == ExperimentKind::mu_user_sweep;
    for (Algorithm a : spec.algorithms) {
        if (a == Algorithm::exhaustive && spec.kind != ExperimentKind::su_oracle_compare)
            throw std::invalid_argument("experiment spec: 'exhaustive' is only valid for su-oracle-compare");
        if (mu && (a == Algorithm::quantized_baseline || a == Algorithm::full_digital))
            throw std::invalid_argument("experiment spec: multiuser kinds support only pm/onebit");
    }
    if (mu) {
        SystemConfig cfg = spec.base;
        cfg.n_streams = 1;
        cfg.n_rf_tx = 1;
        cfg.n_rf_rx = spec.kind == ExperimentKind::mu_user_sweep
                          ? static_cast<int>(spec.sweep.front())
                          : spec.users;
        validate_mu(cfg, cfg.n_rf_rx);
    } else {
        SystemConfig cfg = spec.base;
        if (spec.kind == ExperimentKind::su_bit_sweep)
            cfg.bits = static_cast<int>(spec.sweep.front());
        if (spec.kind == ExperimentKind::su_antenna_sweep)
            cfg.n_tx = cfg.n_rx = static_cast<int>(spec.sweep.front());
        validate_su(cfg);
    }
}

namespace {

struct Timer {
    bool enabled;
    std::chrono::steady_clock::time_point start;
    explicit Timer(bool on) : enabled(on), start(std::chrono::steady_clock::now()) {}
    double seconds() const
    {
        if (!enabled)
            return 0.0;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// Quantize-after-continuous baseline: per stream, the codebook-nearest phases
// of that stream's singular vectors, with no iterative refinement.
AnalogDesign quantized_baseline_design(const ChannelRealization& ch, const SystemConfig& cfg)
{
    const PhaseCodebook cb(cfg.bits);
    const TruncatedSvd svd = truncate_svd(ch.h, cfg.n_streams);
    const double tx_scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_tx));
    const double rx_scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_rx));
    MatC f(cfg.n_tx, cfg.n_streams), w(cfg.n_rx, cfg.n_streams);
    for (int l = 0; l < cfg.n_streams; ++l) {
        for (int i = 0; i < cfg.n_tx; ++i)
            f(i, l) = tx_scale * cb.phasor(cb.quantize_index(angle_or_zero(svd.v_hat(i, l))));
        for (int j = 0; j < cfg.n_rx; ++j)
            w(j, l) = rx_scale * cb.phasor(cb.quantize_index(angle_or_zero(svd.u_hat(j, l))));
    }
    return {AnalogBeamformer{std::move(f), tx_scale}, AnalogBeamformer{std::move(w), rx_scale},
            0, 0, true};
}

SystemConfig config_for_value(const ExperimentSpec& spec, double value)
{
    SystemConfig cfg = spec.base;
    switch (spec.kind) {
    case ExperimentKind::su_snr_sweep:
    case ExperimentKind::su_oracle_compare:
    case ExperimentKind::mu_snr_sweep:
        cfg.snr_db = value;
        break;
    case ExperimentKind::su_antenna_sweep:
        cfg.n_tx = cfg.n_rx = static_cast<int>(value);
        break;
    case ExperimentKind::su_bit_sweep:
        cfg.bits = static_cast<int>(value);
        break;
    case ExperimentKind::su_iteration_trace:
        break; // value adjusts the design options instead
    case ExperimentKind::mu_user_sweep:
        break; // value adjusts the user count instead
    }
    return cfg;
}

ExperimentResult run_item(const ExperimentSpec& spec, std::size_t value_idx, int trial,
                          Algorithm algo)
{
    const double value = spec.sweep[value_idx];
    SystemConfig cfg = config_for_value(spec, value);

    const bool mu = spec.kind == ExperimentKind::mu_snr_sweep ||
                    spec.kind == ExperimentKind::mu_user_sweep;
    const int users = spec.kind == ExperimentKind::mu_user_sweep ? static_cast<int>(value)
                      : mu                                       ? spec.users
                                                                 : 0;

    ExperimentResult row;
    row.kind = to_string(spec.kind);
    row.sweep_name = sweep_name(spec.kind);
    row.sweep_value = value;
    row.trial = trial;
    row.seed = mix_seed(spec.base.seed, static_cast<std::uint64_t>(trial));
    row.algorithm = to_string(algo);
    row.bits = cfg.bits;
    row.n_tx = cfg.n_tx;
    row.n_rx = cfg.n_rx;
    row.n_streams = mu ? 1 : cfg.n_streams;
    row.users = users;

    DesignOptions design = spec.design;
    if (spec.kind == ExperimentKind::su_iteration_trace)
        design.outer_cap = static_cast<int>(value);

    try {
        const LinkBudget budget = LinkBudget::from_snr_db(cfg.snr_db);
        std::mt19937_64 rng(row.seed);
        if (mu) {
            cfg.n_streams = 1;
            cfg.n_rf_tx = 1;
            cfg.n_rf_rx = users;
            row.n_streams = 1;
            SystemConfig user_cfg = cfg;
            std::vector<MatC> channels;
            channels.reserve(static_cast<std::size_t>(users));
            for (int k = 0; k < users; ++k)
                channels.push_back(
                    sample_channel(user_cfg, rng, spec.spacing_over_lambda).h);
            const MuEngine engine =
                algo == Algorithm::onebit ? MuEngine::one_bit : MuEngine::phase_matching;
            const Timer timer(spec.measure_time);
            const MultiuserDesign d = design_multiuser(channels, cfg, engine, design);
            row.wall_time_s = timer.seconds();
            row.inner_sweeps = d.total_inner;
            row.outer_iters = 1;
            row.sum_rate = multiuser_sum_rate(channels, d, budget);
            return row;
        }

        const ChannelRealization ch = sample_channel(cfg, rng, spec.spacing_over_lambda);
        switch (algo) {
        case Algorithm::full_digital: {
            const Timer timer(spec.measure_time);
            row.spectral_efficiency = full_digital_reference(ch.h, cfg.n_streams, budget);
            row.wall_time_s = timer.seconds();
            break;
        }
        case Algorithm::quantized_baseline: {
            const Timer timer(spec.measure_time);
            const AnalogDesign d = quantized_baseline_design(ch, cfg);
            const HybridBeamformer hb = complete_hybrid(ch.h, d.f_rf, d.w_rf);
            row.wall_time_s = timer.seconds();
            row.spectral_efficiency = spectral_efficiency(ch.h, hb, budget);
            break;
        }
        case Algorithm::pm: {
            const Timer timer(spec.measure_time);
            const AnalogDesign d = design_analog_su(ch, cfg, design);
            const HybridBeamformer hb = complete_hybrid(ch.h, d.f_rf, d.w_rf);
            row.wall_time_s = timer.seconds();
            row.inner_sweeps = d.inner_sweeps;
            row.outer_iters = d.outer_iters;
            row.spectral_efficiency = spectral_efficiency(ch.h, hb, budget);
            break;
        }
        case Algorithm::onebit: {
            const Timer timer(spec.measure_time);
            const AnalogDesign d = design_analog_su_onebit(ch, cfg, design);
            const HybridBeamformer hb = complete_hybrid(ch.h, d.f_rf, d.w_rf);
            row.wall_time_s = timer.seconds();
            row.inner_sweeps = d.inner_sweeps;
            row.outer_iters = d.outer_iters;
            row.spectral_efficiency = spectral_efficiency(ch.h, hb, budget);
            if (spec.kind == ExperimentKind::su_oracle_compare) {
                const TruncatedSvd svd = truncate_svd(ch.h, cfg.n_streams);
                const InterferenceChannel q = interference_channel(
                    svd, MatC(cfg.n_tx, 0), MatC(cfg.n_rx, 0),
                    design.alpha_rel * svd.sigma_hat(0));
                row.objective = pair_objective(q.q, hb.f_rf.matrix.col(0), hb.w_rf.matrix.col(0));
            }
            break;
        }
        case Algorithm::exhaustive: {
            const TruncatedSvd svd = truncate_svd(ch.h, cfg.n_streams);
            const InterferenceChannel q =
                interference_channel(svd, MatC(cfg.n_tx, 0), MatC(cfg.n_rx, 0),
                                     design.alpha_rel * svd.sigma_hat(0));
            const PhaseCodebook cb(cfg.bits);
            const Timer timer(spec.measure_time);
            const ExhaustivePair ex = exhaustive_pair(q.q, cb);
            MatC f(cfg.n_tx, 1), w(cfg.n_rx, 1);
            f.col(0) = ex.f;
            w.col(0) = ex.w;
            const AnalogBeamformer f_rf{std::move(f), 1.0 / std::sqrt(double(cfg.n_tx))};
            const AnalogBeamformer w_rf{std::move(w), 1.0 / std::sqrt(double(cfg.n_rx))};
            const HybridBeamformer hb = complete_hybrid(ch.h, f_rf, w_rf);
            row.wall_time_s = timer.seconds();
            row.spectral_efficiency = spectral_efficiency(ch.h, hb, budget);
            row.objective = ex.value;
            break;
        }
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

} // namespace

std::vector<ExperimentResult> run_experiment(const ExperimentSpec& spec)
{
    ExperimentSpec resolved = spec;
    if (resolved.algorithms.empty())
        resolved.algorithms = default_algorithms(resolved.kind);
    validate_spec(resolved);

    const std::size_t n_values = resolved.sweep.size();
    const std::size_t n_algos = resolved.algorithms.size();
    const std::size_t n_items = n_values * static_cast<std::size_t>(resolved.trials) * n_algos;
    std::vector<ExperimentResult> rows(n_items);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_items)
                return;
            const std::size_t value_idx = i / (resolved.trials * n_algos);
            const std::size_t rem = i % (resolved.trials * n_algos);
            const int trial = static_cast<int>(rem / n_algos);
            const Algorithm algo = resolved.algorithms[rem % n_algos];
            rows[i] = run_item(resolved, value_idx, trial, algo);
        }
    };

    const int extra = resolved.workers - 1;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(extra));
    for (int t = 0; t < extra; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    return rows;
}

namespace {

void write_number(std::string& out, double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

} // namespace

void emit_csv(const std::vector<ExperimentResult>& results, const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("emit_csv: cannot open " + path);
    os << csv_header << '\n';
    std::string line;
    for (const auto& r : results) {
        line.clear();
        line += r.kind;
        line += ',';
        line += r.sweep_name;
        line += ',';
        write_number(line, r.sweep_value);
        line += ',';
        line += std::to_string(r.trial);
        line += ',';
        line += std::to_string(r.seed);
        line += ',';
        line += r.algorithm;
        line += ',';
        line += std::to_string(r.bits);
        line += ',';
        line += std::to_string(r.n_tx);
        line += ',';
        line += std::to_string(r.n_rx);
        line += ',';
        line += std::to_string(r.n_streams);
        line += ',';
        line += std::to_string(r.users);
        line += ',';
        write_number(line, r.spectral_efficiency);
        line += ',';
        write_number(line, r.sum_rate);
        line += ',';
        line += std::to_string(r.inner_sweeps);
        line += ',';
        line += std::to_string(r.outer_iters);
        line += ',';
        write_number(line, r.wall_time_s);
        line += ',';
        line += r.error;
        line += '\n';
        os << line;
    }
    if (!os)
        throw std::runtime_error("emit_csv: write failure on " + path);
}

} // namespace hybeam
