// Monte-Carlo experiment runner for the hybrid beamforming library.

#include "hybeam/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

constexpr const char* kVersion = "0.1.0";

struct CliParams {
    std::string out = "results.csv";
    int trials = 200;
    std::uint64_t seed = 1;
    std::vector<double> snr_list;
    int bits = 2;
    int nt = 64;
    int nr = 64;
    int ns = 6;
    int users = 4;
    std::vector<std::string> algorithms;
    int workers = 1;
    std::vector<int> nt_list;
    std::vector<int> bit_list;
    std::vector<int> iter_list;
    std::vector<int> user_list;
    int outer_cap = 10;
    int sweep_cap = 50;
    double spacing = 0.5;
    bool no_timing = false;
};

void add_experiment_options(CLI::App* sub, CliParams& p, hybeam::ExperimentKind kind)
{
    sub->add_option("--out", p.out, "Output CSV path")->capture_default_str();
    sub->add_option("--trials", p.trials, "Monte-Carlo trials per sweep value")
        ->capture_default_str();
    sub->add_option("--seed", p.seed, "Master seed")->capture_default_str();
    sub->add_option("--snr-list", p.snr_list, "SNR sweep values in dB")->delimiter(',');
    sub->add_option("--bits", p.bits, "Phase-shifter resolution B")->capture_default_str();
    sub->add_option("--nt", p.nt, "Transmit antennas")->capture_default_str();
    sub->add_option("--nr", p.nr, "Receive antennas")->capture_default_str();
    sub->add_option("--ns", p.ns, "Streams (= RF chains per side)")->capture_default_str();
    sub->add_option("--users", p.users, "Multiuser: number of users")->capture_default_str();
    sub->add_option("--algorithms", p.algorithms,
                    "Algorithms: pm, onebit, quantized-baseline, full-digital")
        ->delimiter(',');
    sub->add_option("--workers", p.workers, "Worker threads")->capture_default_str();
    sub->add_option("--outer-cap", p.outer_cap, "Outer design iteration cap")
        ->capture_default_str();
    sub->add_option("--sweep-cap", p.sweep_cap, "Inner phase sweep cap")->capture_default_str();
    sub->add_option("--spacing", p.spacing, "Antenna spacing over wavelength")
        ->capture_default_str();
    sub->add_flag("--no-timing", p.no_timing, "Write wall_time_s as 0 for byte-stable output");

    using hybeam::ExperimentKind;
    if (kind == ExperimentKind::su_antenna_sweep)
        sub->add_option("--nt-list", p.nt_list, "Antenna counts to sweep (nt = nr)")
            ->delimiter(',');
    if (kind == ExperimentKind::su_bit_sweep)
        sub->add_option("--bit-list", p.bit_list, "Resolutions B to sweep")->delimiter(',');
    if (kind == ExperimentKind::su_iteration_trace)
        sub->add_option("--iter-list", p.iter_list, "Outer iteration caps to sweep")
            ->delimiter(',');
    if (kind == ExperimentKind::mu_user_sweep)
        sub->add_option("--user-list", p.user_list, "User counts to sweep")->delimiter(',');
}

std::vector<double> sweep_values(hybeam::ExperimentKind kind, const CliParams& p)
{
    using hybeam::ExperimentKind;
    auto widen = [](const std::vector<int>& v) {
        return std::vector<double>(v.begin(), v.end());
    };
    switch (kind) {
    case ExperimentKind::su_snr_sweep:
    case ExperimentKind::mu_snr_sweep:
        return p.snr_list.empty() ? std::vector<double>{-10, -5, 0, 5, 10, 15, 20} : p.snr_list;
    case ExperimentKind::su_oracle_compare:
        return p.snr_list.empty() ? std::vector<double>{0} : p.snr_list;
    case ExperimentKind::su_antenna_sweep:
        return p.nt_list.empty() ? std::vector<double>{16, 32, 64} : widen(p.nt_list);
    case ExperimentKind::su_bit_sweep:
        return p.bit_list.empty() ? std::vector<double>{1, 2, 3, 4} : widen(p.bit_list);
    case ExperimentKind::su_iteration_trace:
        return p.iter_list.empty() ? std::vector<double>{1, 2, 3, 4, 5, 6} : widen(p.iter_list);
    case ExperimentKind::mu_user_sweep:
        return p.user_list.empty() ? std::vector<double>{2, 3, 4, 5, 6, 7, 8} : widen(p.user_list);
    }
    return {};
}

hybeam::ExperimentSpec build_spec(hybeam::ExperimentKind kind, const CliParams& p)
{
    using hybeam::ExperimentKind;
    hybeam::ExperimentSpec spec;
    spec.kind = kind;
    spec.base.n_tx = p.nt;
    spec.base.n_rx = p.nr;
    spec.base.bits = p.bits;
    spec.base.snr_db = 0.0;
    spec.base.seed = p.seed;
    spec.trials = p.trials;
    spec.users = p.users;
    spec.workers = p.workers;
    spec.spacing_over_lambda = p.spacing;
    spec.design.outer_cap = p.outer_cap;
    spec.design.pm.max_sweeps = p.sweep_cap;
    spec.measure_time = !p.no_timing;
    spec.sweep = sweep_values(kind, p);

    const bool mu = kind == ExperimentKind::mu_snr_sweep || kind == ExperimentKind::mu_user_sweep;
    if (mu) {
        spec.base.n_streams = 1;
        spec.base.n_rf_tx = 1;
        spec.base.n_rf_rx = p.users;
    } else {
        spec.base.n_streams = p.ns;
        spec.base.n_rf_tx = p.ns;
        spec.base.n_rf_rx = p.ns;
    }
    if (kind == ExperimentKind::su_oracle_compare) {
        // Desk-scale defaults where the exhaustive reference is tractable.
        spec.base.n_tx = p.nt > 8 ? 8 : p.nt;
        spec.base.n_rx = p.nr > 8 ? 8 : p.nr;
        spec.base.n_streams = spec.base.n_rf_tx = spec.base.n_rf_rx = 1;
        spec.base.bits = 1;
    }
    for (const std::string& name : p.algorithms)
        spec.algorithms.push_back(hybeam::algorithm_from_string(name));
    return spec;
}

int run_kind(hybeam::ExperimentKind kind, const CliParams& p)
{
    hybeam::ExperimentSpec spec = build_spec(kind, p);
    const std::vector<hybeam::ExperimentResult> rows = hybeam::run_experiment(spec);
    hybeam::emit_csv(rows, p.out);
    std::size_t failed = 0;
    for (const auto& r : rows)
        if (!r.error.empty())
            ++failed;
    std::cout << hybeam::to_string(kind) << ": wrote " << rows.size() << " rows to " << p.out;
    if (failed > 0)
        std::cout << " (" << failed << " rows carry an error tag)";
    std::cout << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hybrid analog/digital beamforming Monte-Carlo harness"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Structured key-value config file; flags override it");

    using hybeam::ExperimentKind;
    const std::vector<ExperimentKind> kinds = {
        ExperimentKind::su_snr_sweep,     ExperimentKind::su_antenna_sweep,
        ExperimentKind::su_iteration_trace, ExperimentKind::su_bit_sweep,
        ExperimentKind::su_oracle_compare, ExperimentKind::mu_snr_sweep,
        ExperimentKind::mu_user_sweep,
    };

    std::map<std::string, CliParams> params;
    std::map<std::string, ExperimentKind> by_name;
    for (ExperimentKind kind : kinds) {
        const std::string name = hybeam::to_string(kind);
        by_name[name] = kind;
        CLI::App* sub = app.add_subcommand(name, "Run the " + name + " experiment");
        if (kind == ExperimentKind::mu_snr_sweep || kind == ExperimentKind::mu_user_sweep) {
            params[name].nt = 16;
            params[name].nr = 64;
        }
        add_experiment_options(sub, params[name], kind);
    }

    CLI::App* validate = app.add_subcommand("validate-config", "Parse and check a config file");
    CLI::App* version = app.add_subcommand("version", "Print the version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (version->parsed()) {
            std::cout << "hybeam " << kVersion << '\n';
            return 0;
        }
        if (validate->parsed()) {
            for (ExperimentKind kind : kinds)
                hybeam::validate_spec(build_spec(kind, params[hybeam::to_string(kind)]));
            std::cout << "config ok\n";
            return 0;
        }
        for (const auto& [name, kind] : by_name)
            if (app.get_subcommand(name)->parsed())
                return run_kind(kind, params[name]);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
