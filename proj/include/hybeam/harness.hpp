#pragma once

#include "hybeam/core.hpp"
#include "hybeam/metrics.hpp"
#include "hybeam/phase_match.hpp"

#include <string>
#include <vector>

namespace hybeam {

enum class ExperimentKind {
    su_snr_sweep,
    su_antenna_sweep,
    su_iteration_trace,
    su_bit_sweep,
    su_oracle_compare,
    mu_snr_sweep,
    mu_user_sweep,
};

enum class Algorithm { pm, onebit, quantized_baseline, full_digital, exhaustive };

std::string to_string(ExperimentKind kind);
std::string to_string(Algorithm algo);
ExperimentKind kind_from_string(const std::string& s);
Algorithm algorithm_from_string(const std::string& s);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::su_snr_sweep;
    SystemConfig base;
    std::vector<double> sweep;           // sweep values (meaning depends on kind)
    int trials = 200;
    std::vector<Algorithm> algorithms;   // empty: kind default
    int users = 4;                       // multiuser kinds only
    int workers = 1;
    double spacing_over_lambda = 0.5;
    DesignOptions design;
    bool measure_time = true;            // false: wall_time_s column fixed at 0
};

/// Name of the swept quantity for a kind (CSV sweep_name column).
std::string sweep_name(ExperimentKind kind);

/// Default algorithm set for a kind.
std::vector<Algorithm> default_algorithms(ExperimentKind kind);

/// Throws std::invalid_argument on an inconsistent spec.
void validate_spec(const ExperimentSpec& spec);

/// Run every (sweep value, trial, algorithm) work item over a bounded worker
/// pool. Fully deterministic for a fixed spec: the channel of a trial depends
/// only on (base.seed, trial), and rows come back in sweep/trial/algorithm
/// order regardless of scheduling. A module error aborts only its own row and
/// is recorded in the error column.
std::vector<ExperimentResult> run_experiment(const ExperimentSpec& spec);

/// Raw per-trial rows; no aggregation. Numeric fields are written with 17
/// significant digits so they parse back losslessly.
void emit_csv(const std::vector<ExperimentResult>& results, const std::string& path);

extern const char* const csv_header;

} // namespace hybeam
