#include "hybeam/channel.hpp"
#include "hybeam/core.hpp"
#include "hybeam/digital.hpp"
#include "hybeam/harness.hpp"
#include "hybeam/metrics.hpp"
#include "hybeam/multiuser.hpp"
#include "hybeam/numerics.hpp"
#include "hybeam/onebit.hpp"
#include "hybeam/oracle.hpp"
#include "hybeam/phase_match.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

namespace py = pybind11;
using namespace hybeam;

PYBIND11_MODULE(_hybeam, m)
{
    m.doc() = "Hybrid analog/digital beamforming with low-resolution phase shifters";
    m.attr("__version__") = "0.1.0";

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def_readwrite("n_tx", &SystemConfig::n_tx)
        .def_readwrite("n_rx", &SystemConfig::n_rx)
        .def_readwrite("n_rf_tx", &SystemConfig::n_rf_tx)
        .def_readwrite("n_rf_rx", &SystemConfig::n_rf_rx)
        .def_readwrite("n_streams", &SystemConfig::n_streams)
        .def_readwrite("bits", &SystemConfig::bits)
        .def_readwrite("n_paths", &SystemConfig::n_paths)
        .def_readwrite("snr_db", &SystemConfig::snr_db)
        .def_readwrite("seed", &SystemConfig::seed);
    m.def("validate_su", &validate_su);
    m.def("validate_mu", &validate_mu);

    py::class_<PhaseCodebook>(m, "PhaseCodebook")
        .def(py::init<int>(), py::arg("bits"))
        .def_property_readonly("bits", &PhaseCodebook::bits)
        .def_property_readonly("phases", &PhaseCodebook::phases)
        .def("__len__", &PhaseCodebook::size)
        .def("quantize", &PhaseCodebook::quantize)
        .def("quantize_index", &PhaseCodebook::quantize_index)
        .def("contains", &PhaseCodebook::contains, py::arg("theta"), py::arg("tol") = 1e-12);
    m.def("build_codebook", [](int bits) { return PhaseCodebook(bits); }, py::arg("bits"));
    m.def("quantize_phase", &quantize_phase);

    py::class_<AnalogBeamformer>(m, "AnalogBeamformer")
        .def(py::init<>())
        .def_readwrite("matrix", &AnalogBeamformer::matrix)
        .def_readwrite("scale", &AnalogBeamformer::scale)
        .def("validate", &AnalogBeamformer::validate, py::arg("codebook"),
             py::arg("tol") = 1e-12);

    py::class_<HybridBeamformer>(m, "HybridBeamformer")
        .def(py::init<>())
        .def_readwrite("f_rf", &HybridBeamformer::f_rf)
        .def_readwrite("f_bb", &HybridBeamformer::f_bb)
        .def_readwrite("w_rf", &HybridBeamformer::w_rf)
        .def_readwrite("w_bb", &HybridBeamformer::w_bb)
        .def("validate_power", &HybridBeamformer::validate_power, py::arg("rel_tol") = 1e-9);

    py::class_<PathParams>(m, "PathParams")
        .def_readwrite("gain", &PathParams::gain)
        .def_readwrite("aod", &PathParams::aod)
        .def_readwrite("aoa", &PathParams::aoa);

    py::class_<ChannelRealization>(m, "ChannelRealization")
        .def_readwrite("h", &ChannelRealization::h)
        .def_readwrite("paths", &ChannelRealization::paths)
        .def_readwrite("spacing_over_lambda", &ChannelRealization::spacing_over_lambda);

    py::class_<TruncatedSvd>(m, "TruncatedSvd")
        .def_readwrite("u_hat", &TruncatedSvd::u_hat)
        .def_readwrite("sigma_hat", &TruncatedSvd::sigma_hat)
        .def_readwrite("v_hat", &TruncatedSvd::v_hat);

    m.def("array_response", &array_response, py::arg("n"), py::arg("theta"),
          py::arg("spacing_over_lambda"));
    m.def("mix_seed", &mix_seed);
    m.def(
        "sample_channel",
        [](const SystemConfig& cfg, std::uint64_t seed, double spacing) {
            std::mt19937_64 rng(seed);
            return sample_channel(cfg, rng, spacing);
        },
        py::arg("cfg"), py::arg("seed"), py::arg("spacing_over_lambda") = 0.5);
    m.def("truncate_svd", &truncate_svd, py::arg("h"), py::arg("n_streams"));
    m.def("save_channel_csv", &save_channel_csv);
    m.def("load_channel_csv", &load_channel_csv);

    py::class_<SingularTriplet>(m, "SingularTriplet")
        .def_readwrite("sigma", &SingularTriplet::sigma)
        .def_readwrite("left", &SingularTriplet::left)
        .def_readwrite("right", &SingularTriplet::right)
        .def_readwrite("iterations", &SingularTriplet::iterations);
    m.def("power_iteration_rank1", &power_iteration_rank1, py::arg("q"), py::arg("tol") = 1e-10,
          py::arg("max_iter") = 1000);
    m.def("gram_schmidt_append", &gram_schmidt_append, py::arg("basis"), py::arg("v"));
    m.def("logdet2_abs", &logdet2_abs);
    m.def("pair_objective", &pair_objective);

    py::enum_<Side>(m, "Side").value("tx", Side::tx).value("rx", Side::rx);

    py::class_<InterferenceChannel>(m, "InterferenceChannel")
        .def_readwrite("q", &InterferenceChannel::q)
        .def_readwrite("alpha", &InterferenceChannel::alpha);
    m.def("interference_channel", &interference_channel, py::arg("svd"), py::arg("f_excl"),
          py::arg("w_excl"), py::arg("alpha"));
    m.def("conditional_phase", &conditional_phase, py::arg("q"), py::arg("theta"), py::arg("phi"),
          py::arg("index"), py::arg("side"));

    py::class_<PhaseMatchState>(m, "PhaseMatchState")
        .def(py::init<>())
        .def_readwrite("theta", &PhaseMatchState::theta)
        .def_readwrite("phi", &PhaseMatchState::phi)
        .def_readwrite("objective", &PhaseMatchState::objective)
        .def_readwrite("sweeps", &PhaseMatchState::sweeps)
        .def_readwrite("converged", &PhaseMatchState::converged)
        .def_readwrite("trace", &PhaseMatchState::trace);

    py::class_<PhaseMatchOptions>(m, "PhaseMatchOptions")
        .def(py::init<>())
        .def_readwrite("max_sweeps", &PhaseMatchOptions::max_sweeps)
        .def_readwrite("quantize", &PhaseMatchOptions::quantize)
        .def_readwrite("record_trace", &PhaseMatchOptions::record_trace);

    m.def("match_pair", &match_pair, py::arg("q"), py::arg("codebook"), py::arg("init"),
          py::arg("opts") = PhaseMatchOptions{});
    m.def("initial_state_from_svd", &initial_state_from_svd, py::arg("svd"), py::arg("stream"),
          py::arg("codebook"), py::arg("quantize") = true);

    py::class_<AnalogDesign>(m, "AnalogDesign")
        .def_readwrite("f_rf", &AnalogDesign::f_rf)
        .def_readwrite("w_rf", &AnalogDesign::w_rf)
        .def_readwrite("outer_iters", &AnalogDesign::outer_iters)
        .def_readwrite("inner_sweeps", &AnalogDesign::inner_sweeps)
        .def_readwrite("converged", &AnalogDesign::converged);

    py::class_<DesignOptions>(m, "DesignOptions")
        .def(py::init<>())
        .def_readwrite("alpha_rel", &DesignOptions::alpha_rel)
        .def_readwrite("outer_cap", &DesignOptions::outer_cap)
        .def_readwrite("pm", &DesignOptions::pm);

    m.def("design_analog_su", &design_analog_su, py::arg("h"), py::arg("cfg"),
          py::arg("opts") = DesignOptions{});

    py::class_<AngleFold>(m, "AngleFold")
        .def_readwrite("psi_hat", &AngleFold::psi_hat)
        .def_readwrite("flips", &AngleFold::flips);
    m.def("fold_angles", &fold_angles);

    py::class_<CandidateSet>(m, "CandidateSet")
        .def_readwrite("vectors", &CandidateSet::vectors)
        .def_readwrite("permutation", &CandidateSet::permutation)
        .def_readwrite("flips", &CandidateSet::flips);
    m.def("candidate_vectors", &candidate_vectors);

    py::class_<BinaryPair>(m, "BinaryPair")
        .def_readwrite("f", &BinaryPair::f)
        .def_readwrite("w", &BinaryPair::w)
        .def_readwrite("value", &BinaryPair::value)
        .def_readwrite("iterations", &BinaryPair::iterations);
    m.def("onebit_pair", &onebit_pair, py::arg("q"), py::arg("tol") = 1e-10,
          py::arg("max_iter") = 1000);
    m.def("design_analog_su_onebit", &design_analog_su_onebit, py::arg("h"), py::arg("cfg"),
          py::arg("opts") = DesignOptions{});

    m.def("effective_channel", &effective_channel);
    py::class_<BasebandPair>(m, "BasebandPair")
        .def_readwrite("f_bb", &BasebandPair::f_bb)
        .def_readwrite("w_bb", &BasebandPair::w_bb);
    m.def("baseband_svd", &baseband_svd);
    m.def("normalize_power", &normalize_power, py::arg("rf"), py::arg("bb"));
    m.def("complete_hybrid", &complete_hybrid, py::arg("h"), py::arg("f_rf"), py::arg("w_rf"));

    py::class_<LinkBudget>(m, "LinkBudget")
        .def(py::init<>())
        .def_readwrite("power", &LinkBudget::power)
        .def_readwrite("noise_var", &LinkBudget::noise_var)
        .def_readwrite("snr_db", &LinkBudget::snr_db)
        .def_static("from_snr_db", &LinkBudget::from_snr_db);
    m.def("spectral_efficiency", &spectral_efficiency);
    m.def("full_digital_reference", &full_digital_reference);
    m.def("user_sinr", &user_sinr);
    m.def("sum_rate", &sum_rate);

    py::enum_<MuEngine>(m, "MuEngine")
        .value("phase_matching", MuEngine::phase_matching)
        .value("one_bit", MuEngine::one_bit);

    py::class_<MultiuserDesign>(m, "MultiuserDesign")
        .def_readwrite("f", &MultiuserDesign::f)
        .def_readwrite("w_rf", &MultiuserDesign::w_rf)
        .def_readwrite("w_bb", &MultiuserDesign::w_bb)
        .def_readwrite("d", &MultiuserDesign::d)
        .def_readwrite("total_inner", &MultiuserDesign::total_inner);
    m.def("project_channel", &project_channel);
    m.def("design_multiuser", &design_multiuser, py::arg("channels"), py::arg("cfg"),
          py::arg("engine"), py::arg("opts") = DesignOptions{});
    m.def("mmse_combiners", &mmse_combiners);
    m.def("multiuser_sum_rate", &multiuser_sum_rate);

    py::class_<ExhaustivePair>(m, "ExhaustivePair")
        .def_readwrite("f", &ExhaustivePair::f)
        .def_readwrite("w", &ExhaustivePair::w)
        .def_readwrite("value", &ExhaustivePair::value);
    m.def("exhaustive_pair", &exhaustive_pair);
    m.def("grid_phase_oracle", &grid_phase_oracle, py::arg("q"), py::arg("theta"), py::arg("phi"),
          py::arg("index"), py::arg("side"), py::arg("grid_points"));

    py::enum_<ExperimentKind>(m, "ExperimentKind")
        .value("su_snr_sweep", ExperimentKind::su_snr_sweep)
        .value("su_antenna_sweep", ExperimentKind::su_antenna_sweep)
        .value("su_iteration_trace", ExperimentKind::su_iteration_trace)
        .value("su_bit_sweep", ExperimentKind::su_bit_sweep)
        .value("su_oracle_compare", ExperimentKind::su_oracle_compare)
        .value("mu_snr_sweep", ExperimentKind::mu_snr_sweep)
        .value("mu_user_sweep", ExperimentKind::mu_user_sweep);

    py::enum_<Algorithm>(m, "Algorithm")
        .value("pm", Algorithm::pm)
        .value("onebit", Algorithm::onebit)
        .value("quantized_baseline", Algorithm::quantized_baseline)
        .value("full_digital", Algorithm::full_digital)
        .value("exhaustive", Algorithm::exhaustive);

    py::class_<ExperimentSpec>(m, "ExperimentSpec")
        .def(py::init<>())
        .def_readwrite("kind", &ExperimentSpec::kind)
        .def_readwrite("base", &ExperimentSpec::base)
        .def_readwrite("sweep", &ExperimentSpec::sweep)
        .def_readwrite("trials", &ExperimentSpec::trials)
        .def_readwrite("algorithms", &ExperimentSpec::algorithms)
        .def_readwrite("users", &ExperimentSpec::users)
        .def_readwrite("workers", &ExperimentSpec::workers)
        .def_readwrite("spacing_over_lambda", &ExperimentSpec::spacing_over_lambda)
        .def_readwrite("design", &ExperimentSpec::design)
        .def_readwrite("measure_time", &ExperimentSpec::measure_time);

    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_readonly("kind", &ExperimentResult::kind)
        .def_readonly("sweep_name", &ExperimentResult::sweep_name)
        .def_readonly("sweep_value", &ExperimentResult::sweep_value)
        .def_readonly("trial", &ExperimentResult::trial)
        .def_readonly("seed", &ExperimentResult::seed)
        .def_readonly("algorithm", &ExperimentResult::algorithm)
        .def_readonly("bits", &ExperimentResult::bits)
        .def_readonly("n_tx", &ExperimentResult::n_tx)
        .def_readonly("n_rx", &ExperimentResult::n_rx)
        .def_readonly("n_streams", &ExperimentResult::n_streams)
        .def_readonly("users", &ExperimentResult::users)
        .def_readonly("spectral_efficiency", &ExperimentResult::spectral_efficiency)
        .def_readonly("sum_rate", &ExperimentResult::sum_rate)
        .def_readonly("objective", &ExperimentResult::objective)
        .def_readonly("inner_sweeps", &ExperimentResult::inner_sweeps)
        .def_readonly("outer_iters", &ExperimentResult::outer_iters)
        .def_readonly("wall_time_s", &ExperimentResult::wall_time_s)
        .def_readonly("error", &ExperimentResult::error);

    m.def("run_experiment", &run_experiment, py::call_guard<py::gil_scoped_release>());
    m.def("emit_csv", &emit_csv);
    m.attr("csv_header") = csv_header;
}
