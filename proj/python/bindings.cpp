// Python bindings for the risbo core: deterministic streams, channel and
// phase-grid types, the trained receiver, the surrogate model with its
// acquisition rule, and the high-level experiment drivers. Matrices cross the
// boundary as numpy arrays; configs and run results cross as plain dicts.
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>

#include "risbo/config.hpp"
#include "risbo/deepsic.hpp"
#include "risbo/errors.hpp"
#include "risbo/eval.hpp"
#include "risbo/gp.hpp"
#include "risbo/io.hpp"
#include "risbo/jointopt.hpp"
#include "risbo/mlp.hpp"
#include "risbo/rng.hpp"

namespace py = pybind11;
using namespace risbo;

namespace {

py::object json_to_py(const nlohmann::json& doc) {
    return py::module_::import("json").attr("loads")(doc.dump());
}

nlohmann::json py_to_json(py::handle obj) {
    const std::string text =
        py::module_::import("json").attr("dumps")(obj).cast<std::string>();
    return nlohmann::json::parse(text);
}

py::list records_to_py(const std::vector<SweepRecord>& records) {
    py::list out;
    for (const SweepRecord& r : records) {
        py::dict row;
        row["snr_db"] = r.snr_db;
        row["detector"] = to_string(r.detector);
        row["ber"] = r.ber;
        row["n_bits"] = r.n_bits;
        out.append(row);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_risbo, m) {
    m.doc() =
        "Seeded simulator core for joint receiver training and RIS phase "
        "optimization.";
    m.attr("__version__") = "0.1.0";

    py::register_exception<FitFailureError>(m, "FitFailureError", PyExc_RuntimeError);
    py::register_exception<ExhaustionError>(m, "ExhaustionError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InvalidStateError>(m, "InvalidStateError", PyExc_RuntimeError);

    // ---- deterministic random streams -------------------------------------
    py::class_<StreamId>(m, "StreamId",
                         "Hierarchical stream label; a pure function of the child path.")
        .def(py::init<>())
        .def("child", py::overload_cast<std::string_view>(&StreamId::child, py::const_),
             py::arg("name"))
        .def("child",
             py::overload_cast<std::string_view, std::uint64_t>(&StreamId::child, py::const_),
             py::arg("name"), py::arg("index"))
        .def_property_readonly("value", &StreamId::value)
        .def(py::self == py::self)
        .def("__repr__", [](const StreamId& id) {
            return "StreamId(value=" + std::to_string(id.value()) + ")";
        });

    py::class_<RngStream>(m, "RngStream",
                          "Deterministic variate stream, a pure function of (seed, stream id).")
        .def(py::init<std::uint64_t, StreamId>(), py::arg("seed"),
             py::arg("stream_id") = StreamId())
        .def_property_readonly("seed", &RngStream::seed)
        .def_property_readonly("stream_id", &RngStream::stream_id)
        .def("uniform", &RngStream::uniform)
        .def("normal", &RngStream::normal)
        .def("below", &RngStream::below, py::arg("bound"));

    // ---- RIS phase grid ----------------------------------------------------
    py::class_<PhaseConfig>(m, "PhaseConfig",
                            "A point on the b-bit RIS phase grid (one index per element).")
        .def(py::init<std::vector<std::uint32_t>, int>(), py::arg("grid_indices"),
             py::arg("resolution_bits"))
        .def_static(
            "random",
            [](RngStream& rng, Eigen::Index elements, int bits) {
                return PhaseConfig::random(rng, elements, bits);
            },
            py::arg("rng"), py::arg("elements"), py::arg("resolution_bits"))
        .def_property_readonly("grid_indices",
                               [](const PhaseConfig& c) { return c.grid_indices(); })
        .def_property_readonly("resolution_bits", &PhaseConfig::resolution_bits)
        .def_property_readonly("elements", &PhaseConfig::size)
        .def("angles", &PhaseConfig::angles, "Phase angles in radians, one per element.")
        .def("phases", &PhaseConfig::phases, "Unit-modulus reflection coefficients.")
        .def("embedding", &PhaseConfig::embedding,
             "Interleaved (cos, sin) coordinates used by the surrogate model.")
        .def(py::self == py::self)
        .def("__len__", &PhaseConfig::size)
        .def("__repr__", [](const PhaseConfig& c) {
            std::string out = "PhaseConfig([";
            const auto& idx = c.grid_indices();
            for (std::size_t i = 0; i < idx.size(); ++i) {
                if (i != 0) out += ", ";
                out += std::to_string(idx[i]);
            }
            return out + "], bits=" + std::to_string(c.resolution_bits()) + ")";
        });

    m.def("quantize_phases", &quantize_phases, py::arg("angles_rad"),
          py::arg("resolution_bits"),
          "Nearest grid point per element (circular distance, ties to the smaller index).");

    // ---- channel -----------------------------------------------------------
    py::class_<ChannelRealization>(m, "Channel",
                                   "One draw of the user-RIS, RIS-receiver, and direct links.")
        .def_readwrite("h1", &ChannelRealization::h1)
        .def_readwrite("h2", &ChannelRealization::h2)
        .def_readwrite("g", &ChannelRealization::g)
        .def_readwrite("gamma", &ChannelRealization::gamma)
        .def_readwrite("beta", &ChannelRealization::beta)
        .def_readwrite("kappa", &ChannelRealization::kappa)
        .def_property_readonly("rx_antennas", &ChannelRealization::rx_antennas)
        .def_property_readonly("users", &ChannelRealization::users)
        .def_property_readonly("ris_elements", &ChannelRealization::ris_elements)
        .def("to_dict",
             [](const ChannelRealization& ch) { return json_to_py(nlohmann::json(ch)); })
        .def_static("from_dict", [](py::handle obj) {
            return py_to_json(obj).get<ChannelRealization>();
        });

    m.def("draw_channel", &draw_channel, py::arg("rng"), py::arg("rx_antennas"),
          py::arg("users"), py::arg("ris_elements"), py::arg("kappa"), py::arg("beta"),
          py::arg("gamma"),
          "Draws h1, g, and the Rician h2 from the stream in a pinned order.");
    m.def("effective_matrix", &effective_matrix, py::arg("channel"), py::arg("phi"),
          "h2 @ diag(phases) @ h1 + g for the given RIS state.");

    py::class_<NoiseModel>(m, "NoiseModel")
        .def(py::init([](double sigma2) { return NoiseModel{sigma2}; }), py::arg("sigma2"))
        .def_static("from_snr_db", &NoiseModel::from_snr_db, py::arg("snr_db"))
        .def_readwrite("sigma2", &NoiseModel::sigma2)
        .def("snr_db", &NoiseModel::snr_db);

    m.def("transmit", &transmit, py::arg("channel"), py::arg("phi"), py::arg("symbols"),
          py::arg("noise"), py::arg("rng"),
          "received = effective_matrix(channel, phi) @ symbols + circular Gaussian noise.");

    // ---- modulation and the real-equivalent system -------------------------
    py::class_<Constellation>(m, "Constellation")
        .def_property_readonly("name",
                               [](const Constellation& c) { return to_string(c.kind()); })
        .def_property_readonly("order", &Constellation::order)
        .def_property_readonly("bits_per_symbol", &Constellation::bits_per_symbol)
        .def("points", &Constellation::points)
        .def("point", &Constellation::point, py::arg("index"))
        .def("bit", &Constellation::bit, py::arg("index"), py::arg("pos"));

    m.def(
        "constellation",
        [](const std::string& name) -> const Constellation& {
            return Constellation::get(modulation_from_string(name));
        },
        py::arg("name"), py::return_value_policy::reference,
        "The named alphabet ('bpsk' or 'qpsk') with Gray bit labels.");

    py::class_<SymbolBlock>(m, "SymbolBlock")
        .def_readonly("symbols", &SymbolBlock::symbols)
        .def_readonly("bits", &SymbolBlock::bits);

    m.def("random_symbols", &random_symbols, py::arg("rng"), py::arg("constellation"),
          py::arg("users"), py::arg("samples"),
          "Uniform i.i.d. symbol vectors plus their bit labels.");

    py::class_<RealSystem>(m, "RealSystem",
                           "A complex K-user problem rewritten with real antipodal users.")
        .def_readonly("channel", &RealSystem::channel)
        .def_readonly("symbols", &RealSystem::symbols)
        .def_readonly("bits", &RealSystem::bits)
        .def_readonly("received", &RealSystem::received)
        .def_readonly("sigma2", &RealSystem::sigma2);

    m.def("to_real_system", &to_real_system, py::arg("h_eff"), py::arg("block"),
          py::arg("received"), py::arg("sigma2"), py::arg("constellation"));

    py::class_<BitErrorCount>(m, "BitErrorCount")
        .def_readonly("errors", &BitErrorCount::errors)
        .def_readonly("total", &BitErrorCount::total)
        .def_readonly("ber", &BitErrorCount::ber);

    m.def("count_bit_errors", &count_bit_errors, py::arg("truth"), py::arg("decided"));

    // ---- trained receiver ---------------------------------------------------
    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init([](int epochs, int batch_size, double learning_rate) {
                 return TrainConfig{epochs, batch_size, learning_rate};
             }),
             py::arg("epochs") = 70, py::arg("batch_size") = 32,
             py::arg("learning_rate") = 0.01)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("batch_size", &TrainConfig::batch_size)
        .def_readwrite("learning_rate", &TrainConfig::learning_rate);

    py::class_<ReceiverParams>(m, "Receiver",
                               "Per-user, per-stage soft-cancellation networks.")
        .def_readonly("n_users", &ReceiverParams::n_users)
        .def_readonly("n_obs", &ReceiverParams::n_obs)
        .def_readonly("n_classes", &ReceiverParams::n_classes)
        .def_readonly("q_iters", &ReceiverParams::q_iters)
        .def("to_dict", [](const ReceiverParams& p) { return json_to_py(receiver_to_json(p)); })
        .def_static("from_dict",
                    [](py::handle obj) { return receiver_from_json(py_to_json(obj)); });

    m.def("train_receiver", &train_sequential, py::arg("received"), py::arg("labels"),
          py::arg("n_classes"), py::arg("q_iters"), py::arg("train_config"), py::arg("seed"),
          py::arg("stream_id") = StreamId(),
          "Stage-by-stage training of the soft-cancellation receiver on one pilot block.");

    py::class_<DetectionResult>(m, "DetectionResult")
        .def_readonly("hard", &DetectionResult::hard)
        .def_readonly("soft", &DetectionResult::soft);

    m.def("detect", &detect, py::arg("receiver"), py::arg("received"),
          "Hard and soft per-user decisions after the final cancellation stage.");

    py::class_<DetectionErrors>(m, "DetectionErrors")
        .def_readonly("bits", &DetectionErrors::bits)
        .def_readonly("symbol_errors", &DetectionErrors::symbol_errors)
        .def_readonly("symbols", &DetectionErrors::symbols)
        .def_readonly("ser", &DetectionErrors::ser);

    m.def("evaluate_errors", &evaluate_errors, py::arg("receiver"), py::arg("channel"),
          py::arg("phi"), py::arg("noise"), py::arg("constellation"), py::arg("n_symbols"),
          py::arg("rng"),
          "Fresh Monte Carlo bit- and symbol-error counts for a trained receiver.");

    // ---- surrogate model and acquisition ------------------------------------
    py::class_<GpDataset>(m, "GpDataset")
        .def(py::init<>())
        .def("add", &GpDataset::add, py::arg("config"), py::arg("value"))
        .def("contains", &GpDataset::contains, py::arg("config"))
        .def("__len__", &GpDataset::size)
        .def_readonly("configs", &GpDataset::configs)
        .def_readonly("observations", &GpDataset::observations);

    py::class_<PosteriorPrediction>(m, "PosteriorPrediction")
        .def_readonly("mean", &PosteriorPrediction::mean)
        .def_readonly("variance", &PosteriorPrediction::variance);

    py::class_<GpModel>(m, "GpModel")
        .def("posterior",
             py::overload_cast<const PhaseConfig&>(&GpModel::posterior, py::const_),
             py::arg("config"))
        .def_property_readonly("jitter_used", &GpModel::jitter_used)
        .def_property_readonly("observation_mean", &GpModel::observation_mean)
        .def_property_readonly("observation_scale", &GpModel::observation_scale);

    m.def("fit_gp", &fit_gp, py::arg("data"), py::arg("lengthscale"),
          py::arg("jitter") = 1e-10, py::arg("observation_noise") = 1e-6,
          "Standardizes the observations and factorizes the kernel matrix.");
    m.def("se_kernel", &se_kernel, py::arg("a"), py::arg("b"), py::arg("lengthscale"));
    m.def("expected_improvement",
          py::overload_cast<double, double, double>(&expected_improvement), py::arg("mean"),
          py::arg("variance"), py::arg("best_observed"));

    py::class_<AcquisitionSearch>(m, "AcquisitionSearch")
        .def(py::init<>())
        .def_readwrite("restarts", &AcquisitionSearch::restarts)
        .def_readwrite("sweeps", &AcquisitionSearch::sweeps)
        .def_readwrite("section_steps", &AcquisitionSearch::section_steps)
        .def_readwrite("exhaustive_limit", &AcquisitionSearch::exhaustive_limit);

    m.def("propose_next", &propose_next, py::arg("model"), py::arg("best_observed"),
          py::arg("search"), py::arg("rng"),
          "The unobserved grid configuration with the highest expected improvement.");

    // ---- exhaustive reference detector ---------------------------------------
    m.def("map_oracle_detect_block", &map_oracle_detect_block, py::arg("channel"),
          py::arg("phi"), py::arg("sigma2"), py::arg("constellation"), py::arg("received"),
          "Column-wise exhaustive minimum-distance decisions (reference detector).");
    m.def("evaluate_map_ber", &evaluate_map_ber, py::arg("channel"), py::arg("phi"),
          py::arg("noise"), py::arg("constellation"), py::arg("n_symbols"), py::arg("rng"));

    // ---- configuration --------------------------------------------------------
    py::class_<ExperimentConfig>(m, "Config",
                                 "Validated experiment parameters; edit via dict round-trips.")
        .def_static("preset", &preset_config, py::arg("name"))
        .def_static(
            "from_dict",
            [](py::handle overrides, const std::string& preset) {
                return config_from_json(py_to_json(overrides), preset_config(preset));
            },
            py::arg("overrides"), py::arg("preset") = "desk",
            "Preset values overridden by the given (possibly nested, partial) dict.")
        .def("to_dict",
             [](const ExperimentConfig& c) { return json_to_py(config_to_json(c)); })
        .def("validate", &ExperimentConfig::validate);

    // ---- experiment drivers ----------------------------------------------------
    m.def(
        "run_joint",
        [](const ExperimentConfig& config, std::uint64_t seed) {
            return json_to_py(run_result_to_json(run_joint(config, seed)));
        },
        py::arg("config"), py::arg("seed"),
        "Alternating receiver training and surrogate-guided phase proposals.");
    m.def(
        "run_random_baseline",
        [](const ExperimentConfig& config, std::uint64_t seed) {
            return json_to_py(run_result_to_json(run_random_baseline(config, seed)));
        },
        py::arg("config"), py::arg("seed"),
        "The same loop with uniform phase proposals; paired streams with run_joint.");
    m.def(
        "snr_sweep",
        [](const ExperimentConfig& config, std::uint64_t seed, bool include_optimized,
           bool optimize, bool include_map) {
            SweepOptions options;
            options.include_optimized = include_optimized;
            options.optimize = optimize;
            options.include_map = include_map;
            return records_to_py(snr_sweep(config, seed, options));
        },
        py::arg("config"), py::arg("seed"), py::arg("include_optimized") = false,
        py::arg("optimize") = true, py::arg("include_map") = true,
        "BER versus SNR rows on one channel draw.");
    m.def(
        "experiment_fixed_vs_optimized",
        [](const ExperimentConfig& config, std::uint64_t seed, bool optimize) {
            return records_to_py(experiment_fig4a(config, seed, optimize));
        },
        py::arg("config"), py::arg("seed"), py::arg("optimize") = true,
        "Paired fixed-phase and optimized-phase BER curves with reference rows.");
    m.def(
        "experiment_bo_vs_random",
        [](const ExperimentConfig& config, std::uint64_t seed) {
            const Fig4bResult result = experiment_fig4b(config, seed);
            py::dict out;
            out["bo"] = json_to_py(run_result_to_json(result.bo));
            out["random"] = json_to_py(run_result_to_json(result.random));
            return out;
        },
        py::arg("config"), py::arg("seed"),
        "Surrogate-guided and random search traces under paired streams.");
}
