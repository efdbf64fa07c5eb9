#ifndef RISBO_CONFIG_HPP
#define RISBO_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "risbo/gp.hpp"
#include "risbo/mlp.hpp"
#include "risbo/modem.hpp"

namespace risbo {

struct DimsConfig {
    int users = 3;            // K complex users
    int rx_antennas = 3;      // N
    int ris_elements = 8;     // P
    int resolution_bits = 2;  // b
};

struct ChannelConfig {
    double kappa = 10.0;  // Rician factor of the BS<->RIS link
    double beta = 1.0;    // pathloss, BS<->RIS
    double gamma = 1.0;   // pathloss, RIS<->users and direct link
};

struct TrainingSection {
    int n_pilots = 400;          // T, pilot vectors per iteration (= training set size)
    int q_iters = 3;             // Q cancellation iterations
    double learning_rate = 0.01;
    int epochs = 50;
    int batch_size = 32;
};

struct BoSection {
    int n_iterations = 15;  // N_bo
    double snr_db = -12.0;  // operating SNR of the joint loop
    double lengthscale = 3.0;
    double jitter = 1e-10;
    double observation_noise = 1e-2;  // standardized scale; absorbs BER sampling noise
    int restarts = 8;
    int sweeps = 3;
    int section_steps = 24;
    // Desk grids (4^8 = 65536 configs) are cheap enough to enumerate exactly;
    // paper-scale grids (2^36) always go through the continuous search.
    std::uint64_t exhaustive_limit = 65536;
};

struct EvalSection {
    std::vector<double> snr_db = {-16.0, -14.0, -12.0, -10.0, -8.0};
    long long n_test_bits = 100000;       // final BER measurements
    long long n_validation_bits = 10000;  // per-iteration BER_t measurements
    std::vector<std::uint64_t> seeds;     // replicate seeds; empty = master seed only
    bool reoptimize_per_snr = false;      // rerun the joint loop at every sweep point
};

struct ExperimentConfig {
    DimsConfig dims;
    ChannelConfig channel;
    ModulationKind modulation = ModulationKind::qpsk;
    TrainingSection training;
    BoSection bo;
    EvalSection eval;
    std::string output_dir = "runs";

    /// Users of the real-equivalent system (2K for QPSK, K for BPSK).
    int real_users() const;
    /// Observation length of the real-equivalent system (always 2N).
    int real_obs() const { return 2 * dims.rx_antennas; }
    /// Bits carried by one K-user symbol vector.
    int bits_per_vector() const;
    /// Symbol vectors needed to cover at least n_bits.
    Eigen::Index symbols_for_bits(long long n_bits) const;

    const Constellation& constellation() const { return Constellation::get(modulation); }
    TrainConfig train_config() const;
    AcquisitionSearch acquisition_search() const;

    /// Throws ConfigError naming the offending field on any range violation.
    void validate() const;
};

/// Named parameter sets: `desk` (default; minutes-scale experiments) and
/// `paper` (full-size setup). Unknown names raise ConfigError.
ExperimentConfig preset_config(const std::string& name);

/// Applies a partial JSON document over a base config. Unknown keys are
/// rejected and all errors carry the dotted field path. A "preset" key, when
/// present, expands first and replaces the base.
ExperimentConfig config_from_json(const nlohmann::json& doc, const ExperimentConfig& base);

/// Loads a JSON file over the named preset and validates the result.
ExperimentConfig parse_config(const std::string& path, const std::string& preset_name = "desk");

/// Full round-trippable document (no "preset" key; all fields explicit).
nlohmann::json config_to_json(const ExperimentConfig& config);

}  // namespace risbo

#endif
