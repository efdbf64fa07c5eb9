#ifndef RISBO_JOINTOPT_HPP
#define RISBO_JOINTOPT_HPP

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "risbo/channel.hpp"
#include "risbo/config.hpp"
#include "risbo/deepsic.hpp"
#include "risbo/gp.hpp"

namespace risbo {

struct TraceEntry {
    int iteration = 0;  // 1-based, consecutive
    PhaseConfig phi;
    double ber = 0.0;                 // validation BER_t
    double ser = 0.0;                 // validation symbol error rate (debugging aid)
    double mean_training_loss = 0.0;  // mean final cross-entropy over all blocks
    double seconds = 0.0;             // wall clock; excluded from deterministic artifacts
    std::uint64_t stream_id = 0;      // id of this iteration's substream family
};

struct RunResult {
    std::vector<TraceEntry> trace;
    PhaseConfig best_config;          // phi*
    int best_iteration = 0;           // t*, earliest index attaining the trace minimum
    double best_ber = 1.0;            // min over trace
    ReceiverParams final_receiver;    // theta*, retrained with the first-iteration pilots
    double confirmation_ber = 1.0;    // BER of the retrained receiver at phi*
    long long pilot_transmissions = 0;  // N_bo * T + T

    double running_min_ber(int iteration) const;  // min of trace[0..iteration-1]
};

struct StepResult {
    ReceiverParams receiver;
    double ber = 0.0;
    double ser = 0.0;
};

/// One receiver update at fixed phi: transmit the given pilots, train the
/// receiver on them, and measure the validation BER. All randomness comes
/// from children of step_id, so identical (seed, step_id, pilots, phi) give
/// identical results.
StepResult alternating_step_receiver(const ExperimentConfig& config,
                                     const ChannelRealization& ch, const PhaseConfig& phi,
                                     const SymbolBlock& pilots, std::uint64_t seed,
                                     StreamId step_id);

/// The full joint loop: random phi_1; per iteration fresh pilots, receiver
/// training, BER measurement, GP fit, and EI proposal; then phi* selection
/// and a final retrain with the first-iteration pilots.
RunResult run_joint(const ExperimentConfig& config, std::uint64_t seed);
RunResult run_joint(const ExperimentConfig& config, const ChannelRealization& ch,
                    std::uint64_t seed);

/// Identical loop with uniformly drawn configurations (without replacement
/// while the grid has unvisited points) in place of the EI proposal. Shares
/// the channel, pilot, noise, and training streams of run_joint under the
/// same seed, so the two traces are paired per iteration index.
RunResult run_random_baseline(const ExperimentConfig& config, std::uint64_t seed);
RunResult run_random_baseline(const ExperimentConfig& config, const ChannelRealization& ch,
                              std::uint64_t seed);

nlohmann::json run_result_to_json(const RunResult& result);

}  // namespace risbo

#endif
