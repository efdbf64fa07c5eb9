#include "risbo/jointopt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "risbo/errors.hpp"

namespace risbo {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Builds the real-equivalent training system for one pilot block.
RealSystem pilot_system(const ExperimentConfig& config, const ChannelRealization& ch,
                        const PhaseConfig& phi, const SymbolBlock& pilots,
                        const NoiseModel& noise, RngStream& noise_rng) {
    const ComplexMatrix received = transmit(ch, phi, pilots.symbols, noise, noise_rng);
    const ComplexMatrix h_eff = effective_matrix(ch, phi);
    return config.modulation == ModulationKind::qpsk
               ? to_real_system(h_eff, pilots, received, noise.sigma2, config.constellation())
               : real_view_bpsk(h_eff, pilots, received, noise.sigma2);
}

/// Uniform grid draw that avoids already-visited configs while any remain.
PhaseConfig draw_random_config(const GpDataset& data, const ExperimentConfig& config,
                               RngStream& rng) {
    const auto p = static_cast<Eigen::Index>(config.dims.ris_elements);
    const int bits = config.dims.resolution_bits;
    const auto total_bits =
        static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(bits);
    std::uint64_t distinct_seen = 0;
    if (total_bits < 63) {
        const std::uint64_t total = std::uint64_t{1} << total_bits;
        for (std::size_t i = 0; i < data.configs.size(); ++i) {
            bool repeat = false;
            for (std::size_t j = 0; j < i; ++j) {
                if (data.configs[i] == data.configs[j]) {
                    repeat = true;
                    break;
                }
            }
            if (!repeat) {
                ++distinct_seen;
            }
        }
        if (distinct_seen >= total) {
            return PhaseConfig::random(rng, p, bits);  // grid exhausted: with replacement
        }
    }
    while (true) {
        PhaseConfig cand = PhaseConfig::random(rng, p, bits);
        if (!data.contains(cand)) {
            return cand;
        }
    }
}

using Proposer = std::function<PhaseConfig(const GpDataset&, int iteration)>;

RunResult run_loop(const ExperimentConfig& config, const ChannelRealization& ch,
                   std::uint64_t seed, const Proposer& propose) {
    config.validate();
    const StreamId root;

    RngStream phi_rng(seed, root.child("phi_init"));
    PhaseConfig phi = PhaseConfig::random(phi_rng, config.dims.ris_elements,
                                          config.dims.resolution_bits);

    RunResult result;
    GpDataset data;
    SymbolBlock first_pilots;
    for (int t = 1; t <= config.bo.n_iterations; ++t) {
        const auto started = Clock::now();
        const StreamId step_id = root.child("iter", static_cast<std::uint64_t>(t));

        RngStream pilot_rng(seed, step_id.child("pilots"));
        const SymbolBlock pilots = random_symbols(pilot_rng, config.constellation(),
                                                  config.dims.users, config.training.n_pilots);
        if (t == 1) {
            first_pilots = pilots;
        }

        const StepResult step = alternating_step_receiver(config, ch, phi, pilots, seed, step_id);
        if (!std::isfinite(step.ber)) {
            throw InvalidStateError("run: non-finite BER at iteration " + std::to_string(t));
        }
        data.add(phi, -step.ber);

        TraceEntry entry;
        entry.iteration = t;
        entry.phi = phi;
        entry.ber = step.ber;
        entry.ser = step.ser;
        entry.mean_training_loss = step.receiver.training_loss.mean();
        entry.stream_id = step_id.value();
        entry.seconds = seconds_since(started);
        result.trace.push_back(std::move(entry));

        if (t < config.bo.n_iterations) {
            try {
                phi = propose(data, t);
            } catch (const FitFailureError& e) {
                throw FitFailureError(std::string(e.what()) + " (at iteration " +
                                      std::to_string(t) + ")");
            }
        }
    }

    result.best_iteration = 1;
    result.best_ber = result.trace.front().ber;
    for (const TraceEntry& entry : result.trace) {
        if (entry.ber < result.best_ber) {
            result.best_ber = entry.ber;
            result.best_iteration = entry.iteration;
        }
    }
    result.best_config = result.trace[static_cast<std::size_t>(result.best_iteration - 1)].phi;

    const StepResult final_step = alternating_step_receiver(
        config, ch, result.best_config, first_pilots, seed, root.child("final"));
    result.final_receiver = final_step.receiver;
    result.confirmation_ber = final_step.ber;
    result.pilot_transmissions =
        static_cast<long long>(config.bo.n_iterations + 1) * config.training.n_pilots;
    return result;
}

ChannelRealization draw_experiment_channel(const ExperimentConfig& config, std::uint64_t seed) {
    RngStream rng(seed, StreamId().child("channel"));
    return draw_channel(rng, config.dims.rx_antennas, config.dims.users,
                        config.dims.ris_elements, config.channel.kappa, config.channel.beta,
                        config.channel.gamma);
}

}  // namespace

double RunResult::running_min_ber(int iteration) const {
    if (iteration < 1 || static_cast<std::size_t>(iteration) > trace.size()) {
        throw InvalidParameterError("running_min_ber: iteration out of range");
    }
    double best = trace.front().ber;
    for (int i = 1; i < iteration; ++i) {
        best = std::min(best, trace[static_cast<std::size_t>(i)].ber);
    }
    return best;
}

StepResult alternating_step_receiver(const ExperimentConfig& config,
                                     const ChannelRealization& ch, const PhaseConfig& phi,
                                     const SymbolBlock& pilots, std::uint64_t seed,
                                     StreamId step_id) {
    const NoiseModel noise = NoiseModel::from_snr_db(config.bo.snr_db);
    RngStream noise_rng(seed, step_id.child("noise"));
    const RealSystem sys = pilot_system(config, ch, phi, pilots, noise, noise_rng);

    StepResult out;
    // The real-equivalent system is binary for both BPSK and QPSK inputs.
    out.receiver = train_sequential(sys.received, sys.bits, 2, config.training.q_iters,
                                    config.train_config(), seed, step_id.child("train"));

    RngStream validation_rng(seed, step_id.child("validation"));
    const DetectionErrors errors =
        evaluate_errors(out.receiver, ch, phi, noise, config.constellation(),
                        config.symbols_for_bits(config.eval.n_validation_bits), validation_rng);
    out.ber = errors.bits.ber;
    out.ser = errors.ser;
    return out;
}

RunResult run_joint(const ExperimentConfig& config, const ChannelRealization& ch,
                    std::uint64_t seed) {
    const Proposer propose = [&](const GpDataset& data, int t) {
        const GpModel model = fit_gp(data, config.bo.lengthscale, config.bo.jitter,
                                     config.bo.observation_noise);
        const double best = *std::max_element(data.observations.begin(),
                                              data.observations.end());
        RngStream rng(seed, StreamId().child("acquisition", static_cast<std::uint64_t>(t)));
        return propose_next(model, best, config.acquisition_search(), rng);
    };
    return run_loop(config, ch, seed, propose);
}

RunResult run_joint(const ExperimentConfig& config, std::uint64_t seed) {
    return run_joint(config, draw_experiment_channel(config, seed), seed);
}

RunResult run_random_baseline(const ExperimentConfig& config, const ChannelRealization& ch,
                              std::uint64_t seed) {
    const Proposer propose = [&](const GpDataset& data, int t) {
        RngStream rng(seed, StreamId().child("random_phi", static_cast<std::uint64_t>(t)));
        return draw_random_config(data, config, rng);
    };
    return run_loop(config, ch, seed, propose);
}

RunResult run_random_baseline(const ExperimentConfig& config, std::uint64_t seed) {
    return run_random_baseline(config, draw_experiment_channel(config, seed), seed);
}

nlohmann::json run_result_to_json(const RunResult& result) {
    nlohmann::json trace = nlohmann::json::array();
    for (const TraceEntry& e : result.trace) {
        trace.push_back(nlohmann::json{{"iteration", e.iteration},
                                       {"phi_indices", e.phi.grid_indices()},
                                       {"ber", e.ber},
                                       {"ser", e.ser},
                                       {"mean_training_loss", e.mean_training_loss},
                                       {"stream_id", e.stream_id}});
    }
    return nlohmann::json{{"trace", std::move(trace)},
                          {"best_iteration", result.best_iteration},
                          {"best_ber", result.best_ber},
                          {"best_phi_indices", result.best_config.grid_indices()},
                          {"confirmation_ber", result.confirmation_ber},
                          {"pilot_transmissions", result.pilot_transmissions}};
}

}  // namespace risbo
