#ifndef RISBO_EVAL_HPP
#define RISBO_EVAL_HPP

#include <string>
#include <vector>

#include "risbo/channel.hpp"
#include "risbo/config.hpp"
#include "risbo/jointopt.hpp"
#include "risbo/modem.hpp"

namespace risbo {

enum class DetectorTag { deepsic_fixed_ris, deepsic_opt_ris, map_oracle, random_ris };

std::string to_string(DetectorTag tag);

struct SweepRecord {
    double snr_db = 0.0;
    double ber = 0.0;
    DetectorTag detector = DetectorTag::deepsic_fixed_ris;
    long long n_bits = 0;
};

/// Exhaustive minimization of ||y - H_eff s||^2 over s in S^K, the MAP rule
/// under uniform priors and Gaussian noise (sigma2 does not affect the
/// minimizer and is accepted for interface completeness). Returns the
/// constellation index per user; ties break to the lexicographically smallest
/// index vector. Refuses problems with M^K > 4096 hypotheses.
Eigen::VectorXi map_oracle_detect(const ChannelRealization& ch, const PhaseConfig& phi,
                                  double sigma2, const Constellation& c, const ComplexVector& y);

/// Column-wise map_oracle_detect over a received block.
IntMatrix map_oracle_detect_block(const ChannelRealization& ch, const PhaseConfig& phi,
                                  double sigma2, const Constellation& c,
                                  const ComplexMatrix& y_block);

/// Monte Carlo BER of the exhaustive detector over n_symbols fresh vectors.
double evaluate_map_ber(const ChannelRealization& ch, const PhaseConfig& phi,
                        const NoiseModel& noise, const Constellation& c, Eigen::Index n_symbols,
                        RngStream& rng);

struct SweepOptions {
    bool include_optimized = false;   // run the joint loop and add its curve
    bool optimize = true;             // false: the optimized curve reuses phi_init (control)
    bool reoptimize_per_snr = false;  // rerun the joint loop at every SNR point
    bool include_map = true;          // exhaustive-detector rows when within bound
};

/// BER versus SNR on one fixed channel draw. Both DeepSIC curves at a given
/// SNR share pilots, noise, training substreams, and test symbols, so they
/// differ only through the RIS configuration.
std::vector<SweepRecord> snr_sweep(const ExperimentConfig& config, std::uint64_t seed,
                                   const SweepOptions& options);

/// Fixed-RIS versus optimized-RIS sweep (paired curves plus oracle rows).
/// With optimize = false the optimized curve reuses the initial configuration
/// and must coincide with the fixed curve. The per-SNR reoptimization mode
/// comes from config.eval.reoptimize_per_snr.
std::vector<SweepRecord> experiment_fig4a(const ExperimentConfig& config, std::uint64_t seed,
                                          bool optimize = true);

struct Fig4bResult {
    RunResult bo;
    RunResult random;
};

/// Paired joint-loop and random-baseline traces at the configured fixed SNR.
Fig4bResult experiment_fig4b(const ExperimentConfig& config, std::uint64_t seed);

}  // namespace risbo

#endif
