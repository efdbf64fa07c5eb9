#ifndef RISBO_DEEPSIC_HPP
#define RISBO_DEEPSIC_HPP

#include <vector>

#include <json.hpp>

#include "risbo/channel.hpp"
#include "risbo/linalg.hpp"
#include "risbo/mlp.hpp"
#include "risbo/modem.hpp"
#include "risbo/rng.hpp"

namespace risbo {

/// The trained receiver: one classifier per (user, cancellation iteration),
/// operating on the real-equivalent system. Block (k, q) maps the received
/// vector plus the other users' stage-(q-1) soft estimates to user k's class
/// distribution.
struct ReceiverParams {
    int n_users = 0;      // K_real
    int n_obs = 0;        // N_real, length of one received vector
    int n_classes = 0;    // M_real, classes per user (2 for the real system)
    int q_iters = 0;      // Q

    /// Row-major grid: blocks[q * n_users + k].
    std::vector<MlpParams> blocks;

    /// Final mean training cross-entropy per block, q_iters x n_users.
    RealMatrix training_loss;

    bool trained() const { return !blocks.empty(); }
    const MlpParams& block(int user, int iteration) const;
    MlpParams& block(int user, int iteration);

    /// d_in of every block: n_obs + (n_users - 1) * (n_classes - 1).
    int feature_size() const { return n_obs + (n_users - 1) * (n_classes - 1); }
};

/// Classifier input for one sample: y first, then the free coordinates (first
/// M-1 entries) of each interferer's distribution, interferers in ascending
/// user index.
RealVector build_features(const RealVector& y, const std::vector<RealVector>& others,
                          int n_classes);

/// Batched build_features for user `exclude`: y_block is n_obs x T and soft[k]
/// is n_classes x T.
RealMatrix build_feature_block(const RealMatrix& y_block, const std::vector<RealMatrix>& soft,
                               int exclude);

/// Sequential training: for q = 1..Q, each block (k, q) is trained on features
/// built from the stage-(q-1) soft estimates, then its outputs on the training
/// set become the stage-q estimates. Blocks within a stage depend only on the
/// previous stage, so their training order is immaterial; each block draws
/// from its own (seed, id)-derived substreams.
ReceiverParams train_sequential(const RealMatrix& received, const IntMatrix& labels,
                                int n_classes, int q_iters, const TrainConfig& config,
                                std::uint64_t seed, StreamId id);

struct DetectionResult {
    IntMatrix hard;                // n_users x T class indices
    std::vector<RealMatrix> soft;  // final-iteration estimates, n_classes x T per user
};

/// Runs Q soft-cancellation iterations from uniform priors and takes the
/// argmax of the final estimates; ties break toward the lower class index.
DetectionResult detect(const ReceiverParams& params, const RealMatrix& y_block);

struct DetectionErrors {
    BitErrorCount bits;
    long long symbol_errors = 0;  // complex symbols with any wrong bit
    long long symbols = 0;
    double ser = 0.0;
};

/// Draws n_symbols fresh symbol vectors, transmits them through (ch, phi,
/// noise), detects on the real-equivalent system, and returns bit- and
/// symbol-error counts.
DetectionErrors evaluate_errors(const ReceiverParams& params, const ChannelRealization& ch,
                                const PhaseConfig& phi, const NoiseModel& noise,
                                const Constellation& c, Eigen::Index n_symbols, RngStream& rng);

/// The bit error rate of evaluate_errors.
double evaluate_ber(const ReceiverParams& params, const ChannelRealization& ch,
                    const PhaseConfig& phi, const NoiseModel& noise, const Constellation& c,
                    Eigen::Index n_symbols, RngStream& rng);

nlohmann::json receiver_to_json(const ReceiverParams& params);
ReceiverParams receiver_from_json(const nlohmann::json& j);

}  // namespace risbo

#endif
