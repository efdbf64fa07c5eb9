#ifndef RISBO_MLP_HPP
#define RISBO_MLP_HPP

#include <json.hpp>
#include <vector>

#include "risbo/linalg.hpp"
#include "risbo/rng.hpp"

namespace risbo {

/// Three fully-connected layers: input -> hidden1 (sigmoid) -> hidden2 (ReLU)
/// -> output (softmax).
struct MlpShape {
    int input = 0;
    int hidden1 = 60;
    int hidden2 = 30;
    int output = 2;
};

struct MlpParams {
    RealMatrix w1, w2, w3;
    RealVector b1, b2, b3;

    /// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
    static MlpParams init(const MlpShape& shape, RngStream& rng);

    /// All-zero parameters; the network then outputs the uniform distribution.
    static MlpParams zeros(const MlpShape& shape);

    int input_size() const { return static_cast<int>(w1.cols()); }
    int output_size() const { return static_cast<int>(w3.rows()); }
};

/// Column-wise class probabilities for a d_in x B input batch.
RealMatrix mlp_forward(const MlpParams& params, const RealMatrix& x);
RealVector mlp_forward(const MlpParams& params, const RealVector& x);

/// -log(probs[label]); probabilities are clamped at 1e-300 before the log.
double cross_entropy_loss(const RealVector& probs, int label);

struct MlpGradients {
    RealMatrix w1, w2, w3;
    RealVector b1, b2, b3;
};

/// Gradient of the mean cross-entropy over the batch; also reports the loss.
MlpGradients mlp_backward(const MlpParams& params, const RealMatrix& x,
                          const std::vector<int>& labels, double* loss_out = nullptr);

/// In-place Adam update of one parameter array with bias correction.
void adam_update(Eigen::Ref<RealMatrix> param, const RealMatrix& grad, RealMatrix& m,
                 RealMatrix& v, long step, double lr, double beta1, double beta2, double eps);

struct AdamState {
    MlpGradients m;
    MlpGradients v;
    long step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static AdamState like(const MlpParams& params);
};

void adam_step(MlpParams& params, const MlpGradients& grads, AdamState& state, double lr);

struct TrainConfig {
    int epochs = 70;
    int batch_size = 32;
    double learning_rate = 0.01;
};

struct TrainSummary {
    double initial_loss = 0.0;
    double final_loss = 0.0;
};

/// Minibatch Adam on mean cross-entropy; epoch shuffles come from rng.
TrainSummary mlp_train(MlpParams& params, const RealMatrix& inputs,
                       const std::vector<int>& labels, const TrainConfig& config,
                       RngStream& rng);

/// Mean cross-entropy of the network over a labeled set.
double mlp_dataset_loss(const MlpParams& params, const RealMatrix& inputs,
                        const std::vector<int>& labels);

nlohmann::json mlp_to_json(const MlpParams& params);
MlpParams mlp_from_json(const nlohmann::json& j);

}  // namespace risbo

#endif
