#include "risbo/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "risbo/errors.hpp"

namespace risbo {
namespace {

RealMatrix uniform_matrix(RngStream& rng, Eigen::Index rows, Eigen::Index cols, double bound) {
    RealMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            m(i, j) = bound * (2.0 * rng.uniform() - 1.0);
        }
    }
    return m;
}

void validate_shape(const MlpShape& shape) {
    if (shape.input < 1 || shape.hidden1 < 1 || shape.hidden2 < 1 || shape.output < 2) {
        throw InvalidParameterError("MlpShape: layer sizes must be positive (output >= 2)");
    }
}

struct ForwardPass {
    RealMatrix a1;     // sigmoid activations
    RealMatrix mask2;  // ReLU derivative (0/1)
    RealMatrix a2;     // ReLU activations
    RealMatrix probs;  // softmax outputs
};

ForwardPass forward_pass(const MlpParams& p, const RealMatrix& x) {
    ForwardPass f;
    RealMatrix z1 = (p.w1 * x).colwise() + p.b1;
    f.a1 = (1.0 / (1.0 + (-z1.array()).exp())).matrix();
    RealMatrix z2 = (p.w2 * f.a1).colwise() + p.b2;
    f.mask2 = (z2.array() > 0.0).cast<double>().matrix();
    f.a2 = z2.cwiseMax(0.0);
    RealMatrix z3 = (p.w3 * f.a2).colwise() + p.b3;
    // Max-shifted softmax, column by column.
    f.probs.resize(z3.rows(), z3.cols());
    for (Eigen::Index t = 0; t < z3.cols(); ++t) {
        const RealVector e = (z3.col(t).array() - z3.col(t).maxCoeff()).exp();
        f.probs.col(t) = e / e.sum();
    }
    return f;
}

}  // namespace

MlpParams MlpParams::init(const MlpShape& shape, RngStream& rng) {
    validate_shape(shape);
    MlpParams p;
    p.w1 = uniform_matrix(rng, shape.hidden1, shape.input, 1.0 / std::sqrt(shape.input));
    p.b1 = RealVector::Zero(shape.hidden1);
    p.w2 = uniform_matrix(rng, shape.hidden2, shape.hidden1, 1.0 / std::sqrt(shape.hidden1));
    p.b2 = RealVector::Zero(shape.hidden2);
    p.w3 = uniform_matrix(rng, shape.output, shape.hidden2, 1.0 / std::sqrt(shape.hidden2));
    p.b3 = RealVector::Zero(shape.output);
    return p;
}

MlpParams MlpParams::zeros(const MlpShape& shape) {
    validate_shape(shape);
    MlpParams p;
    p.w1 = RealMatrix::Zero(shape.hidden1, shape.input);
    p.b1 = RealVector::Zero(shape.hidden1);
    p.w2 = RealMatrix::Zero(shape.hidden2, shape.hidden1);
    p.b2 = RealVector::Zero(shape.hidden2);
    p.w3 = RealMatrix::Zero(shape.output, shape.hidden2);
    p.b3 = RealVector::Zero(shape.output);
    return p;
}

RealMatrix mlp_forward(const MlpParams& params, const RealMatrix& x) {
    if (x.rows() != params.w1.cols()) {
        throw ShapeError("mlp_forward: input rows must equal the network input size");
    }
    if (!x.allFinite()) {
        throw InvalidInputError("mlp_forward: input contains non-finite values");
    }
    return forward_pass(params, x).probs;
}

RealVector mlp_forward(const MlpParams& params, const RealVector& x) {
    return mlp_forward(params, RealMatrix(x)).col(0);
}

double cross_entropy_loss(const RealVector& probs, int label) {
    if (label < 0 || label >= probs.size()) {
        throw InvalidParameterError("cross_entropy_loss: label out of range");
    }
    return -std::log(std::max(probs[label], 1e-300));
}

MlpGradients mlp_backward(const MlpParams& params, const RealMatrix& x,
                          const std::vector<int>& labels, double* loss_out) {
    const Eigen::Index batch = x.cols();
    if (batch == 0 || labels.size() != static_cast<std::size_t>(batch)) {
        throw ShapeError("mlp_backward: batch must be nonempty with one label per column");
    }
    const ForwardPass f = forward_pass(params, x);

    RealMatrix dz3 = f.probs;
    double loss = 0.0;
    for (Eigen::Index t = 0; t < batch; ++t) {
        const int label = labels[static_cast<std::size_t>(t)];
        if (label < 0 || label >= params.w3.rows()) {
            throw InvalidParameterError("mlp_backward: label out of range");
        }
        loss -= std::log(std::max(f.probs(label, t), 1e-300));
        dz3(label, t) -= 1.0;
    }
    dz3 /= static_cast<double>(batch);
    if (loss_out != nullptr) {
        *loss_out = loss / static_cast<double>(batch);
    }

    MlpGradients g;
    g.w3 = dz3 * f.a2.transpose();
    g.b3 = dz3.rowwise().sum();
    RealMatrix dz2 = (params.w3.transpose() * dz3).cwiseProduct(f.mask2);
    g.w2 = dz2 * f.a1.transpose();
    g.b2 = dz2.rowwise().sum();
    RealMatrix dz1 =
        ((params.w2.transpose() * dz2).array() * f.a1.array() * (1.0 - f.a1.array())).matrix();
    g.w1 = dz1 * x.transpose();
    g.b1 = dz1.rowwise().sum();
    return g;
}

void adam_update(Eigen::Ref<RealMatrix> param, const RealMatrix& grad, RealMatrix& m,
                 RealMatrix& v, long step, double lr, double beta1, double beta2, double eps) {
    m = beta1 * m + (1.0 - beta1) * grad;
    v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    param.array() -=
        lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);
}

AdamState AdamState::like(const MlpParams& params) {
    AdamState s;
    auto zero_like = [](const MlpParams& p) {
        MlpGradients g;
        g.w1 = RealMatrix::Zero(p.w1.rows(), p.w1.cols());
        g.b1 = RealVector::Zero(p.b1.size());
        g.w2 = RealMatrix::Zero(p.w2.rows(), p.w2.cols());
        g.b2 = RealVector::Zero(p.b2.size());
        g.w3 = RealMatrix::Zero(p.w3.rows(), p.w3.cols());
        g.b3 = RealVector::Zero(p.b3.size());
        return g;
    };
    s.m = zero_like(params);
    s.v = zero_like(params);
    return s;
}

void adam_step(MlpParams& params, const MlpGradients& grads, AdamState& state, double lr) {
    if (lr <= 0.0) {
        throw InvalidParameterError("adam_step: learning rate must be positive");
    }
    ++state.step;
    adam_update(params.w1, grads.w1, state.m.w1, state.v.w1, state.step, lr, state.beta1,
                state.beta2, state.eps);
    adam_update(params.w2, grads.w2, state.m.w2, state.v.w2, state.step, lr, state.beta1,
                state.beta2, state.eps);
    adam_update(params.w3, grads.w3, state.m.w3, state.v.w3, state.step, lr, state.beta1,
                state.beta2, state.eps);

    auto update_vector = [&](RealVector& param, const RealVector& grad, RealVector& m,
                             RealVector& v) {
        RealMatrix pm = param, gm = grad, mm = m, vm = v;
        adam_update(pm, gm, mm, vm, state.step, lr, state.beta1, state.beta2, state.eps);
        param = pm.col(0);
        m = mm.col(0);
        v = vm.col(0);
    };
    update_vector(params.b1, grads.b1, state.m.b1, state.v.b1);
    update_vector(params.b2, grads.b2, state.m.b2, state.v.b2);
    update_vector(params.b3, grads.b3, state.m.b3, state.v.b3);
}

double mlp_dataset_loss(const MlpParams& params, const RealMatrix& inputs,
                        const std::vector<int>& labels) {
    const RealMatrix probs = mlp_forward(params, inputs);
    double loss = 0.0;
    for (Eigen::Index t = 0; t < inputs.cols(); ++t) {
        loss -= std::log(std::max(probs(labels[static_cast<std::size_t>(t)], t), 1e-300));
    }
    return loss / static_cast<double>(inputs.cols());
}

TrainSummary mlp_train(MlpParams& params, const RealMatrix& inputs,
                       const std::vector<int>& labels, const TrainConfig& config,
                       RngStream& rng) {
    const Eigen::Index n = inputs.cols();
    if (n == 0 || labels.size() != static_cast<std::size_t>(n)) {
        throw InvalidParameterError("mlp_train: dataset must be nonempty with matched labels");
    }
    if (config.epochs < 1 || config.batch_size < 1 || config.learning_rate <= 0.0) {
        throw InvalidParameterError("mlp_train: epochs, batch_size and learning_rate must be positive");
    }

    TrainSummary summary;
    summary.initial_loss = mlp_dataset_loss(params, inputs, labels);

    AdamState state = AdamState::like(params);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    const Eigen::Index batch_size = std::min<Eigen::Index>(config.batch_size, n);
    RealMatrix batch_x(inputs.rows(), batch_size);
    std::vector<int> batch_labels(static_cast<std::size_t>(batch_size));

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        // Fisher-Yates with explicit draws; std::shuffle is not portable.
        for (Eigen::Index i = n - 1; i > 0; --i) {
            const auto j = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(i + 1)));
            std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
        }
        for (Eigen::Index start = 0; start + batch_size <= n; start += batch_size) {
            for (Eigen::Index c = 0; c < batch_size; ++c) {
                const Eigen::Index src = order[static_cast<std::size_t>(start + c)];
                batch_x.col(c) = inputs.col(src);
                batch_labels[static_cast<std::size_t>(c)] = labels[static_cast<std::size_t>(src)];
            }
            const MlpGradients grads = mlp_backward(params, batch_x, batch_labels);
            adam_step(params, grads, state, config.learning_rate);
        }
    }

    summary.final_loss = mlp_dataset_loss(params, inputs, labels);
    return summary;
}

namespace {

nlohmann::json matrix_to_json(const RealMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

RealMatrix matrix_from_json(const nlohmann::json& j) {
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
    RealMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(i, c) = j.at(i).at(c).get<double>();
        }
    }
    return m;
}

nlohmann::json vector_to_json(const RealVector& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

RealVector vector_from_json(const nlohmann::json& j) {
    RealVector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = j.at(i).get<double>();
    }
    return v;
}

}  // namespace

nlohmann::json mlp_to_json(const MlpParams& params) {
    return nlohmann::json{{"w1", matrix_to_json(params.w1)}, {"b1", vector_to_json(params.b1)},
                          {"w2", matrix_to_json(params.w2)}, {"b2", vector_to_json(params.b2)},
                          {"w3", matrix_to_json(params.w3)}, {"b3", vector_to_json(params.b3)}};
}

MlpParams mlp_from_json(const nlohmann::json& j) {
    MlpParams p;
    p.w1 = matrix_from_json(j.at("w1"));
    p.b1 = vector_from_json(j.at("b1"));
    p.w2 = matrix_from_json(j.at("w2"));
    p.b2 = vector_from_json(j.at("b2"));
    p.w3 = matrix_from_json(j.at("w3"));
    p.b3 = vector_from_json(j.at("b3"));
    return p;
}

}  // namespace risbo
