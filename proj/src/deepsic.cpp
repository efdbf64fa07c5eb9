#include "risbo/deepsic.hpp"

#include <utility>

#include "risbo/errors.hpp"

namespace risbo {
namespace {

void check_grid_index(const ReceiverParams& p, int user, int iteration) {
    if (user < 0 || user >= p.n_users || iteration < 0 || iteration >= p.q_iters) {
        throw InvalidParameterError("ReceiverParams::block: (user, iteration) out of range");
    }
}

std::vector<RealMatrix> uniform_estimates(int n_users, int n_classes, Eigen::Index samples) {
    std::vector<RealMatrix> soft;
    soft.reserve(static_cast<std::size_t>(n_users));
    for (int k = 0; k < n_users; ++k) {
        soft.push_back(RealMatrix::Constant(n_classes, samples, 1.0 / n_classes));
    }
    return soft;
}

IntMatrix hard_decisions(const std::vector<RealMatrix>& soft) {
    const auto n_users = static_cast<Eigen::Index>(soft.size());
    const Eigen::Index samples = soft.front().cols();
    IntMatrix hard(n_users, samples);
    for (Eigen::Index k = 0; k < n_users; ++k) {
        const RealMatrix& probs = soft[static_cast<std::size_t>(k)];
        for (Eigen::Index t = 0; t < samples; ++t) {
            Eigen::Index best = 0;
            probs.col(t).maxCoeff(&best);  // first maximum: ties go to the lower index
            hard(k, t) = static_cast<int>(best);
        }
    }
    return hard;
}

}  // namespace

const MlpParams& ReceiverParams::block(int user, int iteration) const {
    check_grid_index(*this, user, iteration);
    return blocks[static_cast<std::size_t>(iteration) * static_cast<std::size_t>(n_users) +
                  static_cast<std::size_t>(user)];
}

MlpParams& ReceiverParams::block(int user, int iteration) {
    check_grid_index(*this, user, iteration);
    return blocks[static_cast<std::size_t>(iteration) * static_cast<std::size_t>(n_users) +
                  static_cast<std::size_t>(user)];
}

RealVector build_features(const RealVector& y, const std::vector<RealVector>& others,
                          int n_classes) {
    const auto n_others = static_cast<Eigen::Index>(others.size());
    RealVector features(y.size() + n_others * (n_classes - 1));
    features.head(y.size()) = y;
    Eigen::Index offset = y.size();
    for (const RealVector& dist : others) {
        if (dist.size() != n_classes) {
            throw ShapeError("build_features: soft estimate length must equal the class count");
        }
        features.segment(offset, n_classes - 1) = dist.head(n_classes - 1);
        offset += n_classes - 1;
    }
    return features;
}

RealMatrix build_feature_block(const RealMatrix& y_block, const std::vector<RealMatrix>& soft,
                               int exclude) {
    const auto n_users = static_cast<int>(soft.size());
    if (exclude < 0 || exclude >= n_users) {
        throw InvalidParameterError("build_feature_block: excluded user out of range");
    }
    const Eigen::Index samples = y_block.cols();
    const Eigen::Index n_classes = soft.front().rows();
    RealMatrix features(y_block.rows() + (n_users - 1) * (n_classes - 1), samples);
    features.topRows(y_block.rows()) = y_block;
    Eigen::Index offset = y_block.rows();
    for (int k = 0; k < n_users; ++k) {
        if (k == exclude) {
            continue;
        }
        const RealMatrix& dist = soft[static_cast<std::size_t>(k)];
        if (dist.rows() != n_classes || dist.cols() != samples) {
            throw ShapeError("build_feature_block: soft estimate block has inconsistent shape");
        }
        features.middleRows(offset, n_classes - 1) = dist.topRows(n_classes - 1);
        offset += n_classes - 1;
    }
    return features;
}

ReceiverParams train_sequential(const RealMatrix& received, const IntMatrix& labels,
                                int n_classes, int q_iters, const TrainConfig& config,
                                std::uint64_t seed, StreamId id) {
    if (received.cols() == 0) {
        throw InvalidInputError("train_sequential: empty training set");
    }
    if (labels.cols() != received.cols()) {
        throw ShapeError("train_sequential: one label column per received column required");
    }
    if (n_classes < 2 || q_iters < 1) {
        throw InvalidParameterError("train_sequential: need n_classes >= 2 and q_iters >= 1");
    }
    if (labels.minCoeff() < 0 || labels.maxCoeff() >= n_classes) {
        throw InvalidInputError("train_sequential: label outside [0, n_classes)");
    }

    ReceiverParams params;
    params.n_users = static_cast<int>(labels.rows());
    params.n_obs = static_cast<int>(received.rows());
    params.n_classes = n_classes;
    params.q_iters = q_iters;
    params.training_loss = RealMatrix::Zero(q_iters, params.n_users);

    const Eigen::Index samples = received.cols();
    MlpShape shape;
    shape.input = params.feature_size();
    shape.output = n_classes;

    std::vector<RealMatrix> soft = uniform_estimates(params.n_users, n_classes, samples);
    std::vector<RealMatrix> next = soft;

    for (int q = 0; q < q_iters; ++q) {
        // Every block in this stage reads only the stage-(q-1) estimates.
        for (int k = 0; k < params.n_users; ++k) {
            const RealMatrix features = build_feature_block(received, soft, k);
            std::vector<int> block_labels(static_cast<std::size_t>(samples));
            for (Eigen::Index t = 0; t < samples; ++t) {
                block_labels[static_cast<std::size_t>(t)] = labels(k, t);
            }

            RngStream init_rng(seed, id.child("init", static_cast<std::uint64_t>(k),
                                              static_cast<std::uint64_t>(q)));
            MlpParams net = MlpParams::init(shape, init_rng);
            RngStream train_rng(seed, id.child("shuffle", static_cast<std::uint64_t>(k),
                                               static_cast<std::uint64_t>(q)));
            const TrainSummary summary = mlp_train(net, features, block_labels, config, train_rng);
            params.training_loss(q, k) = summary.final_loss;

            next[static_cast<std::size_t>(k)] = mlp_forward(net, features);
            params.blocks.push_back(std::move(net));
        }
        soft.swap(next);
    }
    return params;
}

DetectionResult detect(const ReceiverParams& params, const RealMatrix& y_block) {
    if (!params.trained()) {
        throw InvalidStateError("detect: receiver has no trained blocks");
    }
    if (y_block.rows() != params.n_obs) {
        throw ShapeError("detect: received rows must equal the trained observation length");
    }
    if (!y_block.allFinite()) {
        throw InvalidInputError("detect: received block contains non-finite values");
    }

    std::vector<RealMatrix> soft =
        uniform_estimates(params.n_users, params.n_classes, y_block.cols());
    std::vector<RealMatrix> next = soft;
    for (int q = 0; q < params.q_iters; ++q) {
        for (int k = 0; k < params.n_users; ++k) {
            next[static_cast<std::size_t>(k)] =
                mlp_forward(params.block(k, q), build_feature_block(y_block, soft, k));
        }
        soft.swap(next);
    }

    DetectionResult result;
    result.hard = hard_decisions(soft);
    result.soft = std::move(soft);
    return result;
}

DetectionErrors evaluate_errors(const ReceiverParams& params, const ChannelRealization& ch,
                                const PhaseConfig& phi, const NoiseModel& noise,
                                const Constellation& c, Eigen::Index n_symbols, RngStream& rng) {
    if (n_symbols < 1) {
        throw InvalidParameterError("evaluate_errors: need at least one symbol vector");
    }
    const SymbolBlock block = random_symbols(rng, c, ch.users(), n_symbols);
    const ComplexMatrix received = transmit(ch, phi, block.symbols, noise, rng);
    const ComplexMatrix h_eff = effective_matrix(ch, phi);
    const bool qpsk = c.kind() == ModulationKind::qpsk;
    const RealSystem sys = qpsk ? to_real_system(h_eff, block, received, noise.sigma2, c)
                                : real_view_bpsk(h_eff, block, received, noise.sigma2);
    const DetectionResult detection = detect(params, sys.received);

    DetectionErrors out;
    out.bits = count_bit_errors(sys.bits, detection.hard);
    const Eigen::Index users = ch.users();
    out.symbols = users * n_symbols;
    for (Eigen::Index k = 0; k < users; ++k) {
        for (Eigen::Index t = 0; t < n_symbols; ++t) {
            // QPSK user k owns real rows (k, K + k); BPSK user k owns row k.
            bool wrong = detection.hard(k, t) != sys.bits(k, t);
            if (qpsk) {
                wrong = wrong || detection.hard(users + k, t) != sys.bits(users + k, t);
            }
            out.symbol_errors += wrong;
        }
    }
    out.ser = static_cast<double>(out.symbol_errors) / static_cast<double>(out.symbols);
    return out;
}

double evaluate_ber(const ReceiverParams& params, const ChannelRealization& ch,
                    const PhaseConfig& phi, const NoiseModel& noise, const Constellation& c,
                    Eigen::Index n_symbols, RngStream& rng) {
    return evaluate_errors(params, ch, phi, noise, c, n_symbols, rng).bits.ber;
}

nlohmann::json receiver_to_json(const ReceiverParams& params) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const MlpParams& b : params.blocks) {
        blocks.push_back(mlp_to_json(b));
    }
    nlohmann::json loss = nlohmann::json::array();
    for (Eigen::Index q = 0; q < params.training_loss.rows(); ++q) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index k = 0; k < params.training_loss.cols(); ++k) {
            row.push_back(params.training_loss(q, k));
        }
        loss.push_back(std::move(row));
    }
    return nlohmann::json{{"n_users", params.n_users}, {"n_obs", params.n_obs},
                          {"n_classes", params.n_classes}, {"q_iters", params.q_iters},
                          {"blocks", std::move(blocks)}, {"training_loss", std::move(loss)}};
}

ReceiverParams receiver_from_json(const nlohmann::json& j) {
    ReceiverParams params;
    params.n_users = j.at("n_users").get<int>();
    params.n_obs = j.at("n_obs").get<int>();
    params.n_classes = j.at("n_classes").get<int>();
    params.q_iters = j.at("q_iters").get<int>();
    for (const nlohmann::json& b : j.at("blocks")) {
        params.blocks.push_back(mlp_from_json(b));
    }
    const nlohmann::json& loss = j.at("training_loss");
    params.training_loss = RealMatrix::Zero(params.q_iters, params.n_users);
    for (Eigen::Index q = 0; q < params.training_loss.rows(); ++q) {
        for (Eigen::Index k = 0; k < params.training_loss.cols(); ++k) {
            params.training_loss(q, k) =
                loss.at(static_cast<std::size_t>(q)).at(static_cast<std::size_t>(k)).get<double>();
        }
    }
    return params;
}

}  // namespace risbo
