#include "risbo/eval.hpp"

#include <cmath>

#include "risbo/errors.hpp"

namespace risbo {
namespace {

/// M^K, or 0 when it exceeds the exhaustive bound.
Eigen::Index hypothesis_count(int order, Eigen::Index users) {
    constexpr Eigen::Index bound = 4096;
    Eigen::Index total = 1;
    for (Eigen::Index k = 0; k < users; ++k) {
        if (total > bound / order) {
            return 0;
        }
        total *= order;
    }
    return total;
}

/// One column per hypothesis: H_eff * s for every s in S^K, where the code's
/// most significant digit is user 0, so ascending code order enumerates
/// symbol-index vectors in lexicographic order.
struct HypothesisTable {
    ComplexMatrix products;  // N x M^K
    IntMatrix indices;       // K x M^K constellation indices
};

HypothesisTable build_hypotheses(const ComplexMatrix& h_eff, const Constellation& c,
                                 Eigen::Index total) {
    const Eigen::Index users = h_eff.cols();
    const int order = c.order();
    HypothesisTable table;
    table.indices.resize(users, total);
    ComplexMatrix symbols(users, total);
    for (Eigen::Index code = 0; code < total; ++code) {
        Eigen::Index rest = code;
        for (Eigen::Index k = users - 1; k >= 0; --k) {
            const int idx = static_cast<int>(rest % order);
            rest /= order;
            table.indices(k, code) = idx;
            symbols(k, code) = c.point(idx);
        }
    }
    table.products = h_eff * symbols;
    return table;
}

void check_map_inputs(const ChannelRealization& ch, const PhaseConfig& phi, double sigma2,
                      const Constellation& c) {
    if (!std::isfinite(sigma2) || sigma2 < 0.0) {
        throw InvalidParameterError("map_oracle_detect: sigma2 must be finite and >= 0");
    }
    if (hypothesis_count(c.order(), ch.users()) == 0) {
        throw InvalidParameterError(
            "map_oracle_detect: M^K exceeds the 4096-hypothesis exhaustive bound");
    }
    if (phi.size() != ch.ris_elements()) {
        throw ShapeError("map_oracle_detect: phase config length must equal the RIS size");
    }
}

}  // namespace

std::string to_string(DetectorTag tag) {
    switch (tag) {
        case DetectorTag::deepsic_fixed_ris:
            return "deepsic_fixed_ris";
        case DetectorTag::deepsic_opt_ris:
            return "deepsic_opt_ris";
        case DetectorTag::map_oracle:
            return "map_oracle";
        case DetectorTag::random_ris:
            return "random_ris";
    }
    throw InvalidParameterError("to_string: unknown detector tag");
}

Eigen::VectorXi map_oracle_detect(const ChannelRealization& ch, const PhaseConfig& phi,
                                  double sigma2, const Constellation& c,
                                  const ComplexVector& y) {
    return map_oracle_detect_block(ch, phi, sigma2, c, ComplexMatrix(y)).col(0);
}

IntMatrix map_oracle_detect_block(const ChannelRealization& ch, const PhaseConfig& phi,
                                  double sigma2, const Constellation& c,
                                  const ComplexMatrix& y_block) {
    check_map_inputs(ch, phi, sigma2, c);
    if (y_block.rows() != ch.rx_antennas()) {
        throw ShapeError("map_oracle_detect: received rows must equal the antenna count");
    }
    const Eigen::Index total = hypothesis_count(c.order(), ch.users());
    const HypothesisTable table = build_hypotheses(effective_matrix(ch, phi), c, total);

    IntMatrix decided(ch.users(), y_block.cols());
    for (Eigen::Index t = 0; t < y_block.cols(); ++t) {
        Eigen::Index best_code = 0;
        double best_dist = (y_block.col(t) - table.products.col(0)).squaredNorm();
        for (Eigen::Index code = 1; code < total; ++code) {
            const double dist = (y_block.col(t) - table.products.col(code)).squaredNorm();
            if (dist < best_dist) {  // strict: ties keep the lexicographically smaller code
                best_dist = dist;
                best_code = code;
            }
        }
        decided.col(t) = table.indices.col(best_code);
    }
    return decided;
}

double evaluate_map_ber(const ChannelRealization& ch, const PhaseConfig& phi,
                        const NoiseModel& noise, const Constellation& c, Eigen::Index n_symbols,
                        RngStream& rng) {
    if (n_symbols < 1) {
        throw InvalidParameterError("evaluate_map_ber: need at least one symbol vector");
    }
    const SymbolBlock block = random_symbols(rng, c, ch.users(), n_symbols);
    const ComplexMatrix received = transmit(ch, phi, block.symbols, noise, rng);
    const IntMatrix decided = map_oracle_detect_block(ch, phi, noise.sigma2, c, received);

    const int bps = c.bits_per_symbol();
    IntMatrix decided_bits(block.bits.rows(), block.bits.cols());
    for (Eigen::Index k = 0; k < decided.rows(); ++k) {
        for (Eigen::Index t = 0; t < decided.cols(); ++t) {
            for (int pos = 0; pos < bps; ++pos) {
                decided_bits(k * bps + pos, t) = c.bit(decided(k, t), pos);
            }
        }
    }
    return count_bit_errors(block.bits, decided_bits).ber;
}

std::vector<SweepRecord> snr_sweep(const ExperimentConfig& config, std::uint64_t seed,
                                   const SweepOptions& options) {
    config.validate();
    const StreamId root;
    RngStream channel_rng(seed, root.child("channel"));
    const ChannelRealization ch =
        draw_channel(channel_rng, config.dims.rx_antennas, config.dims.users,
                     config.dims.ris_elements, config.channel.kappa, config.channel.beta,
                     config.channel.gamma);

    // Same stream as the joint loop's phi_1, so the fixed-RIS curve is the
    // joint loop's starting point.
    RngStream phi_rng(seed, root.child("phi_init"));
    const PhaseConfig phi_init = PhaseConfig::random(phi_rng, config.dims.ris_elements,
                                                     config.dims.resolution_bits);

    PhaseConfig phi_opt_global = phi_init;
    if (options.include_optimized && options.optimize && !options.reoptimize_per_snr) {
        phi_opt_global = run_joint(config, ch, seed).best_config;
    }

    const Eigen::Index n_test_symbols = config.symbols_for_bits(config.eval.n_test_bits);
    const long long n_bits =
        static_cast<long long>(n_test_symbols) * config.bits_per_vector();
    const bool map_feasible =
        hypothesis_count(config.constellation().order(), config.dims.users) > 0;

    std::vector<SweepRecord> records;
    for (std::size_t i = 0; i < config.eval.snr_db.size(); ++i) {
        const double snr_db = config.eval.snr_db[i];
        const NoiseModel noise = NoiseModel::from_snr_db(snr_db);
        const StreamId sid = root.child("sweep", static_cast<std::uint64_t>(i));

        ExperimentConfig point = config;
        point.bo.snr_db = snr_db;

        RngStream pilot_rng(seed, sid.child("pilots"));
        const SymbolBlock pilots = random_symbols(pilot_rng, config.constellation(),
                                                  config.dims.users, config.training.n_pilots);

        // Both curves at this point share pilots, noise, training, and test
        // streams; only the RIS configuration differs.
        const StepResult fixed = alternating_step_receiver(point, ch, phi_init, pilots, seed, sid);
        RngStream test_rng(seed, sid.child("test"));
        const double fixed_ber = evaluate_ber(fixed.receiver, ch, phi_init, noise,
                                              config.constellation(), n_test_symbols, test_rng);
        records.push_back({snr_db, fixed_ber, DetectorTag::deepsic_fixed_ris, n_bits});

        if (options.include_optimized) {
            PhaseConfig phi_opt = phi_opt_global;
            if (options.optimize && options.reoptimize_per_snr) {
                phi_opt = run_joint(point, ch, seed).best_config;
            }
            const StepResult opt = alternating_step_receiver(point, ch, phi_opt, pilots, seed, sid);
            RngStream opt_test_rng(seed, sid.child("test"));
            const double opt_ber =
                evaluate_ber(opt.receiver, ch, phi_opt, noise, config.constellation(),
                             n_test_symbols, opt_test_rng);
            records.push_back({snr_db, opt_ber, DetectorTag::deepsic_opt_ris, n_bits});
        }

        if (options.include_map && map_feasible) {
            RngStream map_rng(seed, sid.child("map"));
            const double map_ber = evaluate_map_ber(ch, phi_init, noise, config.constellation(),
                                                    n_test_symbols, map_rng);
            records.push_back({snr_db, map_ber, DetectorTag::map_oracle, n_bits});
        }
    }
    return records;
}

std::vector<SweepRecord> experiment_fig4a(const ExperimentConfig& config, std::uint64_t seed,
                                          bool optimize) {
    SweepOptions options;
    options.include_optimized = true;
    options.optimize = optimize;
    options.reoptimize_per_snr = config.eval.reoptimize_per_snr;
    return snr_sweep(config, seed, options);
}

Fig4bResult experiment_fig4b(const ExperimentConfig& config, std::uint64_t seed) {
    Fig4bResult result;
    result.bo = run_joint(config, seed);
    result.random = run_random_baseline(config, seed);
    return result;
}

}  // namespace risbo
