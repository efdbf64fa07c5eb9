#include "risbo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>

#include "risbo/errors.hpp"

namespace risbo {
namespace {

using std::numbers::pi;

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * pi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Golden-section maximization of f over [lo, hi] with a fixed step budget.
double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          int steps) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < steps; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

RealVector angle_embedding(const RealVector& angles_rad) {
    RealVector out(2 * angles_rad.size());
    for (Eigen::Index p = 0; p < angles_rad.size(); ++p) {
        out[2 * p] = std::cos(angles_rad[p]);
        out[2 * p + 1] = std::sin(angles_rad[p]);
    }
    return out;
}

double se_kernel(const RealVector& a, const RealVector& b, double lengthscale) {
    if (a.size() != b.size()) {
        throw ShapeError("se_kernel: vectors must have equal length");
    }
    if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
        throw InvalidParameterError("se_kernel: lengthscale must be finite and > 0");
    }
    return std::exp(-0.5 * (a - b).squaredNorm() / (lengthscale * lengthscale));
}

void GpDataset::add(const PhaseConfig& config, double value) {
    configs.push_back(config);
    observations.push_back(value);
}

bool GpDataset::contains(const PhaseConfig& config) const {
    return std::find(configs.begin(), configs.end(), config) != configs.end();
}

nlohmann::json gp_dataset_to_json(const GpDataset& data) {
    nlohmann::json configs = nlohmann::json::array();
    for (const PhaseConfig& c : data.configs) {
        configs.push_back(nlohmann::json{{"indices", c.grid_indices()},
                                         {"resolution_bits", c.resolution_bits()}});
    }
    return nlohmann::json{{"configs", std::move(configs)}, {"observations", data.observations}};
}

GpDataset gp_dataset_from_json(const nlohmann::json& j) {
    GpDataset data;
    for (const nlohmann::json& c : j.at("configs")) {
        data.configs.emplace_back(c.at("indices").get<std::vector<std::uint32_t>>(),
                                  c.at("resolution_bits").get<int>());
    }
    data.observations = j.at("observations").get<std::vector<double>>();
    if (data.configs.size() != data.observations.size()) {
        throw InvalidInputError("gp_dataset_from_json: configs/observations length mismatch");
    }
    return data;
}

GpModel::GpModel(std::vector<PhaseConfig> configs, RealMatrix embeddings, CholeskyFactor chol,
                 RealVector alpha, int bits, double lengthscale, double jitter_used, double mean,
                 double scale)
    : configs_(std::move(configs)),
      embeddings_(std::move(embeddings)),
      chol_(std::move(chol)),
      alpha_(std::move(alpha)),
      resolution_bits_(bits),
      lengthscale_(lengthscale),
      jitter_used_(jitter_used),
      observation_mean_(mean),
      observation_scale_(scale) {}

PosteriorPrediction GpModel::posterior(const RealVector& query_embedding) const {
    if (query_embedding.size() != embeddings_.rows()) {
        throw ShapeError("GpModel::posterior: query embedding has the wrong length");
    }
    const Eigen::Index n = embeddings_.cols();
    RealVector k_star(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k_star[i] = se_kernel(embeddings_.col(i), query_embedding, lengthscale_);
    }
    const double standardized_mean = k_star.dot(alpha_);
    const RealVector v = chol_.forward(k_star);
    const double standardized_var = std::max(0.0, 1.0 - v.squaredNorm());

    PosteriorPrediction out;
    out.mean = observation_mean_ + observation_scale_ * standardized_mean;
    out.variance = observation_scale_ * observation_scale_ * standardized_var;
    return out;
}

PosteriorPrediction GpModel::posterior(const PhaseConfig& query) const {
    return posterior(query.embedding());
}

GpModel fit_gp(const GpDataset& data, double lengthscale, double jitter,
               double observation_noise) {
    if (data.configs.empty()) {
        throw InvalidInputError("fit_gp: dataset is empty");
    }
    if (data.configs.size() != data.observations.size()) {
        throw InvalidInputError("fit_gp: configs/observations length mismatch");
    }
    if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
        throw InvalidParameterError("fit_gp: lengthscale must be finite and > 0");
    }
    if (jitter < 0.0 || observation_noise < 0.0) {
        throw InvalidParameterError("fit_gp: jitter and observation_noise must be >= 0");
    }

    const Eigen::Index n = static_cast<Eigen::Index>(data.configs.size());
    const Eigen::Index elements = data.configs.front().size();
    const int bits = data.configs.front().resolution_bits();
    RealMatrix embeddings(2 * elements, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const PhaseConfig& c = data.configs[static_cast<std::size_t>(i)];
        if (c.size() != elements || c.resolution_bits() != bits) {
            throw ShapeError("fit_gp: all configs must share one grid (P, b)");
        }
        embeddings.col(i) = c.embedding();
    }

    Eigen::Map<const RealVector> g(data.observations.data(), n);
    if (!g.allFinite()) {
        throw InvalidInputError("fit_gp: observations must be finite");
    }
    const double mean = g.mean();
    double scale = std::sqrt((g.array() - mean).square().sum() / static_cast<double>(n));
    if (scale < 1e-12) {
        scale = 1.0;  // constant observations: keep standardization invertible
    }
    const RealVector standardized = (g.array() - mean) / scale;

    RealMatrix kernel(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        kernel(i, i) = 1.0 + observation_noise;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double k = se_kernel(embeddings.col(i), embeddings.col(j), lengthscale);
            kernel(i, j) = k;
            kernel(j, i) = k;
        }
    }

    double tried = jitter;
    while (true) {
        try {
            CholeskyFactor chol(kernel + tried * RealMatrix::Identity(n, n));
            RealVector alpha = chol.solve(standardized);
            return GpModel(data.configs, std::move(embeddings), std::move(chol),
                           std::move(alpha), bits, lengthscale, tried, mean, scale);
        } catch (const DecompositionError&) {
            const double next = tried == 0.0 ? 1e-12 : tried * 10.0;
            if (next > 1e-4) {
                throw FitFailureError(
                    "fit_gp: kernel matrix not positive-definite even with jitter 1e-4");
            }
            tried = next;
        }
    }
}

double expected_improvement(double mean, double variance, double best_observed) {
    if (variance < 0.0 || !std::isfinite(mean) || !std::isfinite(variance)) {
        throw InvalidParameterError("expected_improvement: need finite mean and variance >= 0");
    }
    const double delta = mean - best_observed;
    const double sigma = std::sqrt(variance);
    if (sigma <= 0.0) {
        return std::max(delta, 0.0);
    }
    const double z = delta / sigma;
    return std::max(0.0, delta * normal_cdf(z) + sigma * normal_pdf(z));
}

double expected_improvement(const GpModel& model, const RealVector& query_embedding,
                            double best_observed) {
    const PosteriorPrediction p = model.posterior(query_embedding);
    return expected_improvement(p.mean, p.variance, best_observed);
}

namespace {

/// Grid size 2^(bits * elements), saturating at 2^63 - 1 for huge grids.
std::uint64_t grid_size(Eigen::Index elements, int bits) {
    const auto total_bits = static_cast<std::uint64_t>(elements) * static_cast<std::uint64_t>(bits);
    if (total_bits >= 63) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return std::uint64_t{1} << total_bits;
}

PhaseConfig config_from_code(std::uint64_t code, Eigen::Index elements, int bits) {
    const std::uint64_t levels = std::uint64_t{1} << bits;
    std::vector<std::uint32_t> idx(static_cast<std::size_t>(elements));
    for (auto& m : idx) {
        m = static_cast<std::uint32_t>(code % levels);
        code /= levels;
    }
    return PhaseConfig(std::move(idx), bits);
}

PhaseConfig propose_exhaustive(const GpModel& model, double best_observed, std::uint64_t total) {
    double best_ei = 0.0;
    PhaseConfig best;
    bool found = false;
    for (std::uint64_t code = 0; code < total; ++code) {
        PhaseConfig cand = config_from_code(code, model.elements(), model.resolution_bits());
        if (std::find(model.configs().begin(), model.configs().end(), cand) !=
            model.configs().end()) {
            continue;
        }
        const double ei = expected_improvement(model, cand.embedding(), best_observed);
        if (!found || ei > best_ei) {
            best_ei = ei;
            best = std::move(cand);
            found = true;
        }
    }
    if (!found) {
        throw ExhaustionError("propose_next: every configuration on the grid has been observed");
    }
    return best;
}

PhaseConfig propose_continuous(const GpModel& model, double best_observed,
                               const AcquisitionSearch& search, RngStream& rng) {
    const Eigen::Index elements = model.elements();
    const int bits = model.resolution_bits();

    double best_ei = 0.0;
    PhaseConfig best;
    bool found = false;
    for (int r = 0; r < search.restarts; ++r) {
        RealVector angles(elements);
        for (Eigen::Index p = 0; p < elements; ++p) {
            angles[p] = 2.0 * pi * rng.uniform();
        }
        for (int sweep = 0; sweep < search.sweeps; ++sweep) {
            for (Eigen::Index p = 0; p < elements; ++p) {
                angles[p] = golden_section_max(
                    [&](double theta) {
                        angles[p] = theta;
                        return expected_improvement(model, angle_embedding(angles),
                                                    best_observed);
                    },
                    0.0, 2.0 * pi, search.section_steps);
            }
        }
        PhaseConfig cand = quantize_phases(angles, bits);
        if (std::find(model.configs().begin(), model.configs().end(), cand) !=
            model.configs().end()) {
            continue;
        }
        const double ei = expected_improvement(model, cand.embedding(), best_observed);
        if (!found || ei > best_ei) {
            best_ei = ei;
            best = std::move(cand);
            found = true;
        }
    }
    if (found) {
        return best;
    }

    // Every restart collided with an observed config; on a grid this large a
    // few random draws find an unobserved one with overwhelming probability.
    for (int attempt = 0; attempt < 4096; ++attempt) {
        PhaseConfig cand = PhaseConfig::random(rng, elements, bits);
        if (std::find(model.configs().begin(), model.configs().end(), cand) ==
            model.configs().end()) {
            return cand;
        }
    }
    throw ExhaustionError("propose_next: random fallback found no unobserved configuration");
}

}  // namespace

PhaseConfig propose_next(const GpModel& model, double best_observed,
                         const AcquisitionSearch& search, RngStream& rng) {
    if (search.restarts < 1 || search.sweeps < 1 || search.section_steps < 1) {
        throw InvalidParameterError("propose_next: search budget fields must be >= 1");
    }
    const std::uint64_t total = grid_size(model.elements(), model.resolution_bits());
    if (total <= search.exhaustive_limit) {
        return propose_exhaustive(model, best_observed, total);
    }
    return propose_continuous(model, best_observed, search, rng);
}

}  // namespace risbo
