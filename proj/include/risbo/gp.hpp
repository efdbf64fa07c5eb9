#ifndef RISBO_GP_HPP
#define RISBO_GP_HPP

#include <vector>

#include <json.hpp>

#include "risbo/channel.hpp"
#include "risbo/linalg.hpp"
#include "risbo/rng.hpp"

namespace risbo {

/// (cos, sin) pairs of an arbitrary (not necessarily grid-aligned) angle
/// vector; matches PhaseConfig::embedding on grid points. Kernels on this
/// embedding respect the 2*pi wrap-around.
RealVector angle_embedding(const RealVector& angles_rad);

/// Squared-exponential kernel exp(-||a - b||^2 / (2 * lengthscale^2)).
double se_kernel(const RealVector& a, const RealVector& b, double lengthscale);

/// Observation pairs: configurations and the objective values g = -BER seen
/// at them, in visit order.
struct GpDataset {
    std::vector<PhaseConfig> configs;
    std::vector<double> observations;

    void add(const PhaseConfig& config, double value);
    std::size_t size() const { return configs.size(); }
    bool contains(const PhaseConfig& config) const;
};

nlohmann::json gp_dataset_to_json(const GpDataset& data);
GpDataset gp_dataset_from_json(const nlohmann::json& j);

struct PosteriorPrediction {
    double mean = 0.0;
    double variance = 0.0;  // clamped at 0
};

/// Zero-mean GP on standardized observations with a cached Cholesky factor of
/// K + (observation_noise + jitter) * I. Immutable after fit_gp; queries are
/// const and thread-safe.
class GpModel {
public:
    PosteriorPrediction posterior(const RealVector& query_embedding) const;
    PosteriorPrediction posterior(const PhaseConfig& query) const;

    const std::vector<PhaseConfig>& configs() const { return configs_; }
    Eigen::Index size() const { return embeddings_.cols(); }
    Eigen::Index elements() const { return embeddings_.rows() / 2; }
    int resolution_bits() const { return resolution_bits_; }
    double lengthscale() const { return lengthscale_; }
    double jitter_used() const { return jitter_used_; }
    double observation_mean() const { return observation_mean_; }
    double observation_scale() const { return observation_scale_; }

private:
    friend GpModel fit_gp(const GpDataset& data, double lengthscale, double jitter,
                          double observation_noise);

    GpModel(std::vector<PhaseConfig> configs, RealMatrix embeddings, CholeskyFactor chol,
            RealVector alpha, int bits, double lengthscale, double jitter_used, double mean,
            double scale);

    std::vector<PhaseConfig> configs_;
    RealMatrix embeddings_;  // 2P x n, one column per observation
    CholeskyFactor chol_;    // of K + (observation_noise + jitter) * I
    RealVector alpha_;       // (K + eps I)^{-1} standardized observations
    int resolution_bits_ = 0;
    double lengthscale_ = 1.0;
    double jitter_used_ = 0.0;
    double observation_mean_ = 0.0;
    double observation_scale_ = 1.0;
};

/// Standardizes the observations, builds the kernel matrix, and factorizes
/// K + (observation_noise + jitter) * I. If factorization fails, the jitter is
/// escalated by factors of 10 up to 1e-4 before giving up with a fit-failure
/// error. observation_noise is on the standardized scale.
GpModel fit_gp(const GpDataset& data, double lengthscale = 1.0, double jitter = 1e-10,
               double observation_noise = 1e-6);

/// Closed-form expected improvement for a maximization problem:
/// EI = delta * CDF(z) + sigma * PDF(z), z = delta / sigma, delta = mean -
/// best. At sigma = 0 this degenerates to max(delta, 0).
double expected_improvement(double mean, double variance, double best_observed);

/// EI of the model posterior at a query embedding.
double expected_improvement(const GpModel& model, const RealVector& query_embedding,
                            double best_observed);

/// Acquisition-search budget. Grids with at most exhaustive_limit points are
/// enumerated exactly; larger ones use random-restart coordinate search with
/// golden-section line steps over the continuous angles, quantized at the end.
struct AcquisitionSearch {
    int restarts = 8;
    int sweeps = 3;
    int section_steps = 24;
    std::uint64_t exhaustive_limit = 4096;
};

/// Returns the feasible configuration with the highest EI that is not already
/// in the model's observation set. Exhaustive mode scans the whole grid;
/// continuous mode keeps the best distinct restart result and falls back to
/// random unobserved configs if every restart collides. Throws an exhaustion
/// error only when the entire grid has been observed.
PhaseConfig propose_next(const GpModel& model, double best_observed,
                         const AcquisitionSearch& search, RngStream& rng);

}  // namespace risbo

#endif
