#ifndef RISBO_CHANNEL_HPP
#define RISBO_CHANNEL_HPP

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "risbo/linalg.hpp"
#include "risbo/rng.hpp"

namespace risbo {

/// A b-bit quantized RIS reflection vector. Ground truth is the vector of
/// grid indices m_p; each element reflects with coefficient
/// exp(j * 2^{1-b} * pi * m_p), m_p in {0, ..., 2^b - 1}.
class PhaseConfig {
public:
    PhaseConfig() = default;
    PhaseConfig(std::vector<std::uint32_t> grid_indices, int resolution_bits);

    static PhaseConfig random(RngStream& rng, Eigen::Index elements, int resolution_bits);

    Eigen::Index size() const { return static_cast<Eigen::Index>(indices_.size()); }
    int resolution_bits() const { return bits_; }
    std::uint32_t levels() const { return 1u << bits_; }
    const std::vector<std::uint32_t>& grid_indices() const { return indices_; }

    /// Snapped angles 2^{1-b} * pi * m_p, in [0, 2*pi).
    RealVector angles() const;

    /// Unit-modulus reflection coefficients exp(j * angle_p).
    ComplexVector phases() const;

    /// (cos, sin) pairs flattened to a 2P real vector. Euclidean distance in
    /// this embedding equals the complex-vector distance ||phi_i - phi_j||, so
    /// kernels on it respect phase wrap-around.
    RealVector embedding() const;

    friend bool operator==(const PhaseConfig& a, const PhaseConfig& b) {
        return a.bits_ == b.bits_ && a.indices_ == b.indices_;
    }

private:
    std::vector<std::uint32_t> indices_;
    int bits_ = 0;
};

/// Snaps each angle to the nearest b-bit grid point; equidistant angles go to
/// the smaller grid index (circular distance, so 2*pi wraps back onto m = 0).
PhaseConfig quantize_phases(const RealVector& angles_rad, int resolution_bits);

/// One static draw of the three channel matrices. Held fixed for the lifetime
/// of an experiment: only the RIS phases change the effective channel.
struct ChannelRealization {
    ComplexMatrix h1;  // P x K, RIS <-> users (Rayleigh)
    ComplexMatrix h2;  // N x P, BS <-> RIS (Rician)
    ComplexMatrix g;   // N x K, direct BS <-> users (Rayleigh)
    double gamma = 1.0;
    double beta = 1.0;
    double kappa = 0.0;

    Eigen::Index rx_antennas() const { return g.rows(); }
    Eigen::Index users() const { return g.cols(); }
    Eigen::Index ris_elements() const { return h1.rows(); }
};

/// Draw order is pinned (h1, g, h2_los, h2_nlos) so a realization can be
/// reconstructed from the same stream.
ChannelRealization draw_channel(RngStream& rng, Eigen::Index rx_antennas, Eigen::Index users,
                                Eigen::Index ris_elements, double kappa, double beta,
                                double gamma);

/// H2 * diag(phi) * H1 + G, the noiseless linear channel for a given RIS state.
ComplexMatrix effective_matrix(const ChannelRealization& ch, const PhaseConfig& phi);

struct NoiseModel {
    double sigma2 = 0.0;  // per receive antenna; SNR = 1 / sigma2

    static NoiseModel from_snr_db(double snr_db);
    double snr_db() const;
};

/// y_t = effective_matrix(ch, phi) * s_t + n_t with n_t ~ CN(0, sigma2 * I),
/// independent across columns.
ComplexMatrix transmit(const ChannelRealization& ch, const PhaseConfig& phi,
                       const ComplexMatrix& symbols, const NoiseModel& noise, RngStream& rng);

void to_json(nlohmann::json& j, const ChannelRealization& ch);
void from_json(const nlohmann::json& j, ChannelRealization& ch);

}  // namespace risbo

#endif
