#include "risbo/channel.hpp"

#include <cmath>
#include <numbers>

#include "risbo/errors.hpp"

namespace risbo {

using std::numbers::pi;

PhaseConfig::PhaseConfig(std::vector<std::uint32_t> grid_indices, int resolution_bits)
    : indices_(std::move(grid_indices)), bits_(resolution_bits) {
    if (bits_ < 1 || bits_ > 30) {
        throw InvalidParameterError("PhaseConfig: resolution_bits must be in [1, 30]");
    }
    if (indices_.empty()) {
        throw InvalidParameterError("PhaseConfig: needs at least one element");
    }
    for (std::uint32_t m : indices_) {
        if (m >= levels()) {
            throw InvalidParameterError("PhaseConfig: grid index out of range");
        }
    }
}

PhaseConfig PhaseConfig::random(RngStream& rng, Eigen::Index elements, int resolution_bits) {
    if (elements < 1) {
        throw InvalidParameterError("PhaseConfig::random: elements must be >= 1");
    }
    if (resolution_bits < 1) {
        throw InvalidParameterError("PhaseConfig::random: resolution_bits must be >= 1");
    }
    std::vector<std::uint32_t> idx(static_cast<std::size_t>(elements));
    const std::uint64_t levels = 1ull << resolution_bits;
    for (auto& m : idx) {
        m = static_cast<std::uint32_t>(rng.below(levels));
    }
    return PhaseConfig(std::move(idx), resolution_bits);
}

RealVector PhaseConfig::angles() const {
    const double step = 2.0 * pi / static_cast<double>(levels());
    RealVector a(size());
    for (Eigen::Index p = 0; p < size(); ++p) {
        a[p] = step * static_cast<double>(indices_[static_cast<std::size_t>(p)]);
    }
    return a;
}

ComplexVector PhaseConfig::phases() const {
    const RealVector a = angles();
    ComplexVector out(size());
    for (Eigen::Index p = 0; p < size(); ++p) {
        out[p] = std::polar(1.0, a[p]);
    }
    return out;
}

RealVector PhaseConfig::embedding() const {
    const RealVector a = angles();
    RealVector out(2 * size());
    for (Eigen::Index p = 0; p < size(); ++p) {
        out[2 * p] = std::cos(a[p]);
        out[2 * p + 1] = std::sin(a[p]);
    }
    return out;
}

PhaseConfig quantize_phases(const RealVector& angles_rad, int resolution_bits) {
    if (resolution_bits < 1) {
        throw InvalidParameterError("quantize_phases: resolution_bits must be >= 1");
    }
    if (angles_rad.size() < 1) {
        throw InvalidParameterError("quantize_phases: needs at least one angle");
    }
    const std::uint32_t levels = 1u << resolution_bits;
    const double step = 2.0 * pi / static_cast<double>(levels);
    std::vector<std::uint32_t> idx(static_cast<std::size_t>(angles_rad.size()));
    for (Eigen::Index p = 0; p < angles_rad.size(); ++p) {
        double a = std::fmod(angles_rad[p], 2.0 * pi);
        if (a < 0.0) {
            a += 2.0 * pi;
        }
        const double u = a / step;
        double lower = std::floor(u);
        if (lower >= static_cast<double>(levels)) {
            lower = static_cast<double>(levels) - 1.0;  // guard fmod rounding at 2*pi
        }
        const double frac = u - lower;
        std::uint32_t m = static_cast<std::uint32_t>(lower);
        if (frac > 0.5) {
            m = (m + 1) % levels;
        } else if (frac == 0.5) {
            // Equidistant: the smaller of the two neighboring grid indices,
            // which is 0 when the tie straddles the 2*pi wrap.
            m = std::min(m, (m + 1) % levels);
        }
        idx[static_cast<std::size_t>(p)] = m;
    }
    return PhaseConfig(std::move(idx), resolution_bits);
}

ChannelRealization draw_channel(RngStream& rng, Eigen::Index rx_antennas, Eigen::Index users,
                                Eigen::Index ris_elements, double kappa, double beta,
                                double gamma) {
    if (rx_antennas < 1 || users < 1 || ris_elements < 1) {
        throw InvalidParameterError("draw_channel: all dimensions must be >= 1");
    }
    if (!std::isfinite(kappa) || kappa < 0.0) {
        throw InvalidParameterError("draw_channel: kappa must be finite and >= 0");
    }
    ChannelRealization ch;
    ch.gamma = gamma;
    ch.beta = beta;
    ch.kappa = kappa;
    ch.h1 = gamma * sample_complex_gaussian(rng, ris_elements, users, 1.0);
    ch.g = gamma * sample_complex_gaussian(rng, rx_antennas, users, 1.0);
    const ComplexMatrix los = sample_complex_gaussian(rng, rx_antennas, ris_elements, 1.0);
    const ComplexMatrix nlos = sample_complex_gaussian(rng, rx_antennas, ris_elements, 1.0);
    ch.h2 = beta * (std::sqrt(kappa / (1.0 + kappa)) * los +
                    std::sqrt(1.0 / (1.0 + kappa)) * nlos);
    return ch;
}

ComplexMatrix effective_matrix(const ChannelRealization& ch, const PhaseConfig& phi) {
    if (phi.size() != ch.ris_elements()) {
        throw ShapeError("effective_matrix: phase vector length must equal RIS element count");
    }
    if (ch.h2.cols() != ch.h1.rows() || ch.h2.rows() != ch.g.rows() ||
        ch.h1.cols() != ch.g.cols()) {
        throw ShapeError("effective_matrix: channel matrix dimensions are inconsistent");
    }
    return ch.h2 * phi.phases().asDiagonal() * ch.h1 + ch.g;
}

NoiseModel NoiseModel::from_snr_db(double snr_db) {
    return NoiseModel{std::pow(10.0, -snr_db / 10.0)};
}

double NoiseModel::snr_db() const { return -10.0 * std::log10(sigma2); }

ComplexMatrix transmit(const ChannelRealization& ch, const PhaseConfig& phi,
                       const ComplexMatrix& symbols, const NoiseModel& noise, RngStream& rng) {
    if (symbols.rows() != ch.users()) {
        throw ShapeError("transmit: symbol rows must equal user count");
    }
    if (!std::isfinite(noise.sigma2) || noise.sigma2 < 0.0) {
        throw InvalidParameterError("transmit: sigma2 must be finite and >= 0");
    }
    ComplexMatrix y = effective_matrix(ch, phi) * symbols;
    if (noise.sigma2 > 0.0) {
        y += sample_complex_gaussian(rng, y.rows(), y.cols(), noise.sigma2);
    }
    return y;
}

namespace {

nlohmann::json complex_matrix_to_json(const ComplexMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix complex_matrix_from_json(const nlohmann::json& j) {
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) {
        return ComplexMatrix(0, 0);
    }
    const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& pair = j.at(i).at(c);
            m(i, c) = {pair.at(0).get<double>(), pair.at(1).get<double>()};
        }
    }
    return m;
}

}  // namespace

void to_json(nlohmann::json& j, const ChannelRealization& ch) {
    j = nlohmann::json{{"h1", complex_matrix_to_json(ch.h1)},
                       {"h2", complex_matrix_to_json(ch.h2)},
                       {"g", complex_matrix_to_json(ch.g)},
                       {"gamma", ch.gamma},
                       {"beta", ch.beta},
                       {"kappa", ch.kappa}};
}

void from_json(const nlohmann::json& j, ChannelRealization& ch) {
    ch.h1 = complex_matrix_from_json(j.at("h1"));
    ch.h2 = complex_matrix_from_json(j.at("h2"));
    ch.g = complex_matrix_from_json(j.at("g"));
    ch.gamma = j.at("gamma").get<double>();
    ch.beta = j.at("beta").get<double>();
    ch.kappa = j.at("kappa").get<double>();
}

}  // namespace risbo
