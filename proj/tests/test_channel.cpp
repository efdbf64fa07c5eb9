#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "risbo/channel.hpp"
#include "risbo/errors.hpp"

using namespace risbo;
using std::numbers::pi;
using namespace std::complex_literals;

namespace {

ChannelRealization decoupled_identity(Eigen::Index n, Eigen::Index p) {
    ChannelRealization ch;
    ch.h1 = ComplexMatrix::Zero(p, n);
    ch.h2 = ComplexMatrix::Zero(n, p);
    ch.g = ComplexMatrix::Identity(n, n);
    return ch;
}

}  // namespace

TEST_CASE("quantize_phases on the 1-bit grid maps 0 to +1 and pi to -1") {
    RealVector angles(2);
    angles << 0.0, pi;
    const PhaseConfig q = quantize_phases(angles, 1);
    CHECK(std::abs(q.phases()[0] - 1.0) < 1e-15);
    CHECK(std::abs(q.phases()[1] - (-1.0)) < 1e-15);
}

TEST_CASE("quantize_phases on the 2-bit grid hits {1, j, -1, -j}") {
    RealVector angles(4);
    angles << 0.0, pi / 2.0, pi, 3.0 * pi / 2.0;
    const ComplexVector phases = quantize_phases(angles, 2).phases();
    CHECK(std::abs(phases[0] - 1.0) < 1e-15);
    CHECK(std::abs(phases[1] - 1.0i) < 1e-15);
    CHECK(std::abs(phases[2] - (-1.0)) < 1e-15);
    CHECK(std::abs(phases[3] - (-1.0i)) < 1e-15);
}

TEST_CASE("quantization snaps to the nearest grid point; exact ties go to the smaller index") {
    RealVector just_above(1);
    just_above << pi / 4.0 + 1e-9;  // midpoint between grid points 0 and pi/2
    CHECK(quantize_phases(just_above, 2).grid_indices()[0] == 1);

    RealVector just_below(1);
    just_below << pi / 4.0 - 1e-9;
    CHECK(quantize_phases(just_below, 2).grid_indices()[0] == 0);

    RealVector exact_tie(1);
    exact_tie << pi / 4.0;
    CHECK(quantize_phases(exact_tie, 2).grid_indices()[0] == 0);
}

TEST_CASE("quantization treats angles circularly") {
    RealVector angles(3);
    angles << 2.0 * pi - 1e-6, -0.1, 8.0;
    const PhaseConfig q = quantize_phases(angles, 2);
    CHECK(q.grid_indices()[0] == 0);  // just below 2*pi wraps back onto m = 0
    CHECK(q.grid_indices()[1] == 0);  // slightly negative also lands on m = 0
    CHECK(q.grid_indices()[2] == 1);  // 8 - 2*pi = 1.717, nearest multiple of pi/2 is pi/2
}

TEST_CASE("quantization is idempotent") {
    RngStream rng(3, StreamId().child("angles"));
    for (int trial = 0; trial < 50; ++trial) {
        RealVector angles(6);
        for (Eigen::Index p = 0; p < angles.size(); ++p) {
            angles[p] = 4.0 * pi * (rng.uniform() - 0.5);
        }
        const PhaseConfig once = quantize_phases(angles, 3);
        const PhaseConfig twice = quantize_phases(once.angles(), 3);
        CHECK(once == twice);
    }
}

TEST_CASE("quantize_phases rejects a non-positive bit width") {
    RealVector angles = RealVector::Zero(2);
    CHECK_THROWS_AS(quantize_phases(angles, 0), InvalidParameterError);
    CHECK_THROWS_AS(quantize_phases(RealVector(), 1), InvalidParameterError);
}

TEST_CASE("PhaseConfig entries are unit modulus and exactly on the grid") {
    RngStream rng(4, StreamId().child("phi"));
    const PhaseConfig phi = PhaseConfig::random(rng, 8, 2);
    const ComplexVector phases = phi.phases();
    for (Eigen::Index p = 0; p < phi.size(); ++p) {
        CHECK(std::abs(std::abs(phases[p]) - 1.0) < 1e-12);
        CHECK(phi.grid_indices()[p] < phi.levels());
    }
    // the embedding interleaves (cos, sin) per element
    const RealVector e = phi.embedding();
    REQUIRE(e.size() == 2 * phi.size());
    for (Eigen::Index p = 0; p < phi.size(); ++p) {
        CHECK(e[2 * p] == doctest::Approx(phases[p].real()).epsilon(1e-14));
        CHECK(e[2 * p + 1] == doctest::Approx(phases[p].imag()).epsilon(1e-14));
    }
}

TEST_CASE("draw_channel mixes LOS and NLOS components with the stated Rician weights") {
    const StreamId id = StreamId().child("ch");
    auto redraw = [&](double kappa) {
        RngStream rng(5, id);
        return draw_channel(rng, 3, 4, 5, kappa, 2.0, 1.0);
    };
    const ChannelRealization pure_nlos = redraw(0.0);          // h2 = beta * NLOS
    const ChannelRealization pure_los = redraw(1e12);          // h2 -> beta * LOS
    const ChannelRealization mixed = redraw(10.0);

    // kappa = 0 and kappa -> infinity isolate the two components
    const ComplexMatrix nlos = pure_nlos.h2 / 2.0;
    const ComplexMatrix los = pure_los.h2 / 2.0;
    const ComplexMatrix expected =
        2.0 * (std::sqrt(10.0 / 11.0) * los + std::sqrt(1.0 / 11.0) * nlos);
    CHECK((mixed.h2 - expected).norm() / expected.norm() < 1e-5);

    // identical streams, different kappa: the Rayleigh parts are untouched
    CHECK(pure_nlos.h1 == mixed.h1);
    CHECK(pure_nlos.g == mixed.g);
}

TEST_CASE("draw_channel matches the Rician second moment E|H2_ij|^2 = beta^2") {
    RngStream rng(6, StreamId().child("ch"));
    double sum = 0.0;
    long long n = 0;
    for (int draw = 0; draw < 800; ++draw) {
        const ChannelRealization ch = draw_channel(rng, 5, 5, 5, 10.0, 1.0, 1.0);
        sum += ch.h2.squaredNorm();
        n += ch.h2.size();
    }
    CHECK(sum / static_cast<double>(n) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("draw_channel applies gamma to the Rayleigh links") {
    RngStream a(7, StreamId().child("ch"));
    RngStream b(7, StreamId().child("ch"));
    const ChannelRealization base = draw_channel(a, 2, 2, 2, 1.0, 1.0, 1.0);
    const ChannelRealization scaled = draw_channel(b, 2, 2, 2, 1.0, 1.0, 3.0);
    CHECK((scaled.h1 - 3.0 * base.h1).norm() < 1e-14);
    CHECK((scaled.g - 3.0 * base.g).norm() < 1e-14);
}

TEST_CASE("draw_channel rejects invalid parameters") {
    RngStream rng(8, StreamId().child("ch"));
    CHECK_THROWS_AS(draw_channel(rng, 2, 2, 2, -1.0, 1.0, 1.0), InvalidParameterError);
    CHECK_THROWS_AS(draw_channel(rng, 0, 2, 2, 1.0, 1.0, 1.0), InvalidParameterError);
    const double nan = std::nan("");
    CHECK_THROWS_AS(draw_channel(rng, 2, 2, 2, nan, 1.0, 1.0), InvalidParameterError);

    const ChannelRealization ch = decoupled_identity(2, 3);
    const PhaseConfig phi({0, 0, 0}, 1);
    CHECK_THROWS_AS(transmit(ch, phi, ComplexMatrix::Zero(2, 4), NoiseModel{-1.0}, rng),
                    InvalidParameterError);
}

TEST_CASE("effective_matrix reduces to G when the RIS path vanishes") {
    const ChannelRealization ch = decoupled_identity(3, 4);
    RngStream rng(9, StreamId().child("phi"));
    const PhaseConfig phi = PhaseConfig::random(rng, 4, 2);
    CHECK((effective_matrix(ch, phi) - ComplexMatrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("scalar channel with unit links combines constructively or destructively") {
    ChannelRealization ch;
    ch.h1 = ComplexMatrix::Ones(1, 1);
    ch.h2 = ComplexMatrix::Ones(1, 1);
    ch.g = ComplexMatrix::Ones(1, 1);
    const PhaseConfig aligned({0}, 1);    // phase +1
    const PhaseConfig opposed({1}, 1);    // phase -1
    CHECK(std::abs(effective_matrix(ch, aligned)(0, 0) - 2.0) < 1e-15);
    CHECK(std::abs(effective_matrix(ch, opposed)(0, 0)) < 1e-15);
}

TEST_CASE("effective_matrix rejects a phase vector of the wrong length") {
    const ChannelRealization ch = decoupled_identity(2, 3);
    const PhaseConfig wrong({0, 1}, 1);
    CHECK_THROWS_AS(effective_matrix(ch, wrong), ShapeError);
}

TEST_CASE("changing one phase entry perturbs the effective matrix by a rank-1 term") {
    RngStream rng(10, StreamId().child("ch"));
    const ChannelRealization ch = draw_channel(rng, 3, 4, 5, 10.0, 1.0, 1.0);
    const PhaseConfig phi({0, 1, 2, 3, 0}, 2);
    PhaseConfig phi2({0, 1, 2, 3, 2}, 2);  // entry 4 flipped from +1 to -1
    const Eigen::Index p = 4;
    const ComplexMatrix delta = effective_matrix(ch, phi2) - effective_matrix(ch, phi);
    const std::complex<double> coeff = phi2.phases()[p] - phi.phases()[p];
    const ComplexMatrix rank1 = ch.h2.col(p) * coeff * ch.h1.row(p);
    CHECK((delta - rank1).norm() < 1e-12);
}

TEST_CASE("transmit with no noise equals the effective linear map") {
    RngStream rng(11, StreamId().child("ch"));
    const ChannelRealization ch = draw_channel(rng, 3, 2, 4, 10.0, 1.0, 1.0);
    const PhaseConfig phi({0, 1, 2, 3}, 2);
    RngStream srng(11, StreamId().child("s"));
    const ComplexMatrix symbols = sample_complex_gaussian(srng, 2, 50, 2.0);
    RngStream nrng(11, StreamId().child("n"));
    const ComplexMatrix y = transmit(ch, phi, symbols, NoiseModel{0.0}, nrng);
    CHECK((y - effective_matrix(ch, phi) * symbols).norm() == 0.0);
}

TEST_CASE("transmit through an identity channel with zero noise returns the symbols") {
    const ChannelRealization ch = decoupled_identity(2, 3);
    const PhaseConfig phi({0, 0, 0}, 1);
    ComplexMatrix s(2, 3);
    s << 1.0 + 1.0i, -1.0 + 1.0i, 1.0 - 1.0i, -1.0 - 1.0i, 1.0 + 1.0i, -1.0 - 1.0i;
    RngStream rng(12, StreamId().child("n"));
    CHECK((transmit(ch, phi, s, NoiseModel{0.0}, rng) - s).norm() == 0.0);
}

TEST_CASE("transmit noise power matches sigma2 per antenna") {
    ChannelRealization ch = decoupled_identity(2, 1);
    ch.g = ComplexMatrix::Zero(2, 2);  // received vector is pure noise
    const PhaseConfig phi({0}, 1);
    const ComplexMatrix zeros = ComplexMatrix::Zero(2, 500000);
    RngStream rng(13, StreamId().child("n"));
    const ComplexMatrix y = transmit(ch, phi, zeros, NoiseModel{4.0}, rng);
    CHECK(y.squaredNorm() / static_cast<double>(y.size()) == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("transmit is bitwise reproducible under a fixed stream") {
    RngStream chrng(14, StreamId().child("ch"));
    const ChannelRealization ch = draw_channel(chrng, 2, 2, 2, 10.0, 1.0, 1.0);
    const PhaseConfig phi({1, 2}, 2);
    RngStream srng(14, StreamId().child("s"));
    const ComplexMatrix s = sample_complex_gaussian(srng, 2, 20, 2.0);
    RngStream n1(14, StreamId().child("n"));
    RngStream n2(14, StreamId().child("n"));
    const ComplexMatrix y1 = transmit(ch, phi, s, NoiseModel{0.5}, n1);
    const ComplexMatrix y2 = transmit(ch, phi, s, NoiseModel{0.5}, n2);
    CHECK(y1 == y2);
}

TEST_CASE("transmit rejects mismatched symbol dimensions") {
    const ChannelRealization ch = decoupled_identity(2, 3);
    const PhaseConfig phi({0, 0, 0}, 1);
    RngStream rng(15, StreamId().child("n"));
    CHECK_THROWS_AS(transmit(ch, phi, ComplexMatrix::Zero(3, 4), NoiseModel{0.0}, rng),
                    ShapeError);
}

TEST_CASE("NoiseModel converts SNR in dB to variance with SNR = 1/sigma2") {
    CHECK(NoiseModel::from_snr_db(0.0).sigma2 == doctest::Approx(1.0));
    CHECK(NoiseModel::from_snr_db(10.0).sigma2 == doctest::Approx(0.1));
    CHECK(NoiseModel::from_snr_db(-10.0).sigma2 == doctest::Approx(10.0));
    CHECK(NoiseModel{0.25}.snr_db() == doctest::Approx(10.0 * std::log10(4.0)));
}

TEST_CASE("ChannelRealization round-trips through JSON") {
    RngStream rng(16, StreamId().child("ch"));
    const ChannelRealization ch = draw_channel(rng, 3, 2, 4, 10.0, 0.5, 2.0);
    nlohmann::json j;
    to_json(j, ch);
    ChannelRealization back;
    from_json(j, back);
    CHECK(back.h1 == ch.h1);
    CHECK(back.h2 == ch.h2);
    CHECK(back.g == ch.g);
    CHECK(back.kappa == ch.kappa);
    CHECK(back.beta == ch.beta);
    CHECK(back.gamma == ch.gamma);
}
