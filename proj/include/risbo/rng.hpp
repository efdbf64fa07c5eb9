#ifndef RISBO_RNG_HPP
#define RISBO_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace risbo {

/// Hierarchical label for a random substream. A single master seed fans out to
/// named substreams (channel, pilots, noise, init, ...) so that adding or
/// reordering consumers never perturbs the draws of another consumer.
class StreamId {
public:
    constexpr StreamId() = default;

    StreamId child(std::string_view name) const;
    StreamId child(std::string_view name, std::uint64_t index) const;
    StreamId child(std::string_view name, std::uint64_t i, std::uint64_t j) const;

    constexpr std::uint64_t value() const { return value_; }

    friend constexpr bool operator==(StreamId a, StreamId b) { return a.value_ == b.value_; }

private:
    explicit constexpr StreamId(std::uint64_t v) : value_(v) {}
    std::uint64_t value_ = 0;
};

/// Deterministic random stream: a pure function of (seed, stream id).
///
/// The engine is std::mt19937_64 (bit-exact across platforms); uniform and
/// normal variates are derived with explicit mappings instead of the
/// implementation-defined std distributions, so a (seed, id) pair always
/// yields the same draw sequence. Each stream is owned by exactly one logical
/// consumer and must not be shared across threads.
class RngStream {
public:
    RngStream(std::uint64_t seed, StreamId id);
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    RngStream(const RngStream&) = delete;
    RngStream& operator=(const RngStream&) = delete;
    RngStream(RngStream&&) = default;
    RngStream& operator=(RngStream&&) = default;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform();

    /// Uniform on (0, 1]; safe as a log() argument.
    double uniform_open();

    /// Standard normal via Box-Muller (second variate cached).
    double normal();

    /// Zero-mean circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance);

    /// Uniform integer in [0, bound); bound >= 1. Rejection sampling, unbiased.
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace risbo

#endif
