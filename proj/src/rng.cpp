#include "risbo/rng.hpp"

#include <cmath>
#include <numbers>

#include "risbo/errors.hpp"

namespace risbo {
namespace {

constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix64(std::uint64_t z) {
    z += kSplitMixGamma;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::uint64_t combine(std::uint64_t parent, std::uint64_t item) {
    return splitmix64(parent ^ splitmix64(item));
}

}  // namespace

StreamId StreamId::child(std::string_view name) const {
    return StreamId(combine(value_, fnv1a(name)));
}

StreamId StreamId::child(std::string_view name, std::uint64_t index) const {
    return StreamId(combine(combine(value_, fnv1a(name)), index));
}

StreamId StreamId::child(std::string_view name, std::uint64_t i, std::uint64_t j) const {
    return StreamId(combine(combine(combine(value_, fnv1a(name)), i), j));
}

RngStream::RngStream(std::uint64_t seed, StreamId id) : RngStream(seed, id.value()) {}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(combine(splitmix64(seed), stream_id)) {}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phase = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(phase);
    has_cached_normal_ = true;
    return r * std::cos(phase);
}

std::complex<double> RngStream::complex_normal(double variance) {
    if (!std::isfinite(variance) || variance < 0.0) {
        throw InvalidParameterError("complex_normal: variance must be finite and >= 0");
    }
    if (variance == 0.0) {
        return {0.0, 0.0};
    }
    const double scale = std::sqrt(variance / 2.0);
    const double re = normal();
    const double im = normal();
    return {scale * re, scale * im};
}

std::uint64_t RngStream::below(std::uint64_t bound) {
    if (bound == 0) {
        throw InvalidParameterError("below: bound must be >= 1");
    }
    // Reject draws from the incomplete top interval so the result is unbiased.
    const std::uint64_t threshold = (0ull - bound) % bound;
    for (;;) {
        const std::uint64_t u = next_u64();
        if (u >= threshold) {
            return u % bound;
        }
    }
}

}  // namespace risbo
