#include "risbo/modem.hpp"

#include "risbo/errors.hpp"

namespace risbo {

std::string to_string(ModulationKind kind) {
    return kind == ModulationKind::bpsk ? "bpsk" : "qpsk";
}

ModulationKind modulation_from_string(const std::string& name) {
    if (name == "bpsk") {
        return ModulationKind::bpsk;
    }
    if (name == "qpsk") {
        return ModulationKind::qpsk;
    }
    throw InvalidParameterError("unknown modulation: " + name);
}

Constellation::Constellation(ModulationKind kind, std::vector<std::complex<double>> points,
                             int bits)
    : kind_(kind), points_(std::move(points)), bits_per_symbol_(bits) {}

const Constellation& Constellation::bpsk() {
    static const Constellation c(ModulationKind::bpsk, {{1.0, 0.0}, {-1.0, 0.0}}, 1);
    return c;
}

const Constellation& Constellation::qpsk() {
    static const Constellation c(ModulationKind::qpsk,
                                 {{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}}, 2);
    return c;
}

const Constellation& Constellation::get(ModulationKind kind) {
    return kind == ModulationKind::bpsk ? bpsk() : qpsk();
}

int Constellation::bit(int index, int pos) const {
    if (index < 0 || index >= order() || pos < 0 || pos >= bits_per_symbol_) {
        throw InvalidParameterError("Constellation::bit: index or position out of range");
    }
    return (index >> (bits_per_symbol_ - 1 - pos)) & 1;
}

SymbolBlock random_symbols(RngStream& rng, const Constellation& c, Eigen::Index users,
                           Eigen::Index samples) {
    if (users < 1 || samples < 1) {
        throw InvalidParameterError("random_symbols: users and samples must be >= 1");
    }
    const int bps = c.bits_per_symbol();
    SymbolBlock block;
    block.symbols.resize(users, samples);
    block.bits.resize(users * bps, samples);
    for (Eigen::Index t = 0; t < samples; ++t) {
        for (Eigen::Index k = 0; k < users; ++k) {
            const int idx = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.order())));
            block.symbols(k, t) = c.point(idx);
            for (int b = 0; b < bps; ++b) {
                block.bits(k * bps + b, t) = c.bit(idx, b);
            }
        }
    }
    return block;
}

RealMatrix to_real_symbols(const ComplexMatrix& s) {
    RealMatrix out(2 * s.rows(), s.cols());
    out.topRows(s.rows()) = s.real();
    out.bottomRows(s.rows()) = s.imag();
    return out;
}

ComplexMatrix from_real_symbols(const RealMatrix& s_real) {
    if (s_real.rows() % 2 != 0) {
        throw ShapeError("from_real_symbols: row count must be even");
    }
    const Eigen::Index k = s_real.rows() / 2;
    ComplexMatrix out(k, s_real.cols());
    out.real() = s_real.topRows(k);
    out.imag() = s_real.bottomRows(k);
    return out;
}

IntMatrix to_real_bits(const IntMatrix& qpsk_bits) {
    if (qpsk_bits.rows() % 2 != 0) {
        throw ShapeError("to_real_bits: expected two bit rows per user");
    }
    const Eigen::Index k = qpsk_bits.rows() / 2;
    IntMatrix out(qpsk_bits.rows(), qpsk_bits.cols());
    for (Eigen::Index u = 0; u < k; ++u) {
        out.row(u) = qpsk_bits.row(2 * u);          // in-phase bit
        out.row(k + u) = qpsk_bits.row(2 * u + 1);  // quadrature bit
    }
    return out;
}

RealSystem to_real_system(const ComplexMatrix& h_eff, const SymbolBlock& block,
                          const ComplexMatrix& received, double sigma2,
                          const Constellation& c) {
    if (c.kind() != ModulationKind::qpsk) {
        throw InvalidStateError("to_real_system: input must be a QPSK problem");
    }
    if (block.symbols.cols() != received.cols()) {
        throw ShapeError("to_real_system: symbol and received sample counts differ");
    }
    RealSystem sys;
    sys.channel = real_equivalent(h_eff);
    sys.symbols = to_real_symbols(block.symbols);
    sys.bits = to_real_bits(block.bits);
    sys.received = to_real_symbols(received);
    sys.sigma2 = sigma2 / 2.0;
    return sys;
}

RealSystem real_view_bpsk(const ComplexMatrix& h_eff, const SymbolBlock& block,
                          const ComplexMatrix& received, double sigma2) {
    RealSystem sys;
    const RealMatrix full = real_equivalent(h_eff);
    sys.channel = full.leftCols(h_eff.cols());  // imaginary symbol parts are zero
    sys.symbols = block.symbols.real();
    sys.bits = block.bits;
    sys.received = to_real_symbols(received);
    sys.sigma2 = sigma2 / 2.0;
    return sys;
}

BitErrorCount count_bit_errors(const IntMatrix& truth, const IntMatrix& decided) {
    if (truth.rows() != decided.rows() || truth.cols() != decided.cols()) {
        throw ShapeError("count_bit_errors: bit matrices must have equal shapes");
    }
    BitErrorCount out;
    out.total = static_cast<long long>(truth.size());
    if (out.total == 0) {
        throw ShapeError("count_bit_errors: empty bit matrices");
    }
    out.errors = (truth.array() != decided.array()).count();
    out.ber = static_cast<double>(out.errors) / static_cast<double>(out.total);
    return out;
}

}  // namespace risbo
