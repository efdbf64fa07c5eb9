#ifndef RISBO_MODEM_HPP
#define RISBO_MODEM_HPP

#include <complex>
#include <string>
#include <vector>

#include "risbo/linalg.hpp"
#include "risbo/rng.hpp"

namespace risbo {

enum class ModulationKind { bpsk, qpsk };

std::string to_string(ModulationKind kind);
ModulationKind modulation_from_string(const std::string& name);

/// Symbol alphabet with Gray bit labeling. Point index equals the packed bit
/// word, so for QPSK index 2*b0 + b1 maps to (1 - 2*b0) + j*(1 - 2*b1);
/// geometric nearest neighbors always differ in exactly one bit.
class Constellation {
public:
    static const Constellation& bpsk();
    static const Constellation& qpsk();
    static const Constellation& get(ModulationKind kind);

    ModulationKind kind() const { return kind_; }
    int order() const { return static_cast<int>(points_.size()); }
    int bits_per_symbol() const { return bits_per_symbol_; }
    const std::vector<std::complex<double>>& points() const { return points_; }
    std::complex<double> point(int index) const { return points_.at(static_cast<std::size_t>(index)); }

    /// Bit at position pos (0 = most significant) of a point's label.
    int bit(int index, int pos) const;

private:
    Constellation(ModulationKind kind, std::vector<std::complex<double>> points, int bits);

    ModulationKind kind_;
    std::vector<std::complex<double>> points_;
    int bits_per_symbol_;
};

/// K x T symbols drawn i.i.d. uniform, plus the underlying bit matrix
/// ((K * bits_per_symbol) x T; user k owns rows [k*bps, (k+1)*bps)).
struct SymbolBlock {
    ComplexMatrix symbols;
    IntMatrix bits;
};

SymbolBlock random_symbols(RngStream& rng, const Constellation& c, Eigen::Index users,
                           Eigen::Index samples);

/// A K-user QPSK problem rewritten as a 2K-user real BPSK problem: symbols and
/// received vectors stacked [Re; Im], the channel in block real form, and the
/// noise variance halved per real dimension.
struct RealSystem {
    RealMatrix channel;   // 2N x 2K (or 2N x K for BPSK inputs)
    RealMatrix symbols;   // users x T, entries in {-1, +1}
    IntMatrix bits;       // users x T, bit = (1 - symbol) / 2
    RealMatrix received;  // 2N x T
    double sigma2 = 0.0;  // per real dimension
};

/// Throws InvalidStateError unless c is QPSK; BPSK problems are already real.
RealSystem to_real_system(const ComplexMatrix& h_eff, const SymbolBlock& block,
                          const ComplexMatrix& received, double sigma2, const Constellation& c);

/// Real view of a K-user BPSK problem over a complex channel: 2N observation
/// rows, K real users.
RealSystem real_view_bpsk(const ComplexMatrix& h_eff, const SymbolBlock& block,
                          const ComplexMatrix& received, double sigma2);

/// [Re(s); Im(s)], the 2K x T real-symbol matrix of a K x T complex block.
RealMatrix to_real_symbols(const ComplexMatrix& s);

/// Re-pairs rows (k, K+k) of a 2K x T real matrix into K x T complex symbols.
ComplexMatrix from_real_symbols(const RealMatrix& s_real);

/// Reorders a QPSK bit matrix (2 rows per user) into real-system layout: row k
/// holds the in-phase bit of complex user k, row K+k the quadrature bit.
IntMatrix to_real_bits(const IntMatrix& qpsk_bits);

struct BitErrorCount {
    long long errors = 0;
    long long total = 0;
    double ber = 0.0;
};

BitErrorCount count_bit_errors(const IntMatrix& truth, const IntMatrix& decided);

}  // namespace risbo

#endif
