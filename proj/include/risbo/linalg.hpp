#ifndef RISBO_LINALG_HPP
#define RISBO_LINALG_HPP

#include <Eigen/Dense>
#include <complex>

#include "risbo/rng.hpp"

namespace risbo {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;

/// rows x cols matrix of i.i.d. circularly-symmetric complex Gaussians with
/// E|entry|^2 = variance (real and imaginary parts each N(0, variance/2)).
ComplexMatrix sample_complex_gaussian(RngStream& rng, Eigen::Index rows, Eigen::Index cols,
                                      double variance);

/// Real block embedding [[Re(M), -Im(M)], [Im(M), Re(M)]]. For any complex x,
/// real_equivalent(M) * stack_real(x) == stack_real(M * x).
RealMatrix real_equivalent(const ComplexMatrix& m);

/// [Re(v); Im(v)] stacked into a real vector of twice the length.
RealVector stack_real(const ComplexVector& v);

/// Inverse of stack_real; input length must be even.
ComplexVector unstack_real(const RealVector& v);

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
/// Throws DecompositionError naming the failing pivot if the matrix is not
/// positive-definite.
class CholeskyFactor {
public:
    explicit CholeskyFactor(const RealMatrix& a);

    RealMatrix solve(const RealMatrix& rhs) const;
    RealVector solve(const RealVector& rhs) const;

    /// Forward substitution only: solves lower * y = rhs.
    RealVector forward(const RealVector& rhs) const;

    const RealMatrix& lower() const { return lower_; }
    Eigen::Index size() const { return lower_.rows(); }

private:
    RealMatrix lower_;
};

/// Solves a * x = rhs for symmetric positive-definite a.
RealMatrix cholesky_solve(const RealMatrix& a, const RealMatrix& rhs);

}  // namespace risbo

#endif
