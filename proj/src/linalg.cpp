#include "risbo/linalg.hpp"

#include <cmath>
#include <string>

#include "risbo/errors.hpp"

namespace risbo {

ComplexMatrix sample_complex_gaussian(RngStream& rng, Eigen::Index rows, Eigen::Index cols,
                                      double variance) {
    if (rows < 1 || cols < 1) {
        throw InvalidParameterError("sample_complex_gaussian: rows and cols must be >= 1");
    }
    if (!std::isfinite(variance) || variance < 0.0) {
        throw InvalidParameterError("sample_complex_gaussian: variance must be finite and >= 0");
    }
    ComplexMatrix m(rows, cols);
    // Column-major fill order is part of the determinism contract.
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            m(i, j) = rng.complex_normal(variance);
        }
    }
    return m;
}

RealMatrix real_equivalent(const ComplexMatrix& m) {
    const Eigen::Index r = m.rows();
    const Eigen::Index c = m.cols();
    RealMatrix out(2 * r, 2 * c);
    out.topLeftCorner(r, c) = m.real();
    out.topRightCorner(r, c) = -m.imag();
    out.bottomLeftCorner(r, c) = m.imag();
    out.bottomRightCorner(r, c) = m.real();
    return out;
}

RealVector stack_real(const ComplexVector& v) {
    RealVector out(2 * v.size());
    out.head(v.size()) = v.real();
    out.tail(v.size()) = v.imag();
    return out;
}

ComplexVector unstack_real(const RealVector& v) {
    if (v.size() % 2 != 0) {
        throw ShapeError("unstack_real: length must be even");
    }
    const Eigen::Index n = v.size() / 2;
    ComplexVector out(n);
    out.real() = v.head(n);
    out.imag() = v.tail(n);
    return out;
}

CholeskyFactor::CholeskyFactor(const RealMatrix& a) {
    if (a.rows() != a.cols()) {
        throw ShapeError("CholeskyFactor: matrix must be square");
    }
    const Eigen::Index n = a.rows();
    RealMatrix l = RealMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = a(j, j) - l.row(j).head(j).squaredNorm();
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw DecompositionError(
                "cholesky: matrix is not positive-definite at pivot " + std::to_string(j), j);
        }
        l(j, j) = std::sqrt(d);
        if (j + 1 < n) {
            l.col(j).tail(n - j - 1) =
                (a.col(j).tail(n - j - 1) -
                 l.bottomLeftCorner(n - j - 1, j) * l.row(j).head(j).transpose()) /
                l(j, j);
        }
    }
    lower_ = std::move(l);
}

RealMatrix CholeskyFactor::solve(const RealMatrix& rhs) const {
    if (rhs.rows() != lower_.rows()) {
        throw ShapeError("CholeskyFactor::solve: rhs rows must match matrix size");
    }
    RealMatrix y = lower_.triangularView<Eigen::Lower>().solve(rhs);
    return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

RealVector CholeskyFactor::solve(const RealVector& rhs) const {
    return solve(RealMatrix(rhs)).col(0);
}

RealVector CholeskyFactor::forward(const RealVector& rhs) const {
    if (rhs.size() != lower_.rows()) {
        throw ShapeError("CholeskyFactor::forward: rhs length must match matrix size");
    }
    return lower_.triangularView<Eigen::Lower>().solve(rhs);
}

RealMatrix cholesky_solve(const RealMatrix& a, const RealMatrix& rhs) {
    return CholeskyFactor(a).solve(rhs);
}

}  // namespace risbo
