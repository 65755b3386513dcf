// linalg.hpp - dense complex kernel: normal spectral decomposition, SVD,
// Schatten norms, trace pairing, polar factors.
//
// Inner products are linear in the first argument and conjugate-linear in
// the second: <x, y> = sum_i x_i conj(y_i) = y.adjoint() * x.

#pragma once

#include "schurlab/error.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cmath>
#include <string>

namespace schurlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct Tolerances {
    double normality = 1e-10;
    double ortho = 1e-10;
    double recon = 1e-9;
};

/// Normal matrix together with a unitary eigenbasis: matrix = U diag(eigenvalues) U*.
///
/// Eigenvalues are listed with multiplicity, one per eigenbasis column. The
/// position of an eigenvalue is the index every symbol grid uses for it.
class NormalOperator {
public:
    NormalOperator() = default;

    /// Builds from known spectral data; the matrix is formed as U diag(λ) U*.
    /// Throws ShapeMismatch on inconsistent sizes and EigFailure when U is not unitary.
    static NormalOperator from_spectrum(const ComplexMatrix& eigenbasis,
                                        const ComplexVector& eigenvalues,
                                        const Tolerances& tol = {});

    /// Diagonal operator in the standard basis.
    static NormalOperator diagonal(const ComplexVector& eigenvalues);

    Eigen::Index dim() const { return eigenvalues_.size(); }
    const ComplexMatrix& matrix() const { return matrix_; }
    const ComplexVector& eigenvalues() const { return eigenvalues_; }
    const ComplexMatrix& eigenbasis() const { return eigenbasis_; }

    /// ‖U U* - I‖_2
    double orthogonality_residual() const;
    /// ‖U diag(λ) U* - M‖_2 / max(‖M‖_2, 1)
    double reconstruction_residual() const;

private:
    friend NormalOperator normal_eig(const ComplexMatrix&, double);
    NormalOperator(ComplexMatrix matrix, ComplexVector eigenvalues, ComplexMatrix eigenbasis)
        : matrix_(std::move(matrix)), eigenvalues_(std::move(eigenvalues)),
          eigenbasis_(std::move(eigenbasis)) {}

    ComplexMatrix matrix_;
    ComplexVector eigenvalues_;
    ComplexMatrix eigenbasis_;
};

struct SingularDecomposition {
    ComplexMatrix U;
    RealVector singular_values; // nonincreasing
    ComplexMatrix V;
};

/// ‖M M* - M* M‖_2 / ‖M‖_2^2 (0 for the zero matrix).
double normality_defect(const ComplexMatrix& m);

/// Spectral decomposition of a normal matrix.
///
/// Splits M = H + iK into commuting Hermitian parts, diagonalizes H, then
/// diagonalizes K inside each (numerically) degenerate eigenspace of H.
/// Throws NotSquare, NotNormal, or EigFailure.
NormalOperator normal_eig(const ComplexMatrix& m, double normality_tol = Tolerances{}.normality);

/// Thin SVD with nonincreasing singular values.
SingularDecomposition svd(const ComplexMatrix& m);

enum class SchattenP { One, Two, Four, Op };

template <typename Derived>
double schatten_norm(const Eigen::MatrixBase<Derived>& m, SchattenP p) {
    if (p == SchattenP::Two) {
        return m.norm();
    }
    if (m.size() == 0) {
        return 0.0;
    }
    const Eigen::JacobiSVD<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(m.eval());
    const auto& s = svd.singularValues();
    switch (p) {
    case SchattenP::One: return s.sum();
    case SchattenP::Four: return std::sqrt(std::sqrt(s.array().pow(4).sum()));
    case SchattenP::Op: return s(0);
    case SchattenP::Two: break;
    }
    return s.norm();
}

template <typename Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& m) {
    return schatten_norm(m, SchattenP::One);
}

template <typename Derived>
double hs_norm(const Eigen::MatrixBase<Derived>& m) {
    return m.norm();
}

template <typename Derived>
double op_norm(const Eigen::MatrixBase<Derived>& m) {
    return schatten_norm(m, SchattenP::Op);
}

/// tr(M N); M is p×q and N is q×p. Computed without forming the product.
template <typename DerivedM, typename DerivedN>
Complex trace_pairing(const Eigen::MatrixBase<DerivedM>& m, const Eigen::MatrixBase<DerivedN>& n) {
    if (m.rows() != n.cols() || m.cols() != n.rows()) {
        throw Error(ErrorCode::ShapeMismatch, "trace_pairing: M is " + std::to_string(m.rows()) + "x" +
                                                  std::to_string(m.cols()) + ", N is " +
                                                  std::to_string(n.rows()) + "x" + std::to_string(n.cols()));
    }
    return (m.array() * n.transpose().array()).sum();
}

/// Contraction Z = V U* maximizing Re tr(M Z); tr(M Z) = ‖M‖_1.
ComplexMatrix polar_unitary(const ComplexMatrix& m);

/// True when every entry is finite.
template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    return m.allFinite();
}

} // namespace schurlab
