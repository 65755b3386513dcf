#include "schurlab/linalg.hpp"

#include <algorithm>
#include <limits>

namespace schurlab {

namespace {

double frob_scale(const ComplexMatrix& m) {
    return std::max(m.norm(), std::numeric_limits<double>::min());
}

} // namespace

NormalOperator NormalOperator::from_spectrum(const ComplexMatrix& eigenbasis,
                                             const ComplexVector& eigenvalues,
                                             const Tolerances& tol) {
    if (eigenbasis.rows() != eigenbasis.cols() || eigenbasis.rows() != eigenvalues.size()) {
        throw Error(ErrorCode::ShapeMismatch, "from_spectrum: eigenbasis must be square with one column per eigenvalue");
    }
    const auto n = eigenvalues.size();
    const double ortho = (eigenbasis * eigenbasis.adjoint() - ComplexMatrix::Identity(n, n)).norm();
    if (ortho > tol.ortho) {
        throw Error(ErrorCode::EigFailure, "from_spectrum: eigenbasis is not unitary (residual " +
                                               format_number(ortho) + ")");
    }
    ComplexMatrix m = eigenbasis * eigenvalues.asDiagonal() * eigenbasis.adjoint();
    return NormalOperator(std::move(m), eigenvalues, eigenbasis);
}

NormalOperator NormalOperator::diagonal(const ComplexVector& eigenvalues) {
    const auto n = eigenvalues.size();
    ComplexMatrix m = eigenvalues.asDiagonal();
    return NormalOperator(std::move(m), eigenvalues, ComplexMatrix::Identity(n, n));
}

double NormalOperator::orthogonality_residual() const {
    const auto n = dim();
    return (eigenbasis_ * eigenbasis_.adjoint() - ComplexMatrix::Identity(n, n)).norm();
}

double NormalOperator::reconstruction_residual() const {
    const ComplexMatrix rebuilt = eigenbasis_ * eigenvalues_.asDiagonal() * eigenbasis_.adjoint();
    return (rebuilt - matrix_).norm() / std::max(matrix_.norm(), 1.0);
}

double normality_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::NotSquare, "normality_defect: matrix is not square");
    }
    const double scale = m.norm();
    if (scale == 0.0) {
        return 0.0;
    }
    const ComplexMatrix comm = m * m.adjoint() - m.adjoint() * m;
    return comm.norm() / (scale * scale);
}

NormalOperator normal_eig(const ComplexMatrix& m, double normality_tol) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::NotSquare, "normal_eig: matrix is " + std::to_string(m.rows()) + "x" +
                                              std::to_string(m.cols()));
    }
    if (!m.allFinite()) {
        throw Error(ErrorCode::EigFailure, "normal_eig: matrix has non-finite entries");
    }
    const auto n = m.rows();
    if (n == 0 || m.norm() == 0.0) {
        return NormalOperator(m, ComplexVector::Zero(n), ComplexMatrix::Identity(n, n));
    }
    const double defect = normality_defect(m);
    if (defect > normality_tol) {
        throw Error(ErrorCode::NotNormal, "normal_eig: commutator defect " + format_number(defect) +
                                              " exceeds " + format_number(normality_tol));
    }

    const ComplexMatrix h = (m + m.adjoint()) / 2.0;
    const ComplexMatrix k = (m - m.adjoint()) / Complex(0.0, 2.0);

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> h_eig(h);
    if (h_eig.info() != Eigen::Success) {
        throw Error(ErrorCode::EigFailure, "normal_eig: Hermitian part did not converge");
    }
    ComplexMatrix basis = h_eig.eigenvectors();
    const RealVector& h_vals = h_eig.eigenvalues();

    // Eigenvalues come sorted; clusters are runs with consecutive gaps below the threshold.
    const double group_tol = 1e-8 * op_norm(m);
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index stop = start + 1;
        while (stop < n && h_vals(stop) - h_vals(stop - 1) <= group_tol) {
            ++stop;
        }
        const auto width = stop - start;
        if (width > 1) {
            const ComplexMatrix block = basis.middleCols(start, width);
            ComplexMatrix k_block = block.adjoint() * k * block;
            k_block = (k_block + k_block.adjoint()).eval() / 2.0;
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> k_eig(k_block);
            if (k_eig.info() != Eigen::Success) {
                throw Error(ErrorCode::EigFailure, "normal_eig: skew part did not converge on a cluster");
            }
            basis.middleCols(start, width) = block * k_eig.eigenvectors();
        }
        start = stop;
    }

    ComplexVector eigenvalues(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        eigenvalues(j) = basis.col(j).dot(m * basis.col(j));
    }

    NormalOperator result(m, std::move(eigenvalues), std::move(basis));
    const Tolerances tol;
    const double ortho = result.orthogonality_residual();
    const double recon = (result.eigenbasis() * result.eigenvalues().asDiagonal() * result.eigenbasis().adjoint() - m)
                             .norm() / frob_scale(m);
    if (ortho > tol.ortho || recon > tol.recon) {
        throw Error(ErrorCode::EigFailure, "normal_eig: residuals too large (ortho " + format_number(ortho) +
                                               ", recon " + format_number(recon) + ")");
    }
    return result;
}

SingularDecomposition svd(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

ComplexMatrix polar_unitary(const ComplexMatrix& m) {
    if (m.size() == 0) {
        return ComplexMatrix::Zero(m.cols(), m.rows());
    }
    Eigen::JacobiSVD<ComplexMatrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return dec.matrixV() * dec.matrixU().adjoint();
}

} // namespace schurlab
