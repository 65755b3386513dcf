// norms.hpp - operator norms of operator integrals and the factorization norms that equal them.
//
// Ascent routines return certified lower bounds (the objective evaluated at an
// explicit witness). Upper bounds come from explicit Hilbert-space
// factorizations produced by the SDP engine.

#pragma once

#include "schurlab/linalg.hpp"
#include "schurlab/sdp.hpp"
#include "schurlab/symbols.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace schurlab {

struct AscentOptions {
    int restarts = 64;
    int max_iter = 500;
    double rel_tol = 1e-10; // stop when a sweep improves the objective by less than this, relatively
    std::uint64_t seed = 0; // restart r draws from seed ^ r
};

inline constexpr double kAgreementTol = 1e-3;

struct NormEstimate {
    double value = 0.0;
    std::map<std::string, ComplexMatrix> witness;
    std::optional<double> upper_certificate;
    std::optional<double> lower_certificate;
    int restarts_used = 0;
    bool converged = true;
};

/// Families a_{ik}, b_{jk} in C^hilbert_dim with m_{ikj} = <a_{ik}, b_{jk}>.
/// The two-variable form has a single middle index (mids = 1).
struct FactorizationPair {
    Eigen::Index hilbert_dim = 0;
    Eigen::Index rows = 0; // i
    Eigen::Index mids = 1; // k
    Eigen::Index cols = 0; // j
    std::vector<ComplexVector> a; // a[i * mids + k]
    std::vector<ComplexVector> b; // b[j * mids + k]
    double norm_a = 0.0;
    double norm_b = 0.0;
    double residual = 0.0; // max_{ikj} |<a_ik, b_jk> - m_ikj|

    const ComplexVector& a_at(Eigen::Index i, Eigen::Index k = 0) const {
        return a[static_cast<std::size_t>(i * mids + k)];
    }
    const ComplexVector& b_at(Eigen::Index j, Eigen::Index k = 0) const {
        return b[static_cast<std::size_t>(j * mids + k)];
    }
    /// <a_ik, b_jk>, linear in a.
    Complex pairing(Eigen::Index i, Eigen::Index k, Eigen::Index j) const { return b_at(j, k).dot(a_at(i, k)); }

    /// Order-3 values (order-2 when mids == 1 and as_matrix is used) of the reconstructed tensor.
    ComplexVector reconstruct_values() const;
    ComplexMatrix reconstruct_matrix() const;
};

/// S^2 × S^2 -> S^2 norm of the triple integral: exactly sup|phi|, with a rank-one witness.
NormEstimate s2s2_to_s2_norm(const NormalOperator& a, const NormalOperator& b, const NormalOperator& c,
                             const SymbolGrid& phi);

/// |tr(Gamma(phi)(X, Y) Z)| for the given arguments.
double bilinear_s1_objective(const NormalOperator& a, const NormalOperator& b, const NormalOperator& c,
                             const SymbolGrid& phi, const ComplexMatrix& x, const ComplexMatrix& y,
                             const ComplexMatrix& z);

/// Lower bound on the S^2 × S^2 -> S^1 norm by block-coordinate ascent over
/// ‖X‖_2 = ‖Y‖_2 = 1, ‖Z‖_op <= 1. Witness keys: "X", "Y", "Z".
NormEstimate s1_bilinear_norm_lower(const NormalOperator& a, const NormalOperator& b, const NormalOperator& c,
                                    const SymbolGrid& phi, const AscentOptions& options = {});

struct Gamma2Result {
    NormEstimate estimate; // witness key "gram"
    SdpSolution sdp;
};

Gamma2Result gamma2(const ComplexMatrix& s, const SdpOptions& options = {});

/// Factors gram = L L* and reads a_i, b_j off the rows of L. Throws NotPsd.
FactorizationPair recover_factorization(const ComplexMatrix& gram, Eigen::Index p, Eigen::Index q);

struct TrilinearFactorization {
    NormEstimate estimate;
    FactorizationPair factors;
    std::vector<double> slice_values; // gamma_2 of each middle slice
    std::size_t argmax_slice = 0;
};

/// max_k gamma_2(M^(k)) with a global factorization assembled from the slice factorizations.
TrilinearFactorization trilinear_factor_norm(const SymbolGrid& m, const SdpOptions& options = {});

/// Lower bound on the S^1 -> S^1 norm of the double integral over rank-one
/// arguments; upper certificate gamma_2 of the psi grid. Witness keys: "X", "Z".
NormEstimate doi_s1_norm(const NormalOperator& a, const NormalOperator& b, const SymbolGrid& psi,
                         const AscentOptions& options = {}, const SdpOptions& sdp_options = {});

} // namespace schurlab
