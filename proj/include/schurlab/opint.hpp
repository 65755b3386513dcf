// opint.hpp - double, triple and n-fold operator integrals on Hilbert-Schmidt arguments.
//
// Every integral is evaluated by rotating the arguments into the eigenbases
// of the operators, contracting against the symbol grid entrywise, and
// rotating back. Grid index i along axis m corresponds to eigenbasis column i
// of the m-th operator.

#pragma once

#include "schurlab/linalg.hpp"
#include "schurlab/symbols.hpp"

#include <vector>

namespace schurlab {

inline constexpr std::size_t kMaxIntegralOrder = 6;

/// f(A) = U diag(f_values) U*.
ComplexMatrix apply_function(const NormalOperator& a, const ComplexVector& f_values);

/// Schur multiplier in the standard basis: R[i, j] = psi[i, j] * X[i, j].
ComplexMatrix schur_apply(const SymbolGrid& psi, const ComplexMatrix& x);

/// Bilinear Schur multiplier in the standard basis: R[i, j] = sum_k m[i, k, j] X[i, k] Y[k, j].
ComplexMatrix bilinear_schur_apply(const SymbolGrid& m, const ComplexMatrix& x, const ComplexMatrix& y);

/// X -> sum_ij psi(a_i, b_j) P_i X Q_j
ComplexMatrix doi_apply(const NormalOperator& a, const NormalOperator& b, const SymbolGrid& psi,
                        const ComplexMatrix& x);

/// (X, Y) -> sum_ikj phi(a_i, b_k, c_j) P_i X Q_k Y R_j
ComplexMatrix toi_apply(const NormalOperator& a, const NormalOperator& b, const NormalOperator& c,
                        const SymbolGrid& phi, const ComplexMatrix& x, const ComplexMatrix& y);

/// n-fold integral for 2 <= n <= 6 operators and n-1 arguments.
ComplexMatrix moi_apply(const std::vector<NormalOperator>& ops, const SymbolGrid& phi,
                        const std::vector<ComplexMatrix>& args);

/// One separable term: the n coefficient vectors a_1(t, .), ..., a_n(t, .) sampled on the spectra.
using SeparableTerm = std::vector<ComplexVector>;

/// sum_t a_1(t, A_1) X_1 a_2(t, A_2) X_2 ... a_n(t, A_n)
ComplexMatrix separable_apply(const std::vector<NormalOperator>& ops, const std::vector<SeparableTerm>& terms,
                              const std::vector<ComplexMatrix>& args);

/// Grid of a separable symbol: sum_t a_1(t) ⊗ ... ⊗ a_n(t) on the operators' spectra.
SymbolGrid separable_grid(const std::vector<NormalOperator>& ops, const std::vector<SeparableTerm>& terms);

/// Evaluates Gamma^{A,B}(psi)(X Y) as the triple integral over (A, C, B) of psi
/// extended constantly along the middle variable. X is dim_A×dim_C, Y is dim_C×dim_B.
ComplexMatrix doi_via_toi(const NormalOperator& a, const NormalOperator& b, const SymbolGrid& psi,
                          const ComplexMatrix& x, const ComplexMatrix& y, const NormalOperator& c);

} // namespace schurlab
