// sdp.hpp - small dense barrier solver for the factorization-norm program
//
//     minimize t  subject to  [[P, S], [S*, Q]] ⪰ 0,  P_ii <= t,  Q_jj <= t.
//
// The optimal t is gamma_2(S), the smallest max_i ‖a_i‖ · max_j ‖b_j‖ over
// factorizations S_ij = <a_i, b_j>.

#pragma once

#include "schurlab/linalg.hpp"

namespace schurlab {

struct SdpOptions {
    double gap_tol = 1e-7;
    double feas_tol = 1e-8;
    int max_iter = 200; // Newton steps
};

enum class SdpStatus { Optimal, MaxIter, Infeasible };

std::string_view to_string(SdpStatus status);

struct SdpSolution {
    double value = 0.0;       // max diagonal entry of gram; an upper bound on gamma_2
    ComplexMatrix gram;       // [[P, S], [S*, Q]], Hermitian PSD
    double lower_bound = 0.0; // dual value ‖D_a S D_b‖_1 at the certificate weights
    double duality_gap = 0.0; // value - lower_bound
    double feasibility_residual = 0.0;
    ComplexVector row_weights; // unit vector a with ‖D_a S D_b‖_1 = lower_bound
    ComplexVector col_weights; // unit vector b
    int iterations = 0;
    SdpStatus status = SdpStatus::Optimal;
};

/// ‖diag(a) S diag(b)‖_1; a lower bound on gamma_2(S) for unit vectors a, b.
double gamma2_dual_value(const ComplexMatrix& s, const ComplexVector& a, const ComplexVector& b);

/// Throws NumericalBreakdown when a Newton system cannot be factored and
/// BudgetExceeded when p + q > 256.
SdpSolution solve_gamma2_sdp(const ComplexMatrix& s, const SdpOptions& options = {});

} // namespace schurlab
