// Reference computations for the tests. These use textbook formulas
// (explicit spectral projections, closed-form trace norms, grid search)
// and share no code paths with the library's contraction kernels.

#pragma once

#include "schurlab/linalg.hpp"
#include "schurlab/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using schurlab::Complex;
using schurlab::ComplexMatrix;
using schurlab::ComplexVector;
using schurlab::NormalOperator;
using schurlab::SymbolGrid;

inline ComplexMatrix projection(const NormalOperator& op, Eigen::Index i) {
    const ComplexVector u = op.eigenbasis().col(i);
    return u * u.adjoint();
}

inline ComplexMatrix doi(const NormalOperator& a, const NormalOperator& b, const SymbolGrid& psi,
                         const ComplexMatrix& x) {
    ComplexMatrix r = ComplexMatrix::Zero(a.dim(), b.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i)
        for (Eigen::Index j = 0; j < b.dim(); ++j) r += psi(i, j) * projection(a, i) * x * projection(b, j);
    return r;
}

inline ComplexMatrix toi(const NormalOperator& a, const NormalOperator& b, const NormalOperator& c,
                         const SymbolGrid& phi, const ComplexMatrix& x, const ComplexMatrix& y) {
    ComplexMatrix r = ComplexMatrix::Zero(a.dim(), c.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i)
        for (Eigen::Index k = 0; k < b.dim(); ++k) {
            const ComplexMatrix left = projection(a, i) * x * projection(b, k) * y;
            for (Eigen::Index j = 0; j < c.dim(); ++j) r += phi(i, k, j) * left * projection(c, j);
        }
    return r;
}

/// Sum over every index tuple of phi(i_1..i_n) P_{i_1} X_1 P_{i_2} ... X_{n-1} P_{i_n}.
inline ComplexMatrix moi(const std::vector<NormalOperator>& ops, const SymbolGrid& phi,
                         const std::vector<ComplexMatrix>& args) {
    const std::size_t n = ops.size();
    ComplexMatrix r = ComplexMatrix::Zero(ops.front().dim(), ops.back().dim());
    std::vector<Eigen::Index> idx(n, 0);
    std::function<void(std::size_t, const ComplexMatrix&)> walk = [&](std::size_t m, const ComplexMatrix& acc) {
        for (Eigen::Index i = 0; i < ops[m].dim(); ++i) {
            idx[m] = i;
            ComplexMatrix next = acc * projection(ops[m], i);
            if (m + 1 == n) {
                r += phi.at(idx) * next;
            } else {
                walk(m + 1, next * args[m]);
            }
        }
    };
    walk(0, ComplexMatrix::Identity(ops.front().dim(), ops.front().dim()));
    return r;
}

/// Trace norm of a 2x2 matrix: sqrt(‖M‖_F^2 + 2|det M|).
inline double trace_norm_2x2(const ComplexMatrix& m) {
    const double f2 = m.squaredNorm();
    const double det = std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
    return std::sqrt(f2 + 2.0 * det);
}

/// gamma_2 of a 2x2 matrix as max over unit nonnegative weights of ‖D_a S D_b‖_1,
/// by a coarse angle grid followed by repeated local zooming.
inline double gamma2_2x2(const ComplexMatrix& s) {
    auto value = [&](double t, double u) {
        ComplexMatrix m(2, 2);
        const double a[2] = {std::cos(t), std::sin(t)};
        const double b[2] = {std::cos(u), std::sin(u)};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m(i, j) = a[i] * s(i, j) * b[j];
        return trace_norm_2x2(m);
    };
    const double half_pi = std::acos(0.0);
    const int n = 64;
    double best = -1.0, bt = 0.0, bu = 0.0;
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
            const double t = half_pi * p / n, u = half_pi * q / n;
            const double v = value(t, u);
            if (v > best) best = v, bt = t, bu = u;
        }
    double h = half_pi / n;
    for (int round = 0; round < 40; ++round) {
        double ct = bt, cu = bu;
        for (int p = -4; p <= 4; ++p)
            for (int q = -4; q <= 4; ++q) {
                const double t = std::clamp(ct + h * p / 4, 0.0, half_pi);
                const double u = std::clamp(cu + h * q / 4, 0.0, half_pi);
                const double v = value(t, u);
                if (v > best) best = v, bt = t, bu = u;
            }
        h *= 0.5;
    }
    return best;
}

/// Upper bound on gamma_2 of a real invertible 2x2 matrix by searching real
/// factorizations S = A B^T with a_1 = (1, 0), a_2 = r (cos t, sin t).
inline double gamma2_primal_2x2_real(const Eigen::Matrix2d& s) {
    auto cost = [&](double r, double t) {
        Eigen::Matrix2d a;
        a << 1.0, 0.0, r * std::cos(t), r * std::sin(t);
        if (std::abs(a.determinant()) < 1e-9) return 1e300;
        const Eigen::Matrix2d bt = a.inverse() * s; // column j is b_j
        return a.rowwise().norm().maxCoeff() * bt.colwise().norm().maxCoeff();
    };
    const double pi = 2.0 * std::acos(0.0);
    double best = 1e300, br = 1.0, bt = pi / 2;
    for (int p = 1; p <= 200; ++p)
        for (int q = 0; q < 200; ++q) {
            const double r = 0.02 * p, t = pi * q / 200;
            const double v = cost(r, t);
            if (v < best) best = v, br = r, bt = t;
        }
    double hr = 0.02, ht = pi / 200;
    for (int round = 0; round < 40; ++round) {
        const double cr = br, ct = bt;
        for (int p = -4; p <= 4; ++p)
            for (int q = -4; q <= 4; ++q) {
                const double r = std::max(cr + hr * p / 4, 1e-6), t = ct + ht * q / 4;
                const double v = cost(r, t);
                if (v < best) best = v, br = r, bt = t;
            }
        hr *= 0.5;
        ht *= 0.5;
    }
    return best;
}

/// Largest distance after greedily pairing each wanted value with its nearest unused computed value.
inline double spectrum_distance(const ComplexVector& got, const ComplexVector& want) {
    if (got.size() != want.size()) return 1e300;
    std::vector<bool> used(static_cast<std::size_t>(got.size()), false);
    double worst = 0.0;
    for (Eigen::Index w = 0; w < want.size(); ++w) {
        double best = 1e300;
        std::size_t arg = 0;
        for (Eigen::Index g = 0; g < got.size(); ++g) {
            const double d = std::abs(got(g) - want(w));
            if (!used[static_cast<std::size_t>(g)] && d < best) best = d, arg = static_cast<std::size_t>(g);
        }
        used[arg] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace oracle
