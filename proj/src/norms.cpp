#include "schurlab/norms.hpp"

#include "schurlab/opint.hpp"
#include "schurlab/parallel.hpp"
#include "schurlab/random.hpp"

#include <algorithm>
#include <cmath>

namespace schurlab {

ComplexVector FactorizationPair::reconstruct_values() const {
    ComplexVector v(rows * mids * cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < mids; ++k)
            for (Eigen::Index j = 0; j < cols; ++j) v((i * mids + k) * cols + j) = pairing(i, k, j);
    return v;
}

ComplexMatrix FactorizationPair::reconstruct_matrix() const {
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = pairing(i, 0, j);
    return m;
}

namespace {

void check_grid(const SymbolGrid& g, const std::vector<const NormalOperator*>& ops, const char* where) {
    if (g.order() != ops.size()) {
        throw Error(ErrorCode::ShapeMismatch, std::string(where) + ": symbol order does not match the operators");
    }
    for (std::size_t m = 0; m < ops.size(); ++m) {
        if (g.extent(m) != ops[m]->dim()) {
            throw Error(ErrorCode::ShapeMismatch, std::string(where) + ": grid axis " + std::to_string(m) +
                                                      " does not match its operator");
        }
    }
}

struct AscentResult {
    double value = 0.0;
    ComplexMatrix x, y, z; // rotated-basis iterates
    bool converged = false;
};

// Maximizes |sum_ikj m_ikj x_ik y_kj z_ji| over unit x, y and contractions z.
AscentResult trilinear_ascent(const SymbolGrid& m, ComplexMatrix x, ComplexMatrix y, const AscentOptions& opt) {
    const Eigen::Index p = m.extent(0), mid = m.extent(1), q = m.extent(2);
    AscentResult best;
    double previous = -1.0;
    ComplexMatrix c(p, mid), d(mid, q);
    for (int it = 0; it < opt.max_iter; ++it) {
        const ComplexMatrix r = bilinear_schur_apply(m, x, y);
        const ComplexMatrix z = polar_unitary(r);
        const double value = trace_pairing(r, z).real();
        if (value >= best.value || it == 0) {
            best.value = value;
            best.x = x;
            best.y = y;
            best.z = z;
        }
        if (previous >= 0.0 && value - previous <= opt.rel_tol * std::max(value, 1e-300)) {
            best.converged = true;
            break;
        }
        previous = value;

        c.setZero();
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index k = 0; k < mid; ++k) {
                Complex acc = 0.0;
                for (Eigen::Index j = 0; j < q; ++j) acc += m(i, k, j) * y(k, j) * z(j, i);
                c(i, k) = acc;
            }
        const double cn = c.norm();
        if (cn == 0.0) {
            best.converged = true;
            break;
        }
        x = c.conjugate() / cn;

        d.setZero();
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index k = 0; k < mid; ++k) {
                const Complex xik = x(i, k);
                for (Eigen::Index j = 0; j < q; ++j) d(k, j) += m(i, k, j) * xik * z(j, i);
            }
        const double dn = d.norm();
        if (dn == 0.0) {
            best.converged = true;
            break;
        }
        y = d.conjugate() / dn;
    }
    return best;
}

struct RankOneAscentResult {
    double value = 0.0;
    ComplexVector u, v;
    ComplexMatrix z;
    bool converged = false;
};

// Maximizes |sum_ij psi_ij u_i conj(v_j) z_ji| over unit u, v and contractions z.
RankOneAscentResult rank_one_ascent(const ComplexMatrix& psi, ComplexVector u, ComplexVector v,
                                    const AscentOptions& opt) {
    RankOneAscentResult best;
    double previous = -1.0;
    for (int it = 0; it < opt.max_iter; ++it) {
        const ComplexMatrix r = psi.cwiseProduct(u * v.adjoint());
        const ComplexMatrix z = polar_unitary(r);
        const double value = trace_pairing(r, z).real();
        if (value >= best.value || it == 0) {
            best = {value, u, v, z, false};
        }
        if (previous >= 0.0 && value - previous <= opt.rel_tol * std::max(value, 1e-300)) {
            best.converged = true;
            break;
        }
        previous = value;
        // c_i = sum_j psi_ij conj(v_j) z_ji
        const ComplexVector c = (psi * v.conjugate().asDiagonal()).cwiseProduct(z.transpose()).rowwise().sum();
        if (c.norm() == 0.0) {
            best.converged = true;
            break;
        }
        u = c.conjugate() / c.norm();
        // d_j = sum_i psi_ij u_i z_ji; objective sum_j conj(v_j) d_j
        const ComplexVector d = (u.asDiagonal() * psi).cwiseProduct(z.transpose()).colwise().sum().transpose();
        if (d.norm() == 0.0) {
            best.converged = true;
            break;
        }
        v = d / d.norm();
    }
    return best;
}

// Deterministic reduction: largest value, ties to the smallest index.
template <typename Result>
std::size_t argmax_value(const std::vector<Result>& results) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < results.size(); ++r) {
        if (results[r].value > results[best].value) best = r;
    }
    return best;
}

ComplexVector unit_gaussian(Eigen::Index n, Rng& rng) {
    ComplexVector v = random_gaussian(n, 1, rng).col(0);
    return v / v.norm();
}

} // namespace

NormEstimate s2s2_to_s2_norm(const NormalOperator& a, const NormalOperator& b, const NormalOperator& c,
                             const SymbolGrid& phi) {
    check_grid(phi, {&a, &b, &c}, "s2s2_to_s2_norm");
    NormEstimate est;
    est.value = sup_norm(phi);
    Eigen::Index i_best = 0, k_best = 0, j_best = 0;
    double top = -1.0;
    for (Eigen::Index i = 0; i < phi.extent(0); ++i)
        for (Eigen::Index k = 0; k < phi.extent(1); ++k)
            for (Eigen::Index j = 0; j < phi.extent(2); ++j) {
                const double v = std::abs(phi(i, k, j));
                if (v > top) {
                    top = v;
                    i_best = i;
                    k_best = k;
                    j_best = j;
                }
            }
    const ComplexVector u = a.eigenbasis().col(i_best);
    const ComplexVector v = b.eigenbasis().col(k_best);
    const ComplexVector w = c.eigenbasis().col(j_best);
    est.witness["X"] = u * v.adjoint();
    est.witness["Y"] = v * w.adjoint();
    est.upper_certificate = est.value;
    est.lower_certificate = hs_norm(toi_apply(a, b, c, phi, est.witness["X"], est.witness["Y"]));
    return est;
}

double bilinear_s1_objective(const NormalOperator& a, const NormalOperator& b, const NormalOperator& c,
                             const SymbolGrid& phi, const ComplexMatrix& x, const ComplexMatrix& y,
                             const ComplexMatrix& z) {
    return std::abs(trace_pairing(toi_apply(a, b, c, phi, x, y), z));
}

NormEstimate s1_bilinear_norm_lower(const NormalOperator& a, const NormalOperator& b, const NormalOperator& c,
                                    const SymbolGrid& phi, const AscentOptions& options) {
    check_grid(phi, {&a, &b, &c}, "s1_bilinear_norm_lower");
    if (options.restarts < 1) {
        throw Error(ErrorCode::ShapeMismatch, "s1_bilinear_norm_lower: at least one restart is required");
    }
    std::vector<AscentResult> results(static_cast<std::size_t>(options.restarts));
    parallel_for(results.size(), [&](std::size_t r) {
        Rng rng(options.seed ^ static_cast<std::uint64_t>(r));
        ComplexMatrix x = random_unit_hs(a.dim(), b.dim(), rng);
        ComplexMatrix y = random_unit_hs(b.dim(), c.dim(), rng);
        results[r] = trilinear_ascent(phi, std::move(x), std::move(y), options);
    });
    const auto& best = results[argmax_value(results)];

    NormEstimate est;
    est.value = best.value;
    est.restarts_used = options.restarts;
    est.converged = best.converged;
    est.witness["X"] = a.eigenbasis() * best.x * b.eigenbasis().adjoint();
    est.witness["Y"] = b.eigenbasis() * best.y * c.eigenbasis().adjoint();
    est.witness["Z"] = c.eigenbasis() * best.z * a.eigenbasis().adjoint();
    est.lower_certificate = est.value;
    return est;
}

namespace {

// Rank one S = u w^T has gamma_2 = max|s_ij| with scalar factors; returns nullopt for higher rank.
std::optional<SdpSolution> rank_one_gamma2(const ComplexMatrix& s) {
    if (s.size() == 0 || !all_finite(s)) return std::nullopt;
    Eigen::Index pi = 0, pj = 0;
    const double top = s.cwiseAbs().maxCoeff(&pi, &pj);
    if (top == 0.0) return std::nullopt;
    const ComplexVector u = s.col(pj);
    const ComplexVector w = s.row(pi).transpose() / s(pi, pj);
    if ((s - u * w.transpose()).cwiseAbs().maxCoeff() > 1e-14 * top) return std::nullopt;

    const Eigen::Index p = s.rows(), q = s.cols();
    const double t = 1.0 / std::sqrt(top);
    ComplexVector f(p + q);
    f.head(p) = u * t;
    f.tail(q) = w.conjugate() / t;
    SdpSolution sol;
    sol.gram = f * f.adjoint();
    sol.gram.topRightCorner(p, q) = s;
    sol.gram.bottomLeftCorner(q, p) = s.adjoint();
    sol.value = sol.gram.diagonal().real().maxCoeff();
    sol.row_weights = ComplexVector::Unit(p, pi);
    sol.col_weights = ComplexVector::Unit(q, pj);
    sol.lower_bound = top;
    sol.duality_gap = sol.value - top;
    sol.iterations = 0;
    sol.status = SdpStatus::Optimal;
    return sol;
}

} // namespace

Gamma2Result gamma2(const ComplexMatrix& s, const SdpOptions& options) {
    Gamma2Result out;
    if (auto exact = rank_one_gamma2(s)) {
        out.sdp = std::move(*exact);
    } else {
        out.sdp = solve_gamma2_sdp(s, options);
    }
    out.estimate.value = out.sdp.value;
    out.estimate.upper_certificate = out.sdp.value;
    out.estimate.lower_certificate = out.sdp.lower_bound;
    out.estimate.converged = out.sdp.status == SdpStatus::Optimal;
    out.estimate.witness["gram"] = out.sdp.gram;
    return out;
}

FactorizationPair recover_factorization(const ComplexMatrix& gram, Eigen::Index p, Eigen::Index q) {
    if (gram.rows() != p + q || gram.cols() != p + q) {
        throw Error(ErrorCode::ShapeMismatch, "recover_factorization: gram must be (p+q)x(p+q)");
    }
    FactorizationPair fp;
    fp.rows = p;
    fp.cols = q;
    fp.mids = 1;
    if (p + q == 0) return fp;
    const ComplexMatrix h = (gram + gram.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
    const RealVector& lambda = eig.eigenvalues();
    if (lambda(0) < -1e-8) {
        throw Error(ErrorCode::NotPsd, "recover_factorization: minimum eigenvalue " + format_number(lambda(0)));
    }
    const double top = std::max(lambda.maxCoeff(), 0.0);
    std::vector<Eigen::Index> kept;
    for (Eigen::Index l = 0; l < lambda.size(); ++l) {
        if (lambda(l) > 1e-14 * top) kept.push_back(l);
    }
    const auto rank = static_cast<Eigen::Index>(kept.size());
    ComplexMatrix factor(p + q, rank);
    for (Eigen::Index c = 0; c < rank; ++c) {
        const Eigen::Index l = kept[static_cast<std::size_t>(c)];
        factor.col(c) = eig.eigenvectors().col(l) * std::sqrt(lambda(l));
    }
    fp.hilbert_dim = rank;
    for (Eigen::Index i = 0; i < p; ++i) {
        fp.a.push_back(factor.row(i).transpose());
        fp.norm_a = std::max(fp.norm_a, fp.a.back().norm());
    }
    for (Eigen::Index j = 0; j < q; ++j) {
        fp.b.push_back(factor.row(p + j).transpose());
        fp.norm_b = std::max(fp.norm_b, fp.b.back().norm());
    }
    fp.residual = p * q == 0 ? 0.0 : (fp.reconstruct_matrix() - gram.topRightCorner(p, q)).cwiseAbs().maxCoeff();
    return fp;
}

TrilinearFactorization trilinear_factor_norm(const SymbolGrid& m, const SdpOptions& options) {
    if (m.order() != 3) {
        throw Error(ErrorCode::ShapeMismatch, "trilinear_factor_norm: symbol must have order 3");
    }
    const auto slices = middle_slices(m);
    std::vector<Gamma2Result> solved(slices.size());
    parallel_for(slices.size(), [&](std::size_t k) { solved[k] = gamma2(slices[k], options); });

    TrilinearFactorization out;
    out.slice_values.reserve(slices.size());
    bool all_optimal = true;
    double worst_lower_gap = 0.0;
    for (std::size_t k = 0; k < solved.size(); ++k) {
        out.slice_values.push_back(solved[k].estimate.value);
        if (solved[k].estimate.value > out.slice_values[out.argmax_slice]) out.argmax_slice = k;
        all_optimal = all_optimal && solved[k].estimate.converged;
        worst_lower_gap = std::max(worst_lower_gap, solved[k].sdp.duality_gap);
    }
    const double value = slices.empty() ? 0.0 : out.slice_values[out.argmax_slice];

    // Direct sum of the slice factorizations, each slice balanced so both families stay below sqrt(value).
    const Eigen::Index p = m.extent(0), mid = m.extent(1), q = m.extent(2);
    std::vector<FactorizationPair> parts;
    Eigen::Index total = 0;
    for (std::size_t k = 0; k < solved.size(); ++k) {
        parts.push_back(recover_factorization(solved[k].sdp.gram, p, q));
        total += out.slice_values[k] > 0.0 ? parts.back().hilbert_dim : 0;
    }
    FactorizationPair& fp = out.factors;
    fp.hilbert_dim = total;
    fp.rows = p;
    fp.mids = mid;
    fp.cols = q;
    fp.a.assign(static_cast<std::size_t>(p * mid), ComplexVector::Zero(total));
    fp.b.assign(static_cast<std::size_t>(q * mid), ComplexVector::Zero(total));
    Eigen::Index offset = 0;
    for (Eigen::Index k = 0; k < mid; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const double gk = out.slice_values[ku];
        if (!(gk > 0.0)) continue;
        const double scale = std::sqrt(value / gk);
        const Eigen::Index dk = parts[ku].hilbert_dim;
        for (Eigen::Index i = 0; i < p; ++i)
            fp.a[static_cast<std::size_t>(i * mid + k)].segment(offset, dk) = scale * parts[ku].a_at(i);
        for (Eigen::Index j = 0; j < q; ++j)
            fp.b[static_cast<std::size_t>(j * mid + k)].segment(offset, dk) = parts[ku].b_at(j) / scale;
        offset += dk;
    }
    for (const auto& v : fp.a) fp.norm_a = std::max(fp.norm_a, v.norm());
    for (const auto& v : fp.b) fp.norm_b = std::max(fp.norm_b, v.norm());
    fp.residual = m.size() == 0 ? 0.0 : (fp.reconstruct_values() - m.values()).cwiseAbs().maxCoeff();

    out.estimate.value = value;
    out.estimate.upper_certificate = value;
    out.estimate.lower_certificate = value - worst_lower_gap;
    out.estimate.converged = all_optimal;
    if (!slices.empty()) {
        out.estimate.witness["gram"] = solved[out.argmax_slice].sdp.gram;
    }
    return out;
}

NormEstimate doi_s1_norm(const NormalOperator& a, const NormalOperator& b, const SymbolGrid& psi,
                         const AscentOptions& options, const SdpOptions& sdp_options) {
    check_grid(psi, {&a, &b}, "doi_s1_norm");
    if (options.restarts < 1) {
        throw Error(ErrorCode::ShapeMismatch, "doi_s1_norm: at least one restart is required");
    }
    const ComplexMatrix values = psi.as_matrix();
    std::vector<RankOneAscentResult> results(static_cast<std::size_t>(options.restarts));
    parallel_for(results.size(), [&](std::size_t r) {
        Rng rng(options.seed ^ static_cast<std::uint64_t>(r));
        ComplexVector u = unit_gaussian(a.dim(), rng);
        ComplexVector v = unit_gaussian(b.dim(), rng);
        results[r] = rank_one_ascent(values, std::move(u), std::move(v), options);
    });
    const auto& best = results[argmax_value(results)];

    NormEstimate est;
    est.value = best.value;
    est.restarts_used = options.restarts;
    est.converged = best.converged;
    est.lower_certificate = best.value;
    const ComplexVector u = a.eigenbasis() * best.u;
    const ComplexVector v = b.eigenbasis() * best.v;
    est.witness["X"] = u * v.adjoint();
    est.witness["Z"] = b.eigenbasis() * best.z * a.eigenbasis().adjoint();
    est.upper_certificate = gamma2(values, sdp_options).estimate.value;
    return est;
}

} // namespace schurlab
