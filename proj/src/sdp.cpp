#include "schurlab/sdp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace schurlab {

std::string_view to_string(SdpStatus status) {
    switch (status) {
    case SdpStatus::Optimal: return "Optimal";
    case SdpStatus::MaxIter: return "MaxIter";
    case SdpStatus::Infeasible: return "Infeasible";
    }
    return "Unknown";
}

double gamma2_dual_value(const ComplexMatrix& s, const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != s.rows() || b.size() != s.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "gamma2_dual_value: weight lengths do not match S");
    }
    return trace_norm(a.asDiagonal() * s * b.asDiagonal());
}

namespace {

// One real coordinate of the Hermitian blocks: E = sum of c * e_r e_s^T.
struct Term {
    Eigen::Index r;
    Eigen::Index s;
    Complex c;
};

struct Coordinate {
    std::array<Term, 2> terms;
    int count;
};

// Barrier for t/mu - log det W - sum_i log(t - W_ii) over the free parameters
// of the diagonal blocks of W; the last coordinate is t.
class Gamma2Barrier {
public:
    Gamma2Barrier(const ComplexMatrix& s, bool complex_mode) : s_(s), p_(s.rows()), q_(s.cols()) {
        const Eigen::Index n = p_ + q_;
        diag_coord_.assign(static_cast<std::size_t>(n), -1);
        auto add_block = [&](Eigen::Index offset, Eigen::Index size) {
            for (Eigen::Index r = 0; r < size; ++r) {
                for (Eigen::Index c = r; c < size; ++c) {
                    const Eigen::Index gr = offset + r, gc = offset + c;
                    if (r == c) {
                        diag_coord_[static_cast<std::size_t>(gr)] = static_cast<int>(coords_.size());
                        coords_.push_back({{Term{gr, gr, 1.0}, Term{}}, 1});
                    } else {
                        coords_.push_back({{Term{gr, gc, 1.0}, Term{gc, gr, 1.0}}, 2});
                        if (complex_mode) {
                            coords_.push_back({{Term{gr, gc, Complex(0, 1)}, Term{gc, gr, Complex(0, -1)}}, 2});
                        }
                    }
                }
            }
        };
        add_block(0, p_);
        add_block(p_, q_);
        t_index_ = static_cast<Eigen::Index>(coords_.size());
    }

    Eigen::Index size() const { return t_index_ + 1; }
    Eigen::Index dim() const { return p_ + q_; }
    Eigen::Index t_index() const { return t_index_; }
    double barrier_parameter() const { return 2.0 * static_cast<double>(dim()); }

    RealVector initial_point(double diag, double t) const {
        RealVector x = RealVector::Zero(size());
        for (int idx : diag_coord_) x(idx) = diag;
        x(t_index_) = t;
        return x;
    }

    ComplexMatrix assemble(const RealVector& x) const {
        const Eigen::Index n = dim();
        ComplexMatrix w = ComplexMatrix::Zero(n, n);
        w.topRightCorner(p_, q_) = s_;
        w.bottomLeftCorner(q_, p_) = s_.adjoint();
        for (std::size_t a = 0; a < coords_.size(); ++a) {
            const auto& co = coords_[a];
            for (int m = 0; m < co.count; ++m) {
                w(co.terms[m].r, co.terms[m].s) += co.terms[m].c * x(static_cast<Eigen::Index>(a));
            }
        }
        return w;
    }

    RealVector slacks(const RealVector& x, const ComplexMatrix& w) const {
        return (RealVector::Constant(dim(), x(t_index_)) - w.diagonal().real()).eval();
    }

    // Strictly feasible iff W is positive definite and every slack is positive.
    bool feasible(const RealVector& x) const {
        const ComplexMatrix w = assemble(x);
        if ((slacks(x, w).array() <= 0.0).any()) return false;
        Eigen::LLT<ComplexMatrix> llt(w);
        return llt.info() == Eigen::Success;
    }

    struct Derivatives {
        RealVector gradient;
        Eigen::MatrixXd hessian;
        RealVector slack;
        ComplexMatrix w;
    };

    std::optional<Derivatives> derivatives(const RealVector& x, double mu) const {
        Derivatives d;
        d.w = assemble(x);
        d.slack = slacks(x, d.w);
        if ((d.slack.array() <= 0.0).any()) return std::nullopt;
        Eigen::LLT<ComplexMatrix> llt(d.w);
        if (llt.info() != Eigen::Success) return std::nullopt;
        const Eigen::Index n = dim();
        const ComplexMatrix g = llt.solve(ComplexMatrix::Identity(n, n));

        const Eigen::Index nv = size();
        d.gradient = RealVector::Zero(nv);
        d.hessian = Eigen::MatrixXd::Zero(nv, nv);
        for (Eigen::Index a = 0; a < t_index_; ++a) {
            const auto& ca = coords_[static_cast<std::size_t>(a)];
            double ga = 0.0;
            for (int m = 0; m < ca.count; ++m) {
                ga -= (ca.terms[m].c * g(ca.terms[m].s, ca.terms[m].r)).real();
            }
            d.gradient(a) = ga;
            for (Eigen::Index b = a; b < t_index_; ++b) {
                const auto& cb = coords_[static_cast<std::size_t>(b)];
                Complex h = 0.0;
                for (int m = 0; m < ca.count; ++m) {
                    const Term& ta = ca.terms[m];
                    for (int l = 0; l < cb.count; ++l) {
                        const Term& tb = cb.terms[l];
                        h += ta.c * tb.c * g(tb.s, ta.r) * g(ta.s, tb.r);
                    }
                }
                d.hessian(a, b) = h.real();
                d.hessian(b, a) = h.real();
            }
        }
        d.gradient(t_index_) = 1.0 / mu;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double inv = 1.0 / d.slack(i);
            const Eigen::Index di = diag_coord_[static_cast<std::size_t>(i)];
            d.gradient(t_index_) -= inv;
            d.gradient(di) += inv;
            const double inv2 = inv * inv;
            d.hessian(t_index_, t_index_) += inv2;
            d.hessian(di, di) += inv2;
            d.hessian(t_index_, di) -= inv2;
            d.hessian(di, t_index_) -= inv2;
        }
        return d;
    }

    // Exact minimizer of the barrier objective along dx, capped at a fraction of the step to the boundary.
    //
    // Along the ray, -log det(W + a dW) = const - sum_k log(1 + a e_k) with e_k the eigenvalues of
    // L^-1 dW L^-*, so the directional derivative is available in closed form.
    double line_search(const RealVector& x, const RealVector& dx, double mu, double fraction) const {
        const ComplexMatrix w = assemble(x);
        const ComplexMatrix dw = assemble(dx) - assemble(RealVector::Zero(size()));
        const RealVector sl = slacks(x, w);
        RealVector ds(dim());
        for (Eigen::Index i = 0; i < dim(); ++i) ds(i) = dx(t_index_) - dw(i, i).real();
        Eigen::LLT<ComplexMatrix> llt(w);
        const ComplexMatrix l_inv = llt.matrixL().solve(ComplexMatrix::Identity(dim(), dim()));
        ComplexMatrix m = l_inv * dw * l_inv.adjoint();
        m = (m + m.adjoint()).eval() / 2.0;
        const RealVector e = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues();

        double alpha_max = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < e.size(); ++k)
            if (e(k) < 0.0) alpha_max = std::min(alpha_max, -1.0 / e(k));
        for (Eigen::Index i = 0; i < ds.size(); ++i)
            if (ds(i) < 0.0) alpha_max = std::min(alpha_max, -sl(i) / ds(i));

        const double slope_t = dx(t_index_) / mu;
        auto derivative = [&](double a, double* curvature) {
            double d1 = slope_t, d2 = 0.0;
            for (Eigen::Index k = 0; k < e.size(); ++k) {
                const double r = e(k) / (1.0 + a * e(k));
                d1 -= r;
                d2 += r * r;
            }
            for (Eigen::Index i = 0; i < ds.size(); ++i) {
                const double r = ds(i) / (sl(i) + a * ds(i));
                d1 -= r;
                d2 += r * r;
            }
            if (curvature) *curvature = d2;
            return d1;
        };

        // The objective is convex along the ray with negative slope at 0.
        double lo = 0.0;
        double hi = std::isfinite(alpha_max) ? alpha_max : 1.0;
        if (!std::isfinite(alpha_max)) {
            while (derivative(hi, nullptr) < 0.0 && hi < 1e12) hi *= 2.0;
        }
        double a = std::min(1.0, 0.5 * hi);
        for (int it = 0; it < 100; ++it) {
            double curv = 0.0;
            const double d1 = derivative(a, &curv);
            if (d1 < 0.0) lo = a; else hi = a;
            double next = (curv > 0.0) ? a - d1 / curv : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - a) <= 1e-14 * std::max(a, 1e-300)) {
                a = next;
                break;
            }
            a = next;
        }
        return std::isfinite(alpha_max) ? std::min(a, fraction * alpha_max) : a;
    }

private:
    ComplexMatrix s_;
    Eigen::Index p_;
    Eigen::Index q_;
    std::vector<Coordinate> coords_;
    std::vector<int> diag_coord_;
    Eigen::Index t_index_ = 0;
};

struct DualCertificate {
    double value;
    ComplexVector a;
    ComplexVector b;
};

// Alternating ascent on (a, b) from the barrier multipliers; every iterate is a valid bound.
DualCertificate refine_dual(const ComplexMatrix& s, ComplexVector a, ComplexVector b) {
    a.normalize();
    b.normalize();
    DualCertificate best{gamma2_dual_value(s, a, b), a, b};
    for (int sweep = 0; sweep < 200; ++sweep) {
        const ComplexMatrix z = polar_unitary(a.asDiagonal() * s * b.asDiagonal());
        const ComplexVector c = (s * b.asDiagonal()).cwiseProduct(z.transpose()).rowwise().sum();
        if (c.norm() == 0.0) break;
        a = c.conjugate() / c.norm();
        const ComplexMatrix z2 = polar_unitary(a.asDiagonal() * s * b.asDiagonal());
        const ComplexVector d = (a.asDiagonal() * s).cwiseProduct(z2.transpose()).colwise().sum().transpose();
        if (d.norm() == 0.0) break;
        b = d.conjugate() / d.norm();
        const double v = gamma2_dual_value(s, a, b);
        if (v <= best.value * (1.0 + 1e-15)) {
            if (v > best.value) best = {v, a, b};
            break;
        }
        best = {v, a, b};
    }
    return best;
}

} // namespace

SdpSolution solve_gamma2_sdp(const ComplexMatrix& s, const SdpOptions& options) {
    const Eigen::Index p = s.rows(), q = s.cols();
    if (!s.allFinite()) {
        throw Error(ErrorCode::NumericalBreakdown, "solve_gamma2_sdp: S has non-finite entries");
    }
    if (p + q > 256) {
        throw Error(ErrorCode::BudgetExceeded, "solve_gamma2_sdp: p + q = " + std::to_string(p + q) +
                                                   " exceeds 256");
    }
    SdpSolution sol;
    const double scale = s.size() == 0 ? 0.0 : op_norm(s);
    if (scale == 0.0) {
        sol.gram = ComplexMatrix::Zero(p + q, p + q);
        sol.row_weights = ComplexVector::Constant(p, p > 0 ? 1.0 / std::sqrt(double(p)) : 0.0);
        sol.col_weights = ComplexVector::Constant(q, q > 0 ? 1.0 / std::sqrt(double(q)) : 0.0);
        return sol;
    }

    const ComplexMatrix sn = s / scale;
    const bool complex_mode = sn.imag().cwiseAbs().maxCoeff() > 0.0;
    const Gamma2Barrier barrier(sn, complex_mode);
    const double nu = barrier.barrier_parameter();
    const double gap_target = options.gap_tol / scale;

    // ‖sn‖_op = 1, so P = Q = 2I is strictly feasible with unit diagonal slack at t = 3.
    RealVector x = barrier.initial_point(2.0, 3.0);
    double mu = 1.0;
    int iterations = 0;
    std::optional<DualCertificate> cert;
    SdpStatus status = SdpStatus::MaxIter;

    auto certificate = [&](const RealVector& slack) {
        const RealVector lambda = mu * slack.cwiseInverse();
        ComplexVector a = lambda.head(p).cwiseSqrt().cast<Complex>();
        ComplexVector b = lambda.tail(q).cwiseSqrt().cast<Complex>();
        return refine_dual(sn, a, b);
    };

    while (iterations < options.max_iter) {
        std::optional<Gamma2Barrier::Derivatives> d;
        for (int inner = 0; inner < 50 && iterations < options.max_iter; ++inner) {
            d = barrier.derivatives(x, mu);
            if (!d) {
                throw Error(ErrorCode::NumericalBreakdown, "solve_gamma2_sdp: iterate left the interior");
            }
            Eigen::LLT<Eigen::MatrixXd> newton(d->hessian);
            if (newton.info() != Eigen::Success) {
                const double ridge = 1e-14 * std::max(d->hessian.diagonal().maxCoeff(), 1.0);
                newton.compute(d->hessian + ridge * Eigen::MatrixXd::Identity(x.size(), x.size()));
                if (newton.info() != Eigen::Success) {
                    throw Error(ErrorCode::NumericalBreakdown, "solve_gamma2_sdp: singular Newton system");
                }
            }
            const RealVector dx = -newton.solve(d->gradient);
            const double decrement2 = -d->gradient.dot(dx);
            if (!(decrement2 >= 0.0) || decrement2 < 1e-8) break;
            double alpha = barrier.line_search(x, dx, mu, 0.98);
            RealVector trial = x + alpha * dx;
            int halvings = 0;
            while (!barrier.feasible(trial) && halvings < 60) {
                alpha *= 0.5;
                trial = x + alpha * dx;
                ++halvings;
            }
            if (halvings == 60) {
                throw Error(ErrorCode::NumericalBreakdown, "solve_gamma2_sdp: no feasible step");
            }
            x = std::move(trial);
            ++iterations;
            if (decrement2 < 1e-6) break;
        }
        d = barrier.derivatives(x, mu);
        if (!d) {
            throw Error(ErrorCode::NumericalBreakdown, "solve_gamma2_sdp: iterate left the interior");
        }
        if (nu * mu <= 10.0 * gap_target) {
            cert = certificate(d->slack);
            const double primal = d->w.diagonal().real().maxCoeff();
            if (primal - cert->value <= gap_target) {
                status = SdpStatus::Optimal;
                break;
            }
        }
        if (mu < 1e-15) break;
        mu *= 0.2;
    }

    const ComplexMatrix w = barrier.assemble(x);
    if (!cert) {
        cert = certificate(barrier.slacks(x, w));
    }
    const double primal = w.diagonal().real().maxCoeff();
    sol.value = primal * scale;
    sol.gram = w * scale;
    sol.lower_bound = cert->value * scale;
    sol.duality_gap = sol.value - sol.lower_bound;
    sol.row_weights = cert->a;
    sol.col_weights = cert->b;
    sol.iterations = iterations;
    sol.status = status;

    const double lmin =
        Eigen::SelfAdjointEigenSolver<ComplexMatrix>(sol.gram, Eigen::EigenvaluesOnly).eigenvalues()(0);
    const double diag_excess = sol.gram.diagonal().real().maxCoeff() - sol.value;
    const double data_error = (sol.gram.topRightCorner(p, q) - s).cwiseAbs().maxCoeff();
    sol.feasibility_residual = std::max({0.0, -lmin, diag_excess, data_error});
    return sol;
}

} // namespace schurlab
