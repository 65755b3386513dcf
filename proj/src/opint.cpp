#include "schurlab/opint.hpp"

namespace schurlab {

namespace {

[[noreturn]] void shape_error(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::ShapeMismatch, where + ": " + what);
}

void check_axis(const SymbolGrid& g, std::size_t m, const NormalOperator& op, const char* where) {
    if (g.extent(m) != op.dim()) {
        shape_error(where, "grid axis " + std::to_string(m) + " has length " + std::to_string(g.extent(m)) +
                               " but the operator has dimension " + std::to_string(op.dim()));
    }
}

void check_arg(const ComplexMatrix& x, const NormalOperator& left, const NormalOperator& right, const char* where) {
    if (x.rows() != left.dim() || x.cols() != right.dim()) {
        shape_error(where, "argument is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                               ", expected " + std::to_string(left.dim()) + "x" + std::to_string(right.dim()));
    }
}

ComplexMatrix rotate_in(const NormalOperator& left, const ComplexMatrix& x, const NormalOperator& right) {
    return left.eigenbasis().adjoint() * x * right.eigenbasis();
}

ComplexMatrix rotate_out(const NormalOperator& left, const ComplexMatrix& r, const NormalOperator& right) {
    return left.eigenbasis() * r * right.eigenbasis().adjoint();
}

} // namespace

ComplexMatrix apply_function(const NormalOperator& a, const ComplexVector& f_values) {
    if (f_values.size() != a.dim()) {
        shape_error("apply_function", "expected " + std::to_string(a.dim()) + " function values");
    }
    return a.eigenbasis() * f_values.asDiagonal() * a.eigenbasis().adjoint();
}

ComplexMatrix schur_apply(const SymbolGrid& psi, const ComplexMatrix& x) {
    if (psi.order() != 2 || psi.extent(0) != x.rows() || psi.extent(1) != x.cols()) {
        shape_error("schur_apply", "grid and argument shapes differ");
    }
    ComplexMatrix r(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) r(i, j) = psi(i, j) * x(i, j);
    return r;
}

ComplexMatrix bilinear_schur_apply(const SymbolGrid& m, const ComplexMatrix& x, const ComplexMatrix& y) {
    if (m.order() != 3 || x.rows() != m.extent(0) || x.cols() != m.extent(1) || y.rows() != m.extent(1) ||
        y.cols() != m.extent(2)) {
        shape_error("bilinear_schur_apply", "grid and argument shapes differ");
    }
    const Eigen::Index p = m.extent(0), mid = m.extent(1), q = m.extent(2);
    ComplexMatrix r = ComplexMatrix::Zero(p, q);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index k = 0; k < mid; ++k) {
            const Complex xik = x(i, k);
            for (Eigen::Index j = 0; j < q; ++j) r(i, j) += m(i, k, j) * xik * y(k, j);
        }
    return r;
}

ComplexMatrix doi_apply(const NormalOperator& a, const NormalOperator& b, const SymbolGrid& psi,
                        const ComplexMatrix& x) {
    if (psi.order() != 2) {
        shape_error("doi_apply", "symbol must have order 2");
    }
    check_axis(psi, 0, a, "doi_apply");
    check_axis(psi, 1, b, "doi_apply");
    check_arg(x, a, b, "doi_apply");
    return rotate_out(a, schur_apply(psi, rotate_in(a, x, b)), b);
}

ComplexMatrix toi_apply(const NormalOperator& a, const NormalOperator& b, const NormalOperator& c,
                        const SymbolGrid& phi, const ComplexMatrix& x, const ComplexMatrix& y) {
    if (phi.order() != 3) {
        shape_error("toi_apply", "symbol must have order 3");
    }
    check_axis(phi, 0, a, "toi_apply");
    check_axis(phi, 1, b, "toi_apply");
    check_axis(phi, 2, c, "toi_apply");
    check_arg(x, a, b, "toi_apply");
    check_arg(y, b, c, "toi_apply");
    return rotate_out(a, bilinear_schur_apply(phi, rotate_in(a, x, b), rotate_in(b, y, c)), c);
}

ComplexMatrix moi_apply(const std::vector<NormalOperator>& ops, const SymbolGrid& phi,
                        const std::vector<ComplexMatrix>& args) {
    const std::size_t n = ops.size();
    if (n > kMaxIntegralOrder) {
        throw Error(ErrorCode::OrderTooLarge, "moi_apply: order " + std::to_string(n) + " exceeds " +
                                                  std::to_string(kMaxIntegralOrder));
    }
    if (n < 2) {
        shape_error("moi_apply", "at least two operators are required");
    }
    if (phi.order() != n || args.size() != n - 1) {
        shape_error("moi_apply", "need a symbol of order n and n-1 arguments");
    }
    for (std::size_t m = 0; m < n; ++m) {
        check_axis(phi, m, ops[m], "moi_apply");
    }
    std::vector<ComplexMatrix> rotated;
    rotated.reserve(n - 1);
    for (std::size_t m = 0; m + 1 < n; ++m) {
        check_arg(args[m], ops[m], ops[m + 1], "moi_apply");
        rotated.push_back(rotate_in(ops[m], args[m], ops[m + 1]));
    }

    std::vector<Eigen::Index> d(n);
    for (std::size_t m = 0; m < n; ++m) d[m] = ops[m].dim();
    auto tail = [&](std::size_t from) {
        Eigen::Index r = 1;
        for (std::size_t l = from; l < n; ++l) r *= d[l];
        return r;
    };

    // Layout throughout: [i0][i_m][i_{m+1}...i_{n-1}], row-major.
    ComplexVector t = phi.values();
    {
        const Eigen::Index rest = tail(2);
        for (Eigen::Index i0 = 0; i0 < d[0]; ++i0)
            for (Eigen::Index i1 = 0; i1 < d[1]; ++i1) {
                const Complex w = rotated[0](i0, i1);
                t.segment((i0 * d[1] + i1) * rest, rest) *= w;
            }
    }
    for (std::size_t m = 1; m + 1 < n; ++m) {
        const Eigen::Index dm = d[m], dn = d[m + 1], rest = tail(m + 2);
        const ComplexMatrix& xm = rotated[m];
        ComplexVector next = ComplexVector::Zero(d[0] * dn * rest);
        for (Eigen::Index i0 = 0; i0 < d[0]; ++i0)
            for (Eigen::Index im = 0; im < dm; ++im)
                for (Eigen::Index in = 0; in < dn; ++in) {
                    const Complex w = xm(im, in);
                    next.segment((i0 * dn + in) * rest, rest) += w * t.segment(((i0 * dm + im) * dn + in) * rest, rest);
                }
        t = std::move(next);
    }
    const Eigen::Index last = d[n - 1];
    ComplexMatrix r(d[0], last);
    for (Eigen::Index i = 0; i < d[0]; ++i)
        for (Eigen::Index j = 0; j < last; ++j) r(i, j) = t(i * last + j);
    return rotate_out(ops.front(), r, ops.back());
}

ComplexMatrix separable_apply(const std::vector<NormalOperator>& ops, const std::vector<SeparableTerm>& terms,
                              const std::vector<ComplexMatrix>& args) {
    const std::size_t n = ops.size();
    if (n < 2 || args.size() != n - 1) {
        shape_error("separable_apply", "need n >= 2 operators and n-1 arguments");
    }
    for (std::size_t m = 0; m + 1 < n; ++m) {
        check_arg(args[m], ops[m], ops[m + 1], "separable_apply");
    }
    ComplexMatrix sum = ComplexMatrix::Zero(ops.front().dim(), ops.back().dim());
    for (const auto& term : terms) {
        if (term.size() != n) {
            shape_error("separable_apply", "each term needs one coefficient vector per operator");
        }
        ComplexMatrix acc = apply_function(ops[0], term[0]);
        for (std::size_t m = 1; m < n; ++m) {
            acc = (acc * args[m - 1] * apply_function(ops[m], term[m])).eval();
        }
        sum += acc;
    }
    return sum;
}

SymbolGrid separable_grid(const std::vector<NormalOperator>& ops, const std::vector<SeparableTerm>& terms) {
    std::vector<ComplexVector> axes;
    axes.reserve(ops.size());
    for (const auto& op : ops) axes.push_back(op.eigenvalues());
    SymbolGrid sum = SymbolGrid::constant(axes, 0.0);
    for (const auto& term : terms) {
        sum = sum + elementary_tensor(term, axes);
    }
    return sum;
}

ComplexMatrix doi_via_toi(const NormalOperator& a, const NormalOperator& b, const SymbolGrid& psi,
                          const ComplexMatrix& x, const ComplexMatrix& y, const NormalOperator& c) {
    if (psi.order() != 2) {
        shape_error("doi_via_toi", "symbol must have order 2");
    }
    check_axis(psi, 0, a, "doi_via_toi");
    check_axis(psi, 1, b, "doi_via_toi");
    const SymbolGrid lifted = embed_two_to_three(psi, EmbedPosition::Outer, c.eigenvalues());
    return toi_apply(a, c, b, lifted, x, y);
}

} // namespace schurlab
