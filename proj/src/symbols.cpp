#include "schurlab/symbols.hpp"

#include <algorithm>
#include <cmath>

namespace schurlab {

namespace {

std::vector<Eigen::Index> shape_of(const std::vector<ComplexVector>& axes) {
    std::vector<Eigen::Index> shape;
    shape.reserve(axes.size());
    for (const auto& a : axes) {
        shape.push_back(a.size());
    }
    return shape;
}

Eigen::Index volume(const std::vector<Eigen::Index>& shape) {
    Eigen::Index n = 1;
    for (auto s : shape) {
        n *= s;
    }
    return n;
}

// Advances a row-major multi-index; returns false after the last cell.
bool next_index(std::vector<Eigen::Index>& idx, const std::vector<Eigen::Index>& shape) {
    for (std::size_t m = idx.size(); m-- > 0;) {
        if (++idx[m] < shape[m]) {
            return true;
        }
        idx[m] = 0;
    }
    return false;
}

void require_order(const SymbolGrid& g, std::size_t order, const char* where) {
    if (g.order() != order) {
        throw Error(ErrorCode::ShapeMismatch, std::string(where) + ": expected order " + std::to_string(order) +
                                                  ", got " + std::to_string(g.order()));
    }
}

} // namespace

SymbolGrid::SymbolGrid(std::vector<ComplexVector> axes, ComplexVector values)
    : axes_(std::move(axes)), shape_(shape_of(axes_)), values_(std::move(values)) {
    if (axes_.empty()) {
        throw Error(ErrorCode::ShapeMismatch, "SymbolGrid: order must be at least 1");
    }
    if (values_.size() != volume(shape_)) {
        throw Error(ErrorCode::ShapeMismatch, "SymbolGrid: " + std::to_string(values_.size()) +
                                                  " values for a grid of " + std::to_string(volume(shape_)) +
                                                  " cells");
    }
    if (!values_.allFinite()) {
        throw Error(ErrorCode::EvaluationFailure, "SymbolGrid: non-finite value");
    }
}

SymbolGrid SymbolGrid::constant(std::vector<ComplexVector> axes, Complex value) {
    const auto n = volume(shape_of(axes));
    return SymbolGrid(std::move(axes), ComplexVector::Constant(n, value));
}

SymbolGrid SymbolGrid::from_matrix(ComplexVector rows_axis, ComplexVector cols_axis, const ComplexMatrix& m) {
    if (m.rows() != rows_axis.size() || m.cols() != cols_axis.size()) {
        throw Error(ErrorCode::ShapeMismatch, "SymbolGrid::from_matrix: axes do not match the matrix shape");
    }
    ComplexVector values(m.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            values(i * m.cols() + j) = m(i, j);
        }
    }
    return SymbolGrid({std::move(rows_axis), std::move(cols_axis)}, std::move(values));
}

Eigen::Index SymbolGrid::flat_index(std::span<const Eigen::Index> idx) const {
    if (idx.size() != order()) {
        throw Error(ErrorCode::ShapeMismatch, "SymbolGrid: index has wrong order");
    }
    Eigen::Index flat = 0;
    for (std::size_t m = 0; m < idx.size(); ++m) {
        if (idx[m] < 0 || idx[m] >= shape_[m]) {
            throw Error(ErrorCode::ShapeMismatch, "SymbolGrid: index out of range");
        }
        flat = flat * shape_[m] + idx[m];
    }
    return flat;
}

ComplexMatrix SymbolGrid::as_matrix() const {
    require_order(*this, 2, "as_matrix");
    ComplexMatrix m(shape_[0], shape_[1]);
    for (Eigen::Index i = 0; i < shape_[0]; ++i) {
        for (Eigen::Index j = 0; j < shape_[1]; ++j) {
            m(i, j) = (*this)(i, j);
        }
    }
    return m;
}

bool SymbolGrid::same_axes(const SymbolGrid& other) const {
    if (order() != other.order() || shape_ != other.shape_) {
        return false;
    }
    for (std::size_t m = 0; m < order(); ++m) {
        if (axes_[m] != other.axes_[m]) {
            return false;
        }
    }
    return true;
}

SymbolGrid grid_from_function(const SymbolFunction& f, std::vector<ComplexVector> axes) {
    const auto shape = shape_of(axes);
    const auto n = volume(shape);
    ComplexVector values(n);
    if (n > 0) {
        std::vector<Eigen::Index> idx(axes.size(), 0);
        std::vector<Complex> point(axes.size());
        Eigen::Index flat = 0;
        do {
            for (std::size_t m = 0; m < axes.size(); ++m) {
                point[m] = axes[m](idx[m]);
            }
            const Complex v = f(point);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw Error(ErrorCode::EvaluationFailure, "grid_from_function: non-finite value at cell " +
                                                              std::to_string(flat));
            }
            values(flat++) = v;
        } while (next_index(idx, shape));
    }
    return SymbolGrid(std::move(axes), std::move(values));
}

double sup_norm(const SymbolGrid& g) {
    return g.size() == 0 ? 0.0 : g.values().cwiseAbs().maxCoeff();
}

SymbolGrid elementary_tensor(const std::vector<ComplexVector>& f_vectors, std::vector<ComplexVector> axes) {
    if (f_vectors.size() != axes.size()) {
        throw Error(ErrorCode::ShapeMismatch, "elementary_tensor: one vector per axis required");
    }
    for (std::size_t m = 0; m < axes.size(); ++m) {
        if (f_vectors[m].size() != axes[m].size()) {
            throw Error(ErrorCode::ShapeMismatch, "elementary_tensor: vector " + std::to_string(m) +
                                                      " does not match its axis length");
        }
    }
    const auto shape = shape_of(axes);
    const auto n = volume(shape);
    ComplexVector values(n);
    if (n > 0) {
        std::vector<Eigen::Index> idx(axes.size(), 0);
        Eigen::Index flat = 0;
        do {
            Complex v = 1.0;
            for (std::size_t m = 0; m < axes.size(); ++m) {
                v *= f_vectors[m](idx[m]);
            }
            values(flat++) = v;
        } while (next_index(idx, shape));
    }
    return SymbolGrid(std::move(axes), std::move(values));
}

SymbolGrid embed_two_to_three(const SymbolGrid& g2, EmbedPosition position, const ComplexVector& third_axis) {
    require_order(g2, 2, "embed_two_to_three");
    const Eigen::Index p = g2.extent(0);
    const Eigen::Index q = g2.extent(1);
    const Eigen::Index r = third_axis.size();
    switch (position) {
    case EmbedPosition::Left: {
        SymbolGrid out = SymbolGrid::constant({g2.axis(0), g2.axis(1), third_axis}, 0.0);
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index k = 0; k < q; ++k)
                for (Eigen::Index j = 0; j < r; ++j) out(i, k, j) = g2(i, k);
        return out;
    }
    case EmbedPosition::Right: {
        SymbolGrid out = SymbolGrid::constant({third_axis, g2.axis(0), g2.axis(1)}, 0.0);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index k = 0; k < p; ++k)
                for (Eigen::Index j = 0; j < q; ++j) out(i, k, j) = g2(k, j);
        return out;
    }
    case EmbedPosition::Outer: {
        SymbolGrid out = SymbolGrid::constant({g2.axis(0), third_axis, g2.axis(1)}, 0.0);
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index k = 0; k < r; ++k)
                for (Eigen::Index j = 0; j < q; ++j) out(i, k, j) = g2(i, j);
        return out;
    }
    }
    throw Error(ErrorCode::BadPosition, "embed_two_to_three: unknown position");
}

SymbolGrid pointwise_product(const SymbolGrid& g, const SymbolGrid& h) {
    if (!g.same_axes(h)) {
        throw Error(ErrorCode::ShapeMismatch, "pointwise_product: grids have different axes");
    }
    return SymbolGrid(g.axes(), g.values().cwiseProduct(h.values()));
}

SymbolGrid conjugate(const SymbolGrid& g) {
    return SymbolGrid(g.axes(), g.values().conjugate());
}

SymbolGrid operator+(const SymbolGrid& g, const SymbolGrid& h) {
    if (!g.same_axes(h)) {
        throw Error(ErrorCode::ShapeMismatch, "grid sum: grids have different axes");
    }
    return SymbolGrid(g.axes(), g.values() + h.values());
}

SymbolGrid operator*(Complex c, const SymbolGrid& g) {
    return SymbolGrid(g.axes(), c * g.values());
}

std::optional<std::vector<ComplexVector>> elementary_factors(const SymbolGrid& g, double tol) {
    const std::size_t n = g.order();
    std::vector<ComplexVector> factors;
    if (g.size() == 0) return std::nullopt;
    Eigen::Index pivot_flat = 0;
    const double top = g.values().cwiseAbs().maxCoeff(&pivot_flat);
    if (top == 0.0) {
        for (std::size_t m = 0; m < n; ++m) factors.push_back(ComplexVector::Zero(g.extent(m)));
        return factors;
    }
    std::vector<Eigen::Index> pivot(n);
    for (std::size_t m = n, rest = static_cast<std::size_t>(pivot_flat); m-- > 0;) {
        pivot[m] = static_cast<Eigen::Index>(rest % static_cast<std::size_t>(g.extent(m)));
        rest /= static_cast<std::size_t>(g.extent(m));
    }
    // Fiber through the pivot along each axis; the first keeps the pivot value, the rest are normalized by it.
    const Complex pivot_value = g.values()(pivot_flat);
    for (std::size_t m = 0; m < n; ++m) {
        ComplexVector f(g.extent(m));
        std::vector<Eigen::Index> idx = pivot;
        for (Eigen::Index i = 0; i < g.extent(m); ++i) {
            idx[m] = i;
            f(i) = g.at(idx);
        }
        factors.push_back(m == 0 ? f : ComplexVector(f / pivot_value));
    }
    const SymbolGrid rebuilt = elementary_tensor(factors, g.axes());
    if ((rebuilt.values() - g.values()).cwiseAbs().maxCoeff() > tol * top) return std::nullopt;
    return factors;
}

std::vector<ComplexMatrix> middle_slices(const SymbolGrid& g3) {
    require_order(g3, 3, "middle_slices");
    const Eigen::Index p = g3.extent(0);
    const Eigen::Index mid = g3.extent(1);
    const Eigen::Index q = g3.extent(2);
    std::vector<ComplexMatrix> slices(static_cast<std::size_t>(mid), ComplexMatrix(p, q));
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index k = 0; k < mid; ++k)
            for (Eigen::Index j = 0; j < q; ++j) slices[static_cast<std::size_t>(k)](i, j) = g3(i, k, j);
    return slices;
}

SymbolGrid assemble_middle_slices(const std::vector<ComplexMatrix>& slices, std::vector<ComplexVector> axes) {
    if (axes.size() != 3 || static_cast<Eigen::Index>(slices.size()) != axes[1].size()) {
        throw Error(ErrorCode::ShapeMismatch, "assemble_middle_slices: one slice per middle-axis entry required");
    }
    SymbolGrid out = SymbolGrid::constant(std::move(axes), 0.0);
    for (std::size_t k = 0; k < slices.size(); ++k) {
        const auto& s = slices[k];
        if (s.rows() != out.extent(0) || s.cols() != out.extent(2)) {
            throw Error(ErrorCode::ShapeMismatch, "assemble_middle_slices: slice shape mismatch");
        }
        for (Eigen::Index i = 0; i < s.rows(); ++i)
            for (Eigen::Index j = 0; j < s.cols(); ++j) out(i, static_cast<Eigen::Index>(k), j) = s(i, j);
    }
    return out;
}

} // namespace schurlab
