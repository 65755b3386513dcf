// symbols.hpp - symbols sampled on spectral grids and the tensor algebra on them.

#pragma once

#include "schurlab/linalg.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace schurlab {

/// Order-n complex tensor of symbol values sampled at spectral points.
///
/// Axis m lists one eigenvalue per eigenbasis column of the m-th operator
/// (repeats allowed). Values are stored flat in row-major order: the last
/// index varies fastest.
class SymbolGrid {
public:
    SymbolGrid() = default;
    SymbolGrid(std::vector<ComplexVector> axes, ComplexVector values);

    static SymbolGrid constant(std::vector<ComplexVector> axes, Complex value);
    /// Order-2 grid whose values are the entries of m.
    static SymbolGrid from_matrix(ComplexVector rows_axis, ComplexVector cols_axis, const ComplexMatrix& m);

    std::size_t order() const { return axes_.size(); }
    const std::vector<ComplexVector>& axes() const { return axes_; }
    const ComplexVector& axis(std::size_t m) const { return axes_[m]; }
    const std::vector<Eigen::Index>& shape() const { return shape_; }
    Eigen::Index extent(std::size_t m) const { return shape_[m]; }
    Eigen::Index size() const { return values_.size(); }

    const ComplexVector& values() const { return values_; }
    ComplexVector& values() { return values_; }

    Eigen::Index flat_index(std::span<const Eigen::Index> idx) const;
    Complex at(std::span<const Eigen::Index> idx) const { return values_(flat_index(idx)); }

    Complex operator()(Eigen::Index i, Eigen::Index j) const { return values_(i * shape_[1] + j); }
    Complex operator()(Eigen::Index i, Eigen::Index k, Eigen::Index j) const {
        return values_((i * shape_[1] + k) * shape_[2] + j);
    }
    Complex& operator()(Eigen::Index i, Eigen::Index j) { return values_(i * shape_[1] + j); }
    Complex& operator()(Eigen::Index i, Eigen::Index k, Eigen::Index j) {
        return values_((i * shape_[1] + k) * shape_[2] + j);
    }

    /// Values of an order-2 grid as a matrix.
    ComplexMatrix as_matrix() const;

    bool same_axes(const SymbolGrid& other) const;

private:
    std::vector<ComplexVector> axes_;
    std::vector<Eigen::Index> shape_;
    ComplexVector values_;
};

using SymbolFunction = std::function<Complex(std::span<const Complex>)>;

/// values[i1..in] = f(axes1[i1], ..., axesn[in]); EvaluationFailure on non-finite output.
SymbolGrid grid_from_function(const SymbolFunction& f, std::vector<ComplexVector> axes);

double sup_norm(const SymbolGrid& g);

/// values[i1..in] = prod_m f_vectors[m][i_m]
SymbolGrid elementary_tensor(const std::vector<ComplexVector>& f_vectors, std::vector<ComplexVector> axes);

enum class EmbedPosition {
    Left,  // u(t1, t2) on axes (1, 2), constant in t3
    Right, // v(t2, t3) on axes (2, 3), constant in t1
    Outer, // psi(t1, t3) on axes (1, 3), constant in the inserted middle axis
};

SymbolGrid embed_two_to_three(const SymbolGrid& g2, EmbedPosition position, const ComplexVector& third_axis);

SymbolGrid pointwise_product(const SymbolGrid& g, const SymbolGrid& h);
SymbolGrid conjugate(const SymbolGrid& g);

SymbolGrid operator+(const SymbolGrid& g, const SymbolGrid& h);
SymbolGrid operator*(Complex c, const SymbolGrid& g);

/// Factors g as f_1 ⊗ ... ⊗ f_n when it is an elementary tensor within tol · sup_norm(g).
std::optional<std::vector<ComplexVector>> elementary_factors(const SymbolGrid& g, double tol = 1e-12);

/// Slice k of an order-3 grid: M^(k)[i, j] = g3[i, k, j].
std::vector<ComplexMatrix> middle_slices(const SymbolGrid& g3);

/// Inverse of middle_slices for the given axes.
SymbolGrid assemble_middle_slices(const std::vector<ComplexMatrix>& slices, std::vector<ComplexVector> axes);

} // namespace schurlab
