#include "schurlab/random.hpp"

#include <cmath>
#include <numbers>

namespace schurlab {

ComplexMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = Complex(re, im);
        }
    return m;
}

ComplexMatrix random_unit_hs(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    ComplexMatrix m = random_gaussian(rows, cols, rng);
    const double n = m.norm();
    return n > 0.0 ? ComplexMatrix(m / n) : m;
}

ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng) {
    const ComplexMatrix g = random_gaussian(dim, dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) q.col(j) *= r(j, j) / mag;
    }
    return q;
}

NormalOperator random_normal_operator(Eigen::Index dim, Rng& rng, bool real_spectrum) {
    const ComplexMatrix q = random_unitary(dim, rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexVector lambda(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double re = normal(rng);
        const double im = real_spectrum ? 0.0 : normal(rng);
        lambda(i) = Complex(re, im);
    }
    return NormalOperator::from_spectrum(q, lambda);
}

ComplexVector random_uniform_values(Eigen::Index count, Rng& rng, bool complex_values) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> area(0.0, 1.0);
    ComplexVector v(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        if (complex_values) {
            const double r = std::sqrt(area(rng));
            v(i) = std::polar(r, angle(rng));
        } else {
            v(i) = unit(rng);
        }
    }
    return v;
}

SymbolGrid random_grid(std::vector<ComplexVector> axes, Rng& rng, bool complex_values) {
    Eigen::Index n = 1;
    for (const auto& a : axes) n *= a.size();
    return SymbolGrid(std::move(axes), random_uniform_values(n, rng, complex_values));
}

} // namespace schurlab
