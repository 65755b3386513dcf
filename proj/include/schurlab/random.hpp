// random.hpp - seeded random instances: unitaries, normal operators, grids, HS arguments.

#pragma once

#include "schurlab/linalg.hpp"
#include "schurlab/symbols.hpp"

#include <cstdint>
#include <random>

namespace schurlab {

using Rng = std::mt19937_64;

/// Standard complex Gaussian entries.
ComplexMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Gaussian matrix rescaled to unit Hilbert-Schmidt norm.
ComplexMatrix random_unit_hs(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Haar-distributed unitary (QR of a Gaussian matrix with the phase of R's diagonal removed).
ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng);

/// Q diag(lambda) Q* with Haar Q and Gaussian eigenvalues (real when real_spectrum is set).
NormalOperator random_normal_operator(Eigen::Index dim, Rng& rng, bool real_spectrum = false);

/// Entries uniform in [-1, 1], or uniform in the complex unit disk when complex_values is set.
ComplexVector random_uniform_values(Eigen::Index count, Rng& rng, bool complex_values = false);

SymbolGrid random_grid(std::vector<ComplexVector> axes, Rng& rng, bool complex_values = false);

} // namespace schurlab
