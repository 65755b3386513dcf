// json_io.hpp - JSON schemas for matrices, operators, grids and reports.
//
//   ComplexMatrix  {"rows": n, "cols": m, "re": [[...]], "im": [[...]]}
//   SymbolGrid     {"order": n, "axes_re": [[...]], "axes_im": [[...]], "shape": [...],
//                   "values_re": [...], "values_im": [...]}   (values flat, row-major)
//
// Both real and imaginary parts are mandatory; a missing part is a ParseError.

#pragma once

#include "schurlab/linalg.hpp"
#include "schurlab/norms.hpp"
#include "schurlab/sdp.hpp"
#include "schurlab/symbols.hpp"

#include <json.hpp>

#include <string>

namespace schurlab {

using Json = nlohmann::json;

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json vector_to_json(const ComplexVector& v); // {"re": [...], "im": [...]}

Json grid_to_json(const SymbolGrid& g);
SymbolGrid grid_from_json(const Json& j);

/// {"dim", "matrix", "eigenvalues_re", "eigenvalues_im", "eigenbasis", "residuals": {...}}
Json operator_to_json(const NormalOperator& op);
/// Accepts either an operator document (spectral data taken as given) or a
/// plain matrix, which is decomposed by normal_eig.
NormalOperator operator_from_json(const Json& j);

Json estimate_to_json(const NormEstimate& e);
Json factorization_to_json(const FactorizationPair& f);
Json sdp_to_json(const SdpSolution& s);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

} // namespace schurlab
