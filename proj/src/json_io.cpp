#include "schurlab/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace schurlab {

namespace {

[[noreturn]] void parse_error(const std::string& what) {
    throw Error(ErrorCode::ParseError, what);
}

const Json& field(const Json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key)) {
        parse_error(std::string(where) + ": missing field \"" + key + "\"");
    }
    return j.at(key);
}

Eigen::Index count_field(const Json& j, const char* key, const char* where) {
    const Json& v = field(j, key, where);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        parse_error(std::string(where) + ": \"" + key + "\" must be a nonnegative integer");
    }
    return static_cast<Eigen::Index>(v.get<long long>());
}

double number(const Json& v, const char* where) {
    if (!v.is_number()) parse_error(std::string(where) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) parse_error(std::string(where) + ": non-finite number");
    return x;
}

RealVector number_list(const Json& v, const char* where) {
    if (!v.is_array()) parse_error(std::string(where) + ": expected an array");
    RealVector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = number(v[i], where);
    return out;
}

Eigen::MatrixXd nested_rows(const Json& v, Eigen::Index rows, Eigen::Index cols, const char* where) {
    if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != rows) {
        parse_error(std::string(where) + ": expected " + std::to_string(rows) + " rows");
    }
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const RealVector row = number_list(v[static_cast<std::size_t>(i)], where);
        if (row.size() != cols) parse_error(std::string(where) + ": row " + std::to_string(i) + " has wrong length");
        m.row(i) = row.transpose();
    }
    return m;
}

Json real_rows(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json real_list(const RealVector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

ComplexVector complex_list(const Json& re, const Json& im, const char* where) {
    const RealVector r = number_list(re, where);
    const RealVector i = number_list(im, where);
    if (r.size() != i.size()) parse_error(std::string(where) + ": real and imaginary parts differ in length");
    ComplexVector out(r.size());
    for (Eigen::Index k = 0; k < r.size(); ++k) out(k) = Complex(r(k), i(k));
    return out;
}

} // namespace

Json matrix_to_json(const ComplexMatrix& m) {
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", real_rows(m.real())}, {"im", real_rows(m.imag())}};
}

ComplexMatrix matrix_from_json(const Json& j) {
    const Eigen::Index rows = count_field(j, "rows", "ComplexMatrix");
    const Eigen::Index cols = count_field(j, "cols", "ComplexMatrix");
    const Eigen::MatrixXd re = nested_rows(field(j, "re", "ComplexMatrix"), rows, cols, "ComplexMatrix.re");
    const Eigen::MatrixXd im = nested_rows(field(j, "im", "ComplexMatrix"), rows, cols, "ComplexMatrix.im");
    ComplexMatrix m(rows, cols);
    m.real() = re;
    m.imag() = im;
    return m;
}

Json vector_to_json(const ComplexVector& v) {
    return Json{{"re", real_list(v.real())}, {"im", real_list(v.imag())}};
}

Json grid_to_json(const SymbolGrid& g) {
    Json axes_re = Json::array(), axes_im = Json::array(), shape = Json::array();
    for (const auto& a : g.axes()) {
        axes_re.push_back(real_list(a.real()));
        axes_im.push_back(real_list(a.imag()));
        shape.push_back(a.size());
    }
    return Json{{"order", g.order()},
                {"axes_re", std::move(axes_re)},
                {"axes_im", std::move(axes_im)},
                {"shape", std::move(shape)},
                {"values_re", real_list(g.values().real())},
                {"values_im", real_list(g.values().imag())}};
}

SymbolGrid grid_from_json(const Json& j) {
    const Eigen::Index order = count_field(j, "order", "SymbolGrid");
    const Json& axes_re = field(j, "axes_re", "SymbolGrid");
    const Json& axes_im = field(j, "axes_im", "SymbolGrid");
    const Json& shape = field(j, "shape", "SymbolGrid");
    if (order < 1) parse_error("SymbolGrid: order must be at least 1");
    const auto n = static_cast<std::size_t>(order);
    if (!axes_re.is_array() || !axes_im.is_array() || !shape.is_array() || axes_re.size() != n ||
        axes_im.size() != n || shape.size() != n) {
        parse_error("SymbolGrid: axes_re, axes_im and shape must each have \"order\" entries");
    }
    std::vector<ComplexVector> axes;
    for (std::size_t m = 0; m < n; ++m) {
        axes.push_back(complex_list(axes_re[m], axes_im[m], "SymbolGrid.axes"));
        if (!shape[m].is_number_integer() || shape[m].get<long long>() != axes.back().size()) {
            parse_error("SymbolGrid: shape entry " + std::to_string(m) + " does not match its axis");
        }
    }
    ComplexVector values =
        complex_list(field(j, "values_re", "SymbolGrid"), field(j, "values_im", "SymbolGrid"), "SymbolGrid.values");
    try {
        return SymbolGrid(std::move(axes), std::move(values));
    } catch (const Error& e) {
        parse_error(e.what());
    }
}

Json operator_to_json(const NormalOperator& op) {
    return Json{{"dim", op.dim()},
                {"matrix", matrix_to_json(op.matrix())},
                {"eigenvalues_re", real_list(op.eigenvalues().real())},
                {"eigenvalues_im", real_list(op.eigenvalues().imag())},
                {"eigenbasis", matrix_to_json(op.eigenbasis())},
                {"residuals",
                 {{"normality", normality_defect(op.matrix())},
                  {"orthogonality", op.orthogonality_residual()},
                  {"reconstruction", op.reconstruction_residual()}}}};
}

NormalOperator operator_from_json(const Json& j) {
    if (j.is_object() && j.contains("eigenbasis")) {
        const ComplexMatrix basis = matrix_from_json(j.at("eigenbasis"));
        const ComplexVector lambda = complex_list(field(j, "eigenvalues_re", "NormalOperator"),
                                                  field(j, "eigenvalues_im", "NormalOperator"), "NormalOperator");
        return NormalOperator::from_spectrum(basis, lambda);
    }
    return normal_eig(matrix_from_json(j));
}

Json estimate_to_json(const NormEstimate& e) {
    Json witness = Json::object();
    for (const auto& [name, m] : e.witness) witness[name] = matrix_to_json(m);
    Json out{{"value", e.value},
             {"upper_certificate", e.upper_certificate ? Json(*e.upper_certificate) : Json(nullptr)},
             {"converged", e.converged},
             {"restarts_used", e.restarts_used},
             {"witness", std::move(witness)}};
    if (e.lower_certificate) out["lower_certificate"] = *e.lower_certificate;
    return out;
}

Json factorization_to_json(const FactorizationPair& f) {
    Json a = Json::array(), b = Json::array();
    for (Eigen::Index i = 0; i < f.rows; ++i)
        for (Eigen::Index k = 0; k < f.mids; ++k) {
            Json v = vector_to_json(f.a_at(i, k));
            v["i"] = i;
            v["k"] = k;
            a.push_back(std::move(v));
        }
    for (Eigen::Index jj = 0; jj < f.cols; ++jj)
        for (Eigen::Index k = 0; k < f.mids; ++k) {
            Json v = vector_to_json(f.b_at(jj, k));
            v["j"] = jj;
            v["k"] = k;
            b.push_back(std::move(v));
        }
    return Json{{"hilbert_dim", f.hilbert_dim}, {"rows", f.rows},         {"mids", f.mids},
                {"cols", f.cols},               {"norm_a", f.norm_a},     {"norm_b", f.norm_b},
                {"residual", f.residual},       {"a", std::move(a)},      {"b", std::move(b)}};
}

Json sdp_to_json(const SdpSolution& s) {
    return Json{{"value", s.value},
                {"lower_bound", s.lower_bound},
                {"duality_gap", s.duality_gap},
                {"feasibility_residual", s.feasibility_residual},
                {"iterations", s.iterations},
                {"status", std::string(to_string(s.status))},
                {"gram", matrix_to_json(s.gram)}};
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) parse_error("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        parse_error(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << j.dump(2) << '\n';
}

} // namespace schurlab
