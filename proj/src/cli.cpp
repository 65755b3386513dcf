#include "schurlab/cli.hpp"

#include "schurlab/opint.hpp"
#include "schurlab/random.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

#ifndef SCHURLAB_VERSION
#define SCHURLAB_VERSION "0.0.0"
#endif

namespace schurlab::cli {

namespace {

using Clock = std::chrono::steady_clock;

class StageTimer {
public:
    explicit StageTimer(RunReport& report) : report_(report) {}

    template <typename Fn>
    auto operator()(const std::string& stage, Fn&& fn) {
        const auto start = Clock::now();
        if constexpr (std::is_void_v<std::invoke_result_t<Fn>>) {
            fn();
            record(stage, start);
        } else {
            auto result = fn();
            record(stage, start);
            return result;
        }
    }

private:
    void record(const std::string& stage, Clock::time_point start) {
        const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
        report_.timings[stage] = report_.timings.value(stage, 0.0) + seconds;
    }

    RunReport& report_;
};

RunReport new_report(std::string command, std::uint64_t seed = 0) {
    RunReport r;
    r.command = std::move(command);
    r.seed = seed;
    r.tool_version = std::string(tool_version());
    return r;
}

Json load(RunReport& report, const std::string& path) {
    Json j = read_json_file(path);
    report.inputs[path] = file_digest(path);
    return j;
}

NormalOperator load_operator(RunReport& report, const std::string& path) {
    return operator_from_json(load(report, path));
}

ComplexMatrix load_matrix(RunReport& report, const std::string& path) {
    return matrix_from_json(load(report, path));
}

SymbolGrid load_grid(RunReport& report, const std::string& path) {
    return grid_from_json(load(report, path));
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double relative_gap(double lower, double upper) {
    if (upper == 0.0) return lower == 0.0 ? 0.0 : -1.0;
    return (upper - lower) / upper;
}

ComplexMatrix lower_triangular_ones(Eigen::Index n) {
    ComplexMatrix s = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) s(i, j) = 1.0;
    return s;
}

ComplexMatrix sylvester_hadamard(Eigen::Index n) {
    ComplexMatrix h = ComplexMatrix::Ones(1, 1);
    while (h.rows() < n) {
        const Eigen::Index m = h.rows();
        ComplexMatrix next(2 * m, 2 * m);
        next << h, h, h, -h;
        h = std::move(next);
    }
    return h;
}

bool power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

ComplexVector standard_axis(Eigen::Index n) {
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = static_cast<double>(i);
    return v;
}

} // namespace

std::string_view tool_version() { return SCHURLAB_VERSION; }

Json report_to_json(const RunReport& report) {
    return Json{{"command", report.command},   {"inputs", report.inputs},
                {"outputs", report.outputs},   {"timings", report.timings},
                {"seed", report.seed},         {"tool_version", report.tool_version},
                {"exit_code", report.exit_code}};
}

std::string report_to_csv(const RunReport& report) {
    std::string out = "trial,lower,upper,rel_gap\n";
    char line[160];
    for (const auto& row : report.rows) {
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g\n", row.trial, row.lower, row.upper, row.rel_gap);
        out += line;
    }
    return out;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) {
        h ^= static_cast<unsigned char>(*it);
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunReport cmd_eig(const std::string& matrix_path) {
    RunReport report = new_report("eig");
    StageTimer timed(report);
    const ComplexMatrix m = timed("load", [&] { return load_matrix(report, matrix_path); });
    const NormalOperator op = timed("decompose", [&] { return normal_eig(m); });
    report.outputs["operator"] = operator_to_json(op);
    return report;
}

RunReport cmd_doi(const std::string& op_a, const std::string& op_b, const std::string& grid, const std::string& x) {
    RunReport report = new_report("doi");
    StageTimer timed(report);
    const NormalOperator a = timed("load", [&] { return load_operator(report, op_a); });
    const NormalOperator b = timed("load", [&] { return load_operator(report, op_b); });
    const SymbolGrid psi = timed("load", [&] { return load_grid(report, grid); });
    const ComplexMatrix xm = timed("load", [&] { return load_matrix(report, x); });
    const ComplexMatrix r = timed("apply", [&] { return doi_apply(a, b, psi, xm); });
    const double norm = hs_norm(r);
    const double bound = sup_norm(psi) * hs_norm(xm);
    report.outputs["result"] = matrix_to_json(r);
    report.outputs["hs_norm"] = norm;
    report.outputs["contraction_bound"] = bound;
    report.outputs["bound_ok"] = norm <= bound + 1e-10;
    if (!(norm <= bound + 1e-10)) report.exit_code = kExitTolerance;
    return report;
}

RunReport cmd_toi(const std::string& op_a, const std::string& op_b, const std::string& op_c, const std::string& grid,
                  const std::string& x, const std::string& y) {
    RunReport report = new_report("toi");
    StageTimer timed(report);
    const NormalOperator a = timed("load", [&] { return load_operator(report, op_a); });
    const NormalOperator b = timed("load", [&] { return load_operator(report, op_b); });
    const NormalOperator c = timed("load", [&] { return load_operator(report, op_c); });
    const SymbolGrid phi = timed("load", [&] { return load_grid(report, grid); });
    const ComplexMatrix xm = timed("load", [&] { return load_matrix(report, x); });
    const ComplexMatrix ym = timed("load", [&] { return load_matrix(report, y); });
    const ComplexMatrix r = timed("apply", [&] { return toi_apply(a, b, c, phi, xm, ym); });
    const double norm = hs_norm(r);
    const double bound = sup_norm(phi) * hs_norm(xm) * hs_norm(ym);
    const bool bound_ok = norm <= bound + 1e-10;
    report.outputs["result"] = matrix_to_json(r);
    report.outputs["hs_norm"] = norm;
    report.outputs["contraction_bound"] = bound;
    report.outputs["bound_ok"] = bound_ok;
    if (!bound_ok) report.exit_code = kExitTolerance;

    if (phi.order() == 3) {
        if (const auto factors = elementary_factors(phi)) {
            const ComplexMatrix product = timed("product_formula", [&] {
                return ComplexMatrix(apply_function(a, (*factors)[0]) * xm * apply_function(b, (*factors)[1]) * ym *
                                     apply_function(c, (*factors)[2]));
            });
            const double residual = hs_norm(r - product) / std::max(1.0, bound);
            report.outputs["elementary"] = true;
            report.outputs["product_formula_residual"] = residual;
            if (residual > 1e-11) report.exit_code = kExitTolerance;
        } else {
            report.outputs["elementary"] = false;
        }
    }
    return report;
}

RunReport cmd_moi(const std::vector<std::string>& ops, const std::string& grid, const std::vector<std::string>& args) {
    RunReport report = new_report("moi");
    StageTimer timed(report);
    std::vector<NormalOperator> operators;
    std::vector<ComplexMatrix> arguments;
    timed("load", [&] {
        for (const auto& p : ops) operators.push_back(load_operator(report, p));
        for (const auto& p : args) arguments.push_back(load_matrix(report, p));
    });
    const SymbolGrid phi = timed("load", [&] { return load_grid(report, grid); });
    const ComplexMatrix r = timed("apply", [&] { return moi_apply(operators, phi, arguments); });
    double bound = sup_norm(phi);
    for (const auto& x : arguments) bound *= hs_norm(x);
    report.outputs["result"] = matrix_to_json(r);
    report.outputs["hs_norm"] = hs_norm(r);
    report.outputs["contraction_bound"] = bound;
    report.outputs["bound_ok"] = hs_norm(r) <= bound + 1e-10;
    if (!(hs_norm(r) <= bound + 1e-10)) report.exit_code = kExitTolerance;
    return report;
}

RunReport cmd_norm_s2(const std::string& op_a, const std::string& op_b, const std::string& op_c,
                      const std::string& grid) {
    RunReport report = new_report("norm-s2");
    StageTimer timed(report);
    const NormalOperator a = timed("load", [&] { return load_operator(report, op_a); });
    const NormalOperator b = timed("load", [&] { return load_operator(report, op_b); });
    const NormalOperator c = timed("load", [&] { return load_operator(report, op_c); });
    const SymbolGrid phi = timed("load", [&] { return load_grid(report, grid); });
    const NormEstimate est = timed("norm", [&] { return s2s2_to_s2_norm(a, b, c, phi); });
    const double achieved = *est.lower_certificate;
    report.outputs["estimate"] = estimate_to_json(est);
    report.outputs["sup_norm"] = sup_norm(phi);
    report.outputs["witness_objective"] = achieved;
    const bool ok = std::abs(achieved - est.value) <= 1e-12 * std::max(1.0, est.value);
    report.outputs["witness_ok"] = ok;
    if (!ok) report.exit_code = kExitTolerance;
    return report;
}

RunReport cmd_norm_s1(const std::string& op_a, const std::string& op_b, const std::string& op_c,
                      const std::string& grid, const AscentOptions& ascent, double tol) {
    RunReport report = new_report("norm-s1", ascent.seed);
    StageTimer timed(report);
    const NormalOperator a = timed("load", [&] { return load_operator(report, op_a); });
    const NormalOperator b = timed("load", [&] { return load_operator(report, op_b); });
    const NormalOperator c = timed("load", [&] { return load_operator(report, op_c); });
    const SymbolGrid phi = timed("load", [&] { return load_grid(report, grid); });
    NormEstimate lower = timed("ascent", [&] { return s1_bilinear_norm_lower(a, b, c, phi, ascent); });
    const TrilinearFactorization upper = timed("factorization", [&] { return trilinear_factor_norm(phi); });
    lower.upper_certificate = upper.estimate.value;
    const double gap = relative_gap(lower.value, upper.estimate.value);
    report.outputs["estimate"] = estimate_to_json(lower);
    report.outputs["lower"] = lower.value;
    report.outputs["upper"] = upper.estimate.value;
    report.outputs["rel_gap"] = gap;
    report.outputs["slice_gamma2"] = upper.slice_values;
    if (std::abs(gap) > tol) report.exit_code = kExitTolerance;
    return report;
}

RunReport cmd_gamma2(const std::string& matrix_path) {
    RunReport report = new_report("gamma2");
    StageTimer timed(report);
    const ComplexMatrix s = timed("load", [&] { return load_matrix(report, matrix_path); });
    const Gamma2Result g = timed("sdp", [&] { return gamma2(s); });
    report.outputs["value"] = g.estimate.value;
    report.outputs["sdp"] = sdp_to_json(g.sdp);
    if (g.sdp.status != SdpStatus::Optimal) report.exit_code = kExitTolerance;
    return report;
}

RunReport cmd_factor(const std::string& path) {
    RunReport report = new_report("factor");
    StageTimer timed(report);
    const Json doc = timed("load", [&] { return load(report, path); });
    if (doc.is_object() && doc.contains("order")) {
        const SymbolGrid m = grid_from_json(doc);
        const TrilinearFactorization t = timed("factorization", [&] { return trilinear_factor_norm(m); });
        const double rel = t.factors.residual / std::max(sup_norm(m), 1e-300);
        report.outputs["value"] = t.estimate.value;
        report.outputs["slice_gamma2"] = t.slice_values;
        report.outputs["factorization"] = factorization_to_json(t.factors);
        report.outputs["relative_residual"] = rel;
        const bool ok = rel <= 1e-5 && t.factors.norm_a * t.factors.norm_b <= t.estimate.value + 1e-5;
        if (!ok || !t.estimate.converged) report.exit_code = kExitTolerance;
    } else {
        const ComplexMatrix s = matrix_from_json(doc);
        const Gamma2Result g = timed("sdp", [&] { return gamma2(s); });
        const FactorizationPair f =
            timed("factorization", [&] { return recover_factorization(g.sdp.gram, s.rows(), s.cols()); });
        report.outputs["value"] = g.estimate.value;
        report.outputs["factorization"] = factorization_to_json(f);
        const double scale = std::max(hs_norm(s), 1e-300);
        report.outputs["relative_residual"] = f.residual / scale;
        const bool ok = f.residual <= 1e-6 * scale && f.norm_a * f.norm_b <= g.estimate.value + 1e-6;
        if (!ok || g.sdp.status != SdpStatus::Optimal) report.exit_code = kExitTolerance;
    }
    return report;
}

RunReport cmd_verify_main(const VerifyMainOptions& options) {
    for (auto d : options.dims) {
        if (d < 1) throw Error(ErrorCode::ShapeMismatch, "verify-main: dimensions must be positive");
        if (d > 4 && !options.allow_large) {
            throw Error(ErrorCode::BudgetExceeded, "verify-main: dimension " + std::to_string(d) +
                                                       " exceeds the default budget of 4");
        }
    }
    if (options.trials < 1 || options.restarts < 1) {
        throw Error(ErrorCode::ShapeMismatch, "verify-main: trials and restarts must be positive");
    }
    RunReport report = new_report("verify-main", options.seed);
    StageTimer timed(report);
    Json trials = Json::array();
    double max_gap = 0.0;
    bool ok = true;
    for (int t = 0; t < options.trials; ++t) {
        const std::uint64_t trial_seed = splitmix(options.seed + static_cast<std::uint64_t>(t));
        Rng rng(trial_seed);
        const NormalOperator a = random_normal_operator(options.dims[0], rng);
        const NormalOperator b = random_normal_operator(options.dims[1], rng);
        const NormalOperator c = random_normal_operator(options.dims[2], rng);
        std::vector<ComplexVector> axes{a.eigenvalues(), b.eigenvalues(), c.eigenvalues()};
        const SymbolGrid phi = options.ones ? SymbolGrid::constant(axes, 1.0)
                                            : random_grid(axes, rng, options.complex_values);
        AscentOptions ascent;
        ascent.restarts = options.restarts;
        ascent.seed = trial_seed;
        const NormEstimate lower = timed("ascent", [&] { return s1_bilinear_norm_lower(a, b, c, phi, ascent); });
        const TrilinearFactorization upper = timed("factorization", [&] { return trilinear_factor_norm(phi); });
        const double gap = relative_gap(lower.value, upper.estimate.value);
        max_gap = std::max(max_gap, std::abs(gap));
        const bool trial_ok = std::abs(gap) <= options.tol;
        ok = ok && trial_ok;
        report.rows.push_back({t, lower.value, upper.estimate.value, gap});
        trials.push_back({{"trial", t},
                          {"lower", lower.value},
                          {"upper", upper.estimate.value},
                          {"rel_gap", gap},
                          {"converged", lower.converged && upper.estimate.converged},
                          {"sup_norm", sup_norm(phi)},
                          {"ok", trial_ok}});
    }
    report.outputs["dims"] = options.dims;
    report.outputs["restarts"] = options.restarts;
    report.outputs["tol"] = options.tol;
    report.outputs["distribution"] =
        options.ones ? "ones" : (options.complex_values ? "complex-unit-disk" : "uniform[-1,1]");
    report.outputs["trials"] = std::move(trials);
    report.outputs["max_rel_gap"] = max_gap;
    report.outputs["all_ok"] = ok;
    if (!ok) report.exit_code = kExitTolerance;
    return report;
}

RunReport cmd_examples(const ExamplesOptions& options) {
    if (options.n < 1 || options.n > 16) {
        throw Error(ErrorCode::BudgetExceeded, "examples: n must lie in [1, 16]");
    }
    RunReport report = new_report("examples", options.seed);
    StageTimer timed(report);
    Rng rng(options.seed);
    const Eigen::Index n = options.n;
    const ComplexVector axis = standard_axis(n);
    const NormalOperator diag = NormalOperator::diagonal(axis);
    bool ok = true;

    if (options.which == "ex1") {
        ComplexMatrix s(n, n);
        for (Eigen::Index j = 0; j < n; ++j) s.col(j) = random_uniform_values(n, rng);
        SymbolGrid m = SymbolGrid::constant({axis, axis, axis}, 0.0);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index k = 0; k < n; ++k)
                for (Eigen::Index j = 0; j < n; ++j) m(i, k, j) = s(k, j);
        const ComplexMatrix x = random_unit_hs(n, n, rng);
        const ComplexMatrix y = random_unit_hs(n, n, rng);
        const double residual = timed("identity", [&] {
            return hs_norm(toi_apply(diag, diag, diag, m, x, y) - x * s.cwiseProduct(y));
        });
        const TrilinearFactorization t = timed("factorization", [&] { return trilinear_factor_norm(m); });
        const double sup_s = s.cwiseAbs().maxCoeff();
        report.outputs["S"] = matrix_to_json(s);
        report.outputs["identity_residual"] = residual;
        report.outputs["trilinear_factor_norm"] = t.estimate.value;
        report.outputs["max_abs_s"] = sup_s;
        report.outputs["slice_gamma2"] = t.slice_values;
        ok = residual <= 1e-11 && std::abs(t.estimate.value - sup_s) <= 1e-6;
    } else if (options.which == "ex2") {
        ComplexMatrix s;
        std::string source;
        if (options.matrix_path) {
            s = load_matrix(report, *options.matrix_path);
            if (s.rows() != s.cols()) throw Error(ErrorCode::ShapeMismatch, "examples: S must be square");
            source = "file";
        } else if (power_of_two(n)) {
            s = sylvester_hadamard(n);
            source = "hadamard";
        } else {
            s = lower_triangular_ones(n);
            source = "lower-triangular-ones";
        }
        const Eigen::Index d = s.rows();
        const ComplexVector ax = standard_axis(d);
        const NormalOperator dd = NormalOperator::diagonal(ax);
        SymbolGrid m = SymbolGrid::constant({ax, ax, ax}, 0.0);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) m(i, 0, j) = s(i, j);
        const ComplexMatrix x = random_unit_hs(d, d, rng);
        const ComplexMatrix y = random_unit_hs(d, d, rng);
        const double residual = timed("identity", [&] {
            const ComplexMatrix expected = s.cwiseProduct(x.col(0) * y.row(0));
            return hs_norm(toi_apply(dd, dd, dd, m, x, y) - expected);
        });
        const TrilinearFactorization t = timed("factorization", [&] { return trilinear_factor_norm(m); });
        const Gamma2Result g = timed("gamma2", [&] { return gamma2(s); });
        Json growth = Json::array();
        double previous = 0.0;
        bool increasing = true;
        timed("growth", [&] {
            for (Eigen::Index k : {2, 4, 8, 16}) {
                const double v = gamma2(lower_triangular_ones(k)).estimate.value;
                growth.push_back({{"n", k}, {"gamma2", v}, {"max_abs_s", 1.0}});
                increasing = increasing && v > previous;
                previous = v;
            }
        });
        report.outputs["S_source"] = source;
        report.outputs["S"] = matrix_to_json(s);
        report.outputs["identity_residual"] = residual;
        report.outputs["trilinear_factor_norm"] = t.estimate.value;
        report.outputs["gamma2"] = g.estimate.value;
        report.outputs["sup_norm"] = sup_norm(m);
        report.outputs["growth_lower_triangular"] = std::move(growth);
        report.outputs["growth_strictly_increasing"] = increasing;
        ok = residual <= 1e-11 && std::abs(t.estimate.value - g.estimate.value) <= 1e-6 && increasing;
    } else {
        throw Error(ErrorCode::ParseError, "examples: unknown example '" + options.which + "' (ex1 or ex2)");
    }
    report.outputs["example"] = options.which;
    report.outputs["ok"] = ok;
    if (!ok) report.exit_code = kExitTolerance;
    return report;
}

RunReport cmd_peller(const std::string& op_a, const std::string& op_b, const std::string& grid,
                     const AscentOptions& ascent, double tol) {
    RunReport report = new_report("peller", ascent.seed);
    StageTimer timed(report);
    const NormalOperator a = timed("load", [&] { return load_operator(report, op_a); });
    const NormalOperator b = timed("load", [&] { return load_operator(report, op_b); });
    const SymbolGrid psi = timed("load", [&] { return load_grid(report, grid); });
    if (psi.order() != 2) throw Error(ErrorCode::ShapeMismatch, "peller: symbol must have order 2");

    const NormEstimate est = timed("ascent", [&] { return doi_s1_norm(a, b, psi, ascent); });
    const double upper = *est.upper_certificate;
    const double gap = relative_gap(est.value, upper);

    const Gamma2Result g = timed("gamma2", [&] { return gamma2(psi.as_matrix()); });
    const FactorizationPair f = timed("factorization", [&] {
        return recover_factorization(g.sdp.gram, psi.extent(0), psi.extent(1));
    });
    const double sup = std::max(sup_norm(psi), 1e-300);
    const double fact_residual = f.residual / sup;

    Rng rng(splitmix(ascent.seed));
    const NormalOperator c = random_normal_operator(a.dim(), rng);
    const ComplexMatrix x = random_unit_hs(a.dim(), c.dim(), rng);
    const ComplexMatrix y = random_unit_hs(c.dim(), b.dim(), rng);
    const double reduction = timed("reduction", [&] {
        return hs_norm(doi_via_toi(a, b, psi, x, y, c) - doi_apply(a, b, psi, x * y)) / std::max(1.0, sup);
    });

    report.outputs["estimate"] = estimate_to_json(est);
    report.outputs["lower"] = est.value;
    report.outputs["upper"] = upper;
    report.outputs["rel_gap"] = gap;
    report.outputs["factorization"] = factorization_to_json(f);
    report.outputs["factorization_residual"] = fact_residual;
    report.outputs["factorization_norm_product"] = f.norm_a * f.norm_b;
    report.outputs["reduction_residual"] = reduction;
    const bool ok = std::abs(gap) <= tol && fact_residual <= 1e-5 && f.norm_a * f.norm_b <= g.estimate.value + 1e-5 &&
                    reduction <= 1e-11;
    report.outputs["ok"] = ok;
    if (!ok) report.exit_code = kExitTolerance;
    return report;
}

} // namespace schurlab::cli
