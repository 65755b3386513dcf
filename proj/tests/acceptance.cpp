// Acceptance suite: one PASS/FAIL line per criterion, tolerances and time limits fixed here.

#include "oracles.hpp"

#include "schurlab/cli.hpp"
#include "schurlab/norms.hpp"
#include "schurlab/opint.hpp"
#include "schurlab/random.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace schurlab;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double time_limit; // seconds
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

ComplexVector range(Eigen::Index n) {
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = static_cast<double>(i);
    return v;
}

Eigen::Index draw_dim(Rng& rng, Eigen::Index max_dim) {
    return std::uniform_int_distribution<Eigen::Index>(1, max_dim)(rng);
}

Outcome main_equality() {
    cli::VerifyMainOptions small;
    small.dims = {2, 2, 2};
    small.trials = 50;
    small.restarts = 64;
    small.seed = 2024;
    small.tol = 1e-3;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r1 = cli::cmd_verify_main(small);
    const auto t1 = std::chrono::steady_clock::now();

    cli::VerifyMainOptions wide;
    wide.dims = {3, 2, 3};
    wide.trials = 20;
    wide.restarts = 64;
    wide.seed = 2025;
    wide.tol = 3e-3;
    const auto r2 = cli::cmd_verify_main(wide);
    const double s1 = std::chrono::duration<double>(t1 - t0).count();
    const double s2 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();

    const double g1 = r1.outputs["max_rel_gap"].get<double>();
    const double g2 = r2.outputs["max_rel_gap"].get<double>();
    return {r1.exit_code == 0 && r2.exit_code == 0 && g1 <= 1e-3 && g2 <= 3e-3 && s1 <= 120.0 && s2 <= 300.0,
            fmt("(2,2,2) x50 max gap %.2e in %.2fs", g1, s1) + fmt(", (3,2,3) x20 max gap %.2e in %.2fs", g2, s2)};
}

Outcome sign_grid_gate() {
    const NormalOperator d = NormalOperator::diagonal(range(2));
    const std::vector<ComplexVector> axes{range(2), range(2), range(2)};
    AscentOptions opts;
    opts.restarts = 256;
    double worst = 0.0, worst_oracle = 0.0;
    for (int mask = 0; mask < 256; ++mask) {
        SymbolGrid m = SymbolGrid::constant(axes, 0.0);
        for (int c = 0; c < 8; ++c) m.values()(c) = (mask >> c) & 1 ? 1.0 : -1.0;
        opts.seed = static_cast<std::uint64_t>(mask);
        const double lower = s1_bilinear_norm_lower(d, d, d, m, opts).value;
        const double upper = trilinear_factor_norm(m).estimate.value;
        const auto slices = middle_slices(m);
        const double oracle = std::max(oracle::gamma2_2x2(slices[0]), oracle::gamma2_2x2(slices[1]));
        worst = std::max(worst, std::abs(upper - lower) / upper);
        worst_oracle = std::max(worst_oracle, std::abs(upper - oracle) / oracle);
    }
    return {worst <= 1e-3 && worst_oracle <= 1e-6,
            fmt("256 grids, max ascent gap %.2e, max gap to angle-search oracle %.2e", worst, worst_oracle)};
}

Outcome isometry() {
    Rng rng(3);
    double worst = 0.0;
    bool exact = true;
    for (int t = 0; t < 100; ++t) {
        const NormalOperator a = random_normal_operator(draw_dim(rng, 4), rng);
        const NormalOperator b = random_normal_operator(draw_dim(rng, 4), rng);
        const NormalOperator c = random_normal_operator(draw_dim(rng, 4), rng);
        const auto phi = random_grid({a.eigenvalues(), b.eigenvalues(), c.eigenvalues()}, rng, t % 2 == 1);
        const NormEstimate e = s2s2_to_s2_norm(a, b, c, phi);
        const double sup = sup_norm(phi);
        exact = exact && e.value == sup;
        const double achieved = hs_norm(oracle::toi(a, b, c, phi, e.witness.at("X"), e.witness.at("Y")));
        worst = std::max(worst, std::abs(achieved - sup) / sup);
    }
    return {exact && worst <= 1e-12, std::string(exact ? "value equals sup norm on all 100" : "value differs from sup norm") +
                                         fmt(", worst witness error %.2e", worst)};
}

Outcome contraction() {
    Rng rng(4);
    double worst = 1e300;
    for (int t = 0; t < 1000; ++t) {
        const NormalOperator a = random_normal_operator(draw_dim(rng, 6), rng);
        const NormalOperator b = random_normal_operator(draw_dim(rng, 6), rng);
        const NormalOperator c = random_normal_operator(draw_dim(rng, 6), rng);
        const auto phi = random_grid({a.eigenvalues(), b.eigenvalues(), c.eigenvalues()}, rng, true);
        const ComplexMatrix x = random_gaussian(a.dim(), b.dim(), rng), y = random_gaussian(b.dim(), c.dim(), rng);
        const double lhs = hs_norm(toi_apply(a, b, c, phi, x, y));
        const double rhs = sup_norm(phi) * hs_norm(x) * hs_norm(y);
        worst = std::min(worst, (rhs - lhs) / rhs);
    }
    return {worst >= -1e-10, fmt("min relative slack %.3e over 1000 instances", worst)};
}

Outcome product_formula() {
    Rng rng(5);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const NormalOperator a = random_normal_operator(draw_dim(rng, 5), rng);
        const NormalOperator b = random_normal_operator(draw_dim(rng, 5), rng);
        const NormalOperator c = random_normal_operator(draw_dim(rng, 5), rng);
        const auto u = random_grid({a.eigenvalues(), b.eigenvalues()}, rng, true);
        const auto v = random_grid({b.eigenvalues(), c.eigenvalues()}, rng, true);
        const auto uv = pointwise_product(embed_two_to_three(u, EmbedPosition::Left, c.eigenvalues()),
                                          embed_two_to_three(v, EmbedPosition::Right, a.eigenvalues()));
        const ComplexMatrix x = random_unit_hs(a.dim(), b.dim(), rng), y = random_unit_hs(b.dim(), c.dim(), rng);
        const ComplexMatrix lhs = toi_apply(a, b, c, uv, x, y);
        const ComplexMatrix rhs = doi_apply(a, b, u, x) * doi_apply(b, c, v, y);
        worst = std::max(worst, hs_norm(lhs - rhs));
    }
    return {worst <= 1e-11, fmt("max residual %.2e over 200 instances", worst)};
}

Outcome peller_equality() {
    Rng rng(6);
    double worst_gap = 0.0, worst_fact = 0.0, worst_excess = -1e300;
    for (int t = 0; t < 20; ++t) {
        const NormalOperator a = random_normal_operator(3, rng), b = random_normal_operator(3, rng);
        const auto psi = random_grid({a.eigenvalues(), b.eigenvalues()}, rng);
        AscentOptions opts;
        opts.seed = static_cast<std::uint64_t>(t);
        const NormEstimate e = doi_s1_norm(a, b, psi, opts);
        const double upper = *e.upper_certificate;
        worst_gap = std::max(worst_gap, std::abs(upper - e.value) / upper);
        const Gamma2Result g = gamma2(psi.as_matrix());
        const FactorizationPair f = recover_factorization(g.sdp.gram, 3, 3);
        ComplexMatrix rebuilt(3, 3);
        for (Eigen::Index i = 0; i < 3; ++i)
            for (Eigen::Index j = 0; j < 3; ++j) rebuilt(i, j) = f.b_at(j).dot(f.a_at(i));
        worst_fact = std::max(worst_fact, (rebuilt - psi.as_matrix()).cwiseAbs().maxCoeff() / sup_norm(psi));
        worst_excess = std::max(worst_excess, f.norm_a * f.norm_b - g.estimate.value);
    }
    return {worst_gap <= 1e-3 && worst_fact <= 1e-5 && worst_excess <= 1e-5,
            fmt("max gap %.2e, max reconstruction %.2e, max norm-product excess %.2e", worst_gap, worst_fact,
                worst_excess)};
}

Outcome peller_reduction() {
    Rng rng(7);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const NormalOperator a = random_normal_operator(draw_dim(rng, 4), rng);
        const NormalOperator b = random_normal_operator(draw_dim(rng, 4), rng);
        const NormalOperator c = random_normal_operator(draw_dim(rng, 4), rng);
        const auto psi = random_grid({a.eigenvalues(), b.eigenvalues()}, rng, true);
        const ComplexMatrix x = random_unit_hs(a.dim(), c.dim(), rng), y = random_unit_hs(c.dim(), b.dim(), rng);
        worst = std::max(worst, hs_norm(doi_via_toi(a, b, psi, x, y, c) - doi_apply(a, b, psi, x * y)));
    }
    return {worst <= 1e-11, fmt("max residual %.2e over 100 instances", worst)};
}

Outcome example_one() {
    Rng rng(8);
    double worst_identity = 0.0, worst_norm = 0.0, worst_solver = 0.0;
    for (Eigen::Index n = 1; n <= 8; ++n) {
        const ComplexVector ax = range(n);
        const ComplexMatrix s = random_uniform_values(n * n, rng).reshaped(n, n);
        SymbolGrid m = SymbolGrid::constant({ax, ax, ax}, 0.0);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index k = 0; k < n; ++k)
                for (Eigen::Index j = 0; j < n; ++j) m(i, k, j) = s(k, j);
        const ComplexMatrix x = random_unit_hs(n, n, rng), y = random_unit_hs(n, n, rng);
        worst_identity = std::max(worst_identity, hs_norm(bilinear_schur_apply(m, x, y) - x * s.cwiseProduct(y)));
        worst_norm = std::max(worst_norm, std::abs(trilinear_factor_norm(m).estimate.value - s.cwiseAbs().maxCoeff()));
        // the slices are rank one, so gamma2 takes a closed form; run the barrier solver on them as well
        const auto slices = middle_slices(m);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double expect = s.row(k).cwiseAbs().maxCoeff();
            worst_solver = std::max(worst_solver, std::abs(solve_gamma2_sdp(slices[k]).value - expect));
        }
    }
    return {worst_identity <= 1e-11 && worst_norm <= 1e-6 && worst_solver <= 1e-6,
            fmt("n = 1..8, max identity residual %.2e, max |norm - max|s|| %.2e, barrier solver on slices %.2e",
                worst_identity, worst_norm, worst_solver)};
}

Outcome example_two() {
    const ComplexVector ax = range(2);
    ComplexMatrix h(2, 2);
    h << 1, 1, 1, -1;
    SymbolGrid m = SymbolGrid::constant({ax, ax, ax}, 0.0);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j) m(i, 0, j) = h(i, j);
    const double norm = trilinear_factor_norm(m).estimate.value;
    const double sup = sup_norm(m);

    bool increasing = true;
    double previous = 0.0;
    std::string table;
    for (Eigen::Index n : {2, 4, 8, 16}) {
        ComplexMatrix l = ComplexMatrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) l.row(i).head(i + 1).setOnes();
        const double g = gamma2(l).estimate.value;
        increasing = increasing && g > previous;
        previous = g;
        table += fmt(" %.0f:%.4f", static_cast<double>(n), g);
    }
    return {std::abs(norm - std::sqrt(2.0)) <= 1e-5 && sup == 1.0 && increasing,
            fmt("Hadamard norm %.8f, sup %.1f; lower-triangular gamma2", norm, sup) + table};
}

Outcome sdp_golden() {
    double worst_value = 0.0, worst_gap = 0.0, worst_feas = 0.0;
    bool optimal = true;
    auto record = [&](const SdpSolution& s, double expect) {
        worst_value = std::max(worst_value, std::abs(s.value - expect));
        worst_gap = std::max(worst_gap, s.duality_gap);
        worst_feas = std::max(worst_feas, s.feasibility_residual);
        optimal = optimal && s.status == SdpStatus::Optimal;
    };
    for (Eigen::Index n = 1; n <= 16; ++n) record(solve_gamma2_sdp(ComplexMatrix::Identity(n, n)), 1.0);
    for (Eigen::Index n : {1, 2, 4, 8, 16}) record(solve_gamma2_sdp(ComplexMatrix::Ones(n, n)), 1.0);
    Rng rng(10);
    for (int t = 0; t < 20; ++t) {
        const ComplexVector u = random_gaussian(draw_dim(rng, 6), 1, rng);
        const ComplexVector v = random_gaussian(draw_dim(rng, 6), 1, rng);
        record(solve_gamma2_sdp(u * v.adjoint()), u.cwiseAbs().maxCoeff() * v.cwiseAbs().maxCoeff());
    }
    return {optimal && worst_value <= 1e-6 && worst_gap <= 1e-7 && worst_feas <= 1e-8,
            fmt("max value error %.2e, max duality gap %.2e, max feasibility residual %.2e", worst_value, worst_gap,
                worst_feas)};
}

Outcome separable_path() {
    Rng rng(11);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + t % 3;
        std::vector<NormalOperator> ops;
        for (int m = 0; m < n; ++m) ops.push_back(random_normal_operator(draw_dim(rng, 4), rng));
        std::vector<SeparableTerm> terms(static_cast<std::size_t>(1 + t % 4));
        for (auto& term : terms)
            for (const auto& op : ops) term.push_back(random_uniform_values(op.dim(), rng, true));
        std::vector<ComplexMatrix> args;
        for (int m = 0; m + 1 < n; ++m) args.push_back(random_unit_hs(ops[m].dim(), ops[m + 1].dim(), rng));
        const ComplexMatrix lhs = separable_apply(ops, terms, args);
        const ComplexMatrix rhs = moi_apply(ops, separable_grid(ops, terms), args);
        worst = std::max(worst, hs_norm(lhs - rhs));
    }
    return {worst <= 1e-11, fmt("max residual %.2e over 50 symbols", worst)};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "main equality: ascent lower bound vs max slice gamma2", 120.0 + 300.0, main_equality},
        {2, "exhaustive sign-grid gate", 60.0, sign_grid_gate},
        {3, "S2 x S2 -> S2 isometry", 10.0, isometry},
        {4, "Hilbert-Schmidt contraction bound", 30.0, contraction},
        {5, "product formula for split symbols", 10.0, product_formula},
        {6, "S1 norm of double integrals equals gamma2", 120.0, peller_equality},
        {7, "double integral of a product via a triple integral", 10.0, peller_reduction},
        {8, "example one: left multiplication identity", 30.0, example_one},
        {9, "example two: separation from the sup norm", 60.0, example_two},
        {10, "SDP golden values", 60.0, sdp_golden},
        {11, "separable symbols on the multiple-integral path", 30.0, separable_path},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.time_limit;
        const bool pass = out.ok && in_time;
        failures += pass ? 0 : 1;
        std::printf("%s [%2d] %s: %s (%.2fs, limit %.0fs%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    out.detail.c_str(), secs, c.time_limit, in_time ? "" : ", over time");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
