// schurlab - command-line front end for the operator-integral lab.

#include "schurlab/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>

namespace {

using schurlab::cli::RunReport;

struct OutputOptions {
    std::string out;
    std::string format = "json";
};

int emit(const RunReport& report, const OutputOptions& o) {
    std::string text;
    if (o.format == "csv") {
        if (report.rows.empty() && report.command != "verify-main") {
            throw schurlab::Error(schurlab::ErrorCode::ParseError,
                                  "--format csv is only available for verify-main");
        }
        text = schurlab::cli::report_to_csv(report);
    } else {
        text = schurlab::cli::report_to_json(report).dump(2) + "\n";
    }
    if (o.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(o.out);
        if (!f) throw schurlab::Error(schurlab::ErrorCode::ParseError, "cannot write " + o.out);
        f << text;
    }
    return report.exit_code;
}

void add_output(CLI::App* cmd, OutputOptions& o) {
    cmd->add_option("--out", o.out, "Write the report to this file instead of stdout");
    cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
}

void add_ascent(CLI::App* cmd, schurlab::AscentOptions& a, double& tol) {
    cmd->add_option("--seed", a.seed, "Base seed; restart r uses seed xor r");
    cmd->add_option("--restarts", a.restarts, "Ascent restarts")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", a.max_iter, "Sweeps per restart")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", tol, "Relative agreement tolerance");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"schurlab: operator integrals, Schur multipliers and factorization norms"};
    app.set_version_flag("--version", std::string(schurlab::cli::tool_version()));
    app.require_subcommand(1);

    OutputOptions out;
    std::function<RunReport()> run;

    std::string a, b, c, grid, x, y, matrix;
    std::vector<std::string> ops, args;
    schurlab::AscentOptions ascent;
    double tol = schurlab::kAgreementTol;

    auto* eig = app.add_subcommand("eig", "Spectral decomposition of a normal matrix");
    eig->add_option("matrix", matrix, "ComplexMatrix JSON")->required();
    add_output(eig, out);
    eig->callback([&] { run = [&] { return schurlab::cli::cmd_eig(matrix); }; });

    auto* doi = app.add_subcommand("doi", "Apply a double operator integral");
    doi->add_option("--a", a)->required();
    doi->add_option("--b", b)->required();
    doi->add_option("--grid", grid)->required();
    doi->add_option("--x", x)->required();
    add_output(doi, out);
    doi->callback([&] { run = [&] { return schurlab::cli::cmd_doi(a, b, grid, x); }; });

    auto* toi = app.add_subcommand("toi", "Apply a triple operator integral");
    toi->add_option("--a", a)->required();
    toi->add_option("--b", b)->required();
    toi->add_option("--c", c)->required();
    toi->add_option("--grid", grid)->required();
    toi->add_option("--x", x)->required();
    toi->add_option("--y", y)->required();
    add_output(toi, out);
    toi->callback([&] { run = [&] { return schurlab::cli::cmd_toi(a, b, c, grid, x, y); }; });

    auto* moi = app.add_subcommand("moi", "Apply a multiple operator integral");
    moi->add_option("--op", ops, "Operator JSON, once per variable in order")->required();
    moi->add_option("--grid", grid)->required();
    moi->add_option("--arg", args, "Argument matrix JSON, once per slot in order")->required();
    add_output(moi, out);
    moi->callback([&] { run = [&] { return schurlab::cli::cmd_moi(ops, grid, args); }; });

    auto* ns2 = app.add_subcommand("norm-s2", "S2 x S2 -> S2 norm of a triple integral");
    ns2->add_option("--a", a)->required();
    ns2->add_option("--b", b)->required();
    ns2->add_option("--c", c)->required();
    ns2->add_option("--grid", grid)->required();
    add_output(ns2, out);
    ns2->callback([&] { run = [&] { return schurlab::cli::cmd_norm_s2(a, b, c, grid); }; });

    auto* ns1 = app.add_subcommand("norm-s1", "S2 x S2 -> S1 norm: ascent lower bound and factorization upper bound");
    ns1->add_option("--a", a)->required();
    ns1->add_option("--b", b)->required();
    ns1->add_option("--c", c)->required();
    ns1->add_option("--grid", grid)->required();
    add_ascent(ns1, ascent, tol);
    add_output(ns1, out);
    ns1->callback([&] { run = [&] { return schurlab::cli::cmd_norm_s1(a, b, c, grid, ascent, tol); }; });

    auto* g2 = app.add_subcommand("gamma2", "gamma_2 norm of a matrix by semidefinite programming");
    g2->add_option("matrix", matrix, "ComplexMatrix JSON")->required();
    add_output(g2, out);
    g2->callback([&] { run = [&] { return schurlab::cli::cmd_gamma2(matrix); }; });

    auto* factor = app.add_subcommand("factor", "Hilbert-space factorization of a matrix or an order-3 grid");
    factor->add_option("input", matrix, "ComplexMatrix or SymbolGrid JSON")->required();
    add_output(factor, out);
    factor->callback([&] { run = [&] { return schurlab::cli::cmd_factor(matrix); }; });

    schurlab::cli::VerifyMainOptions vm;
    std::vector<Eigen::Index> dims{2, 2, 2};
    std::string dist = "uniform";
    auto* verify = app.add_subcommand("verify-main", "Random trials of ascent lower bound against max slice gamma_2");
    verify->add_option("--dims", dims, "dA dB dC")->expected(3);
    verify->add_option("--trials", vm.trials)->check(CLI::PositiveNumber);
    verify->add_option("--restarts", vm.restarts)->check(CLI::PositiveNumber);
    verify->add_option("--seed", vm.seed);
    verify->add_option("--tol", vm.tol);
    verify->add_option("--grid", dist, "Symbol distribution")->check(CLI::IsMember({"uniform", "ones"}));
    verify->add_flag("--complex", vm.complex_values, "Complex unit-disk entries");
    verify->add_flag("--allow-large", vm.allow_large, "Permit dimensions above 4");
    add_output(verify, out);
    verify->callback([&] {
        run = [&] {
            vm.dims = {dims[0], dims[1], dims[2]};
            vm.ones = dist == "ones";
            return schurlab::cli::cmd_verify_main(vm);
        };
    });

    schurlab::cli::ExamplesOptions ex;
    std::string ex_matrix;
    auto* examples = app.add_subcommand("examples", "Worked examples ex1 and ex2");
    examples->add_option("which", ex.which)->check(CLI::IsMember({"ex1", "ex2"}));
    examples->add_option("-n", ex.n, "Matrix size (at most 16)");
    examples->add_option("--seed", ex.seed);
    examples->add_option("--matrix", ex_matrix, "ex2: square S from a ComplexMatrix JSON");
    add_output(examples, out);
    examples->callback([&] {
        run = [&] {
            if (!ex_matrix.empty()) ex.matrix_path = ex_matrix;
            return schurlab::cli::cmd_examples(ex);
        };
    });

    auto* peller = app.add_subcommand("peller", "S1 norm of a double integral against gamma_2 of its symbol");
    peller->add_option("--a", a)->required();
    peller->add_option("--b", b)->required();
    peller->add_option("--grid", grid)->required();
    add_ascent(peller, ascent, tol);
    add_output(peller, out);
    peller->callback([&] { run = [&] { return schurlab::cli::cmd_peller(a, b, grid, ascent, tol); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : schurlab::cli::kExitUsage;
    }

    try {
        return emit(run(), out);
    } catch (const schurlab::Error& e) {
        std::cerr << "schurlab: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "schurlab: " << e.what() << '\n';
    }
    return schurlab::cli::kExitUsage;
}
