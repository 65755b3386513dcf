// cli.hpp - batch commands behind the schurlab executable.
//
// Each command loads its inputs, runs one computation, and returns a
// self-contained RunReport. Exit codes: 0 all checks pass, 2 a tolerance
// check failed, 1 usage or parse error (raised as schurlab::Error).

#pragma once

#include "schurlab/json_io.hpp"
#include "schurlab/norms.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace schurlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitTolerance = 2;

std::string_view tool_version();

struct TrialRow {
    int trial = 0;
    double lower = 0.0;
    double upper = 0.0;
    double rel_gap = 0.0;
};

struct RunReport {
    std::string command;
    Json inputs = Json::object();  // path -> FNV-1a digest of the file bytes
    Json outputs = Json::object();
    Json timings = Json::object(); // stage -> wall-clock seconds
    std::uint64_t seed = 0;
    std::string tool_version;
    int exit_code = kExitOk;
    std::vector<TrialRow> rows; // verify-main only
};

Json report_to_json(const RunReport& report);
/// Header "trial,lower,upper,rel_gap" then one row per trial.
std::string report_to_csv(const RunReport& report);

/// 64-bit FNV-1a of the file contents as 16 hex digits.
std::string file_digest(const std::string& path);

RunReport cmd_eig(const std::string& matrix_path);

RunReport cmd_doi(const std::string& op_a, const std::string& op_b, const std::string& grid, const std::string& x);

RunReport cmd_toi(const std::string& op_a, const std::string& op_b, const std::string& op_c, const std::string& grid,
                  const std::string& x, const std::string& y);

RunReport cmd_moi(const std::vector<std::string>& ops, const std::string& grid, const std::vector<std::string>& args);

RunReport cmd_norm_s2(const std::string& op_a, const std::string& op_b, const std::string& op_c,
                      const std::string& grid);

RunReport cmd_norm_s1(const std::string& op_a, const std::string& op_b, const std::string& op_c,
                      const std::string& grid, const AscentOptions& ascent, double tol = kAgreementTol);

RunReport cmd_gamma2(const std::string& matrix_path);

/// Matrix input: gamma_2 plus the recovered factorization. Order-3 grid input: trilinear factorization.
RunReport cmd_factor(const std::string& path);

struct VerifyMainOptions {
    std::array<Eigen::Index, 3> dims{2, 2, 2};
    int trials = 50;
    int restarts = 64;
    std::uint64_t seed = 0;
    bool complex_values = false;
    bool ones = false;       // all-ones symbol instead of random draws
    double tol = kAgreementTol;
    bool allow_large = false; // lift the dims <= 4 budget
};

RunReport cmd_verify_main(const VerifyMainOptions& options);

struct ExamplesOptions {
    std::string which = "ex1"; // ex1 | ex2
    int n = 3;
    std::uint64_t seed = 0;
    std::optional<std::string> matrix_path; // ex2: use this S instead of the default
};

RunReport cmd_examples(const ExamplesOptions& options);

RunReport cmd_peller(const std::string& op_a, const std::string& op_b, const std::string& grid,
                     const AscentOptions& ascent, double tol = kAgreementTol);

} // namespace schurlab::cli
