#include "oracles.hpp"

#include "schurlab/random.hpp"
#include "schurlab/sdp.hpp"

#include <doctest.h>

using namespace schurlab;

namespace {

void check_certified(const SdpSolution& s) {
    CHECK(s.status == SdpStatus::Optimal);
    CHECK(s.duality_gap <= 1e-7);
    CHECK(s.feasibility_residual <= 1e-8);
    CHECK(s.lower_bound <= s.value + 1e-12);
}

} // namespace

TEST_CASE("scalar program") {
    const SdpSolution s = solve_gamma2_sdp(ComplexMatrix::Ones(1, 1));
    check_certified(s);
    CHECK(s.value == doctest::Approx(1.0).epsilon(1e-7));
    CHECK((s.gram - ComplexMatrix::Ones(2, 2)).norm() < 1e-6);
}

TEST_CASE("identity and all-ones have gamma_2 equal to one") {
    for (Eigen::Index n : {2, 3, 5, 8, 16}) {
        const SdpSolution id = solve_gamma2_sdp(ComplexMatrix::Identity(n, n));
        check_certified(id);
        CHECK(id.value == doctest::Approx(1.0).epsilon(1e-6));
        const SdpSolution ones = solve_gamma2_sdp(ComplexMatrix::Ones(n, n));
        check_certified(ones);
        CHECK(ones.value == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("2x2 Hadamard agrees with both brute-force oracles") {
    ComplexMatrix h(2, 2);
    h << 1, 1, 1, -1;
    const SdpSolution s = solve_gamma2_sdp(h);
    check_certified(s);
    const double dual = oracle::gamma2_2x2(h);
    const double primal = oracle::gamma2_primal_2x2_real(h.real());
    CHECK(dual == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(primal == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(s.value == doctest::Approx(dual).epsilon(1e-6));
    CHECK(s.value <= primal + 1e-6);
}

TEST_CASE("random 2x2 matrices agree with the angle-search oracle") {
    Rng rng(21);
    for (int t = 0; t < 20; ++t) {
        const ComplexMatrix s = random_gaussian(2, 2, rng);
        const SdpSolution sol = solve_gamma2_sdp(s);
        check_certified(sol);
        CHECK(sol.value == doctest::Approx(oracle::gamma2_2x2(s)).epsilon(1e-6));
    }
}

TEST_CASE("rank-one matrices") {
    Rng rng(22);
    for (int t = 0; t < 10; ++t) {
        const ComplexVector u = random_gaussian(4, 1, rng), v = random_gaussian(3, 1, rng);
        const SdpSolution sol = solve_gamma2_sdp(u * v.adjoint());
        check_certified(sol);
        CHECK(sol.value == doctest::Approx(u.cwiseAbs().maxCoeff() * v.cwiseAbs().maxCoeff()).epsilon(1e-6));
    }
}

TEST_CASE("gram certificate is PSD and carries S off the diagonal") {
    Rng rng(23);
    const ComplexMatrix s = random_gaussian(3, 4, rng);
    const SdpSolution sol = solve_gamma2_sdp(s);
    check_certified(sol);
    CHECK((sol.gram.topRightCorner(3, 4) - s).norm() < 1e-9 * s.norm());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sol.gram);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
    CHECK(sol.gram.diagonal().real().maxCoeff() == doctest::Approx(sol.value).epsilon(1e-12));
    CHECK(gamma2_dual_value(s, sol.row_weights, sol.col_weights) ==
          doctest::Approx(sol.lower_bound).epsilon(1e-12));
}

TEST_CASE("trivial bounds bracket the value") {
    Rng rng(24);
    for (int t = 0; t < 10; ++t) {
        const ComplexMatrix s = random_gaussian(4, 5, rng);
        const SdpSolution sol = solve_gamma2_sdp(s);
        const double lo = s.cwiseAbs().maxCoeff();
        const double hi = std::min(s.rowwise().norm().maxCoeff(), s.colwise().norm().maxCoeff());
        CHECK(sol.value >= lo - 1e-7);
        CHECK(sol.value <= hi + 1e-7);
    }
}

TEST_CASE("budget and breakdown errors") {
    try {
        solve_gamma2_sdp(ComplexMatrix::Ones(200, 57));
        FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetExceeded);
    }
    ComplexMatrix bad = ComplexMatrix::Ones(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(solve_gamma2_sdp(bad), Error);
}
