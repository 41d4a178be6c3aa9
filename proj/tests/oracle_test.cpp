#include <doctest.h>

#include <cmath>

#include "panelcap/kernels.hpp"
#include "panelcap/oracle.hpp"

using namespace panelcap;

namespace {

CanonicalPair coaxial_squares(double z_c) {
    CanonicalPair p;
    p.relation = PairRelation::ParallelOffset;
    p.limits = {0, 1, 0, 1, 0, 1, 0, 1};
    p.z_c = z_c;
    return p;
}

CanonicalPair self_unit_square() {
    CanonicalPair p;
    p.relation = PairRelation::Self;
    p.limits = {0, 1, 0, 1, 0, 1, 0, 1};
    return p;
}

}  // namespace

TEST_CASE("quad_oracle converges on coaxial unit squares") {
    const OracleEstimate est = quad_oracle(coaxial_squares(1.0));
    CHECK(est.method == OracleMethod::TensorQuadrature);
    CHECK(est.error_estimate < 1e-10 * est.value);
    CHECK(est.value > 0.0);
}

TEST_CASE("quad_oracle estimates agree across tolerance settings") {
    QuadratureSpec loose;
    loose.rel_tol = 1e-6;
    QuadratureSpec tight;
    tight.rel_tol = 1e-10;
    const double a = quad_oracle(coaxial_squares(0.5), loose).value;
    const double b = quad_oracle(coaxial_squares(0.5), tight).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
}

TEST_CASE("quad_oracle recovers the point-charge limit for tiny rectangles") {
    CanonicalPair p;
    p.relation = PairRelation::ParallelOffset;
    p.limits = {0, 1e-3, 0, 1e-3, 0, 1e-3, 0, 1e-3};
    p.z_c = 1.0;
    const OracleEstimate est = quad_oracle(p);
    const double P = oracle_P_from_I(est.value, 1e-6, 1e-6);
    CHECK(PhysicalConstants::four_pi_eps0 * P == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("quad_oracle successive refinements shrink monotonically") {
    const CanonicalPair p = coaxial_squares(0.8);
    double prev_diff = HUGE_VAL;
    double prev = tensor_quadrature_I(p, 4);
    for (int m = 8; m <= 64; m *= 2) {
        const double cur = tensor_quadrature_I(p, m);
        const double diff = std::abs(cur - prev);
        CHECK(diff < prev_diff);
        prev_diff = diff;
        prev = cur;
    }
}

TEST_CASE("quad_oracle rejects touching pairs") {
    // Perpendicular pair sharing an edge: right relation, zero gap.
    CanonicalPair shared_edge;
    shared_edge.relation = PairRelation::Perpendicular;
    shared_edge.limits = {0, 1, 0, 1, 0, 1, 0, 1};
    shared_edge.y_c = 0.0;
    shared_edge.z_c = 0.0;
    CHECK_THROWS_AS((void)quad_oracle(shared_edge), InvalidInput);

    // Self/coplanar relations are outside the quadrature oracle's contract.
    CHECK_THROWS_AS((void)quad_oracle(self_unit_square()), InvalidInput);
}

TEST_CASE("quad_oracle reports non-convergence with its best estimate") {
    QuadratureSpec cramped;
    cramped.initial_points = 2;
    cramped.max_levels = 2;
    cramped.rel_tol = 1e-14;
    try {
        (void)quad_oracle(coaxial_squares(0.3), cramped);
        FAIL("expected OracleConvergenceError");
    } catch (const OracleConvergenceError& e) {
        CHECK(e.best_estimate.value > 0.0);
        CHECK(e.best_estimate.error_estimate > 0.0);
    }
}

TEST_CASE("mc_oracle is reproducible bit for bit") {
    const CanonicalPair p = self_unit_square();
    const OracleEstimate a = mc_oracle(p, 100'000, 42);
    const OracleEstimate b = mc_oracle(p, 100'000, 42);
    CHECK(a.value == b.value);
    CHECK(a.error_estimate == b.error_estimate);
    const OracleEstimate c = mc_oracle(p, 100'000, 43);
    CHECK(a.value != c.value);
}

TEST_CASE("mc_oracle covers the unit-square self constant") {
    const OracleEstimate est = mc_oracle(self_unit_square(), 4'000'000, 2024);
    const double analytic = self_quadruple_I(1.0, 1.0);
    CHECK(std::abs(est.value - analytic) <= est.error_estimate);
    // Mean inverse distance between two uniform points in the unit square.
    CHECK(2.0 * est.value / kSqrtPi == doctest::Approx(2.973209598).epsilon(2e-3));
}

TEST_CASE("mc_oracle rejects undersampled runs") {
    CHECK_THROWS_AS((void)mc_oracle(self_unit_square(), 9'999, 1), InvalidInput);
}

TEST_CASE("oracles agree with each other on separated pairs") {
    const CanonicalPair p = coaxial_squares(0.6);
    const OracleEstimate q = quad_oracle(p);
    const OracleEstimate m = mc_oracle(p, 2'000'000, 555);
    CHECK(std::abs(q.value - m.value) <= m.error_estimate + q.error_estimate);
}

TEST_CASE("verify_kernels passes on a small randomized batch") {
    VerifyOptions opt;
    opt.touching_trials = 6;
    opt.mc_samples = 1'000'000;
    const VerificationReport report = verify_kernels(12, 7777, opt);
    CHECK(report.cases.size() == 12u + 12u + 6u);
    CHECK(report.failures == 0);
    CHECK(report.all_pass());

    // Same seed reproduces the exact case list.
    const VerificationReport again = verify_kernels(12, 7777, opt);
    REQUIRE(again.cases.size() == report.cases.size());
    for (std::size_t i = 0; i < report.cases.size(); ++i) {
        CHECK(report.cases[i].relation == again.cases[i].relation);
        CHECK(report.cases[i].analytic == again.cases[i].analytic);
        CHECK(report.cases[i].oracle == again.cases[i].oracle);
    }
}

TEST_CASE("verify_kernels flags a perturbed kernel") {
    VerifyOptions opt;
    opt.touching_trials = 2;
    opt.mc_samples = 500'000;
    opt.kernel_perturbation = 1e-6;  // above the 1e-8 quadrature threshold
    const VerificationReport report = verify_kernels(8, 31337, opt);
    CHECK_FALSE(report.all_pass());
    int quad_failures = 0;
    for (const auto& vc : report.cases)
        if (vc.method == OracleMethod::TensorQuadrature && !vc.pass) ++quad_failures;
    CHECK(quad_failures == 16);
}

TEST_CASE("verification report serializes to the JSON interface") {
    VerifyOptions opt;
    opt.touching_trials = 1;
    opt.mc_samples = 100'000;
    const VerificationReport report = verify_kernels(2, 99, opt);
    const std::string json = report_to_json(report);
    CHECK(json.find("\"case-id\"") != std::string::npos);
    CHECK(json.find("\"relation\"") != std::string::npos);
    CHECK(json.find("\"limits\"") != std::string::npos);
    CHECK(json.find("\"analytic\"") != std::string::npos);
    CHECK(json.find("\"oracle\"") != std::string::npos);
    CHECK(json.find("\"error-bound\"") != std::string::npos);
    CHECK(json.find("\"pass\"") != std::string::npos);
    CHECK(json.find("mt19937_64") != std::string::npos);
}
