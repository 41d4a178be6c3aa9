#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "panelcap/geometry.hpp"

namespace panelcap {

// ---------------------------------------------------------------------------
// Brute-force evaluation of the quadruple integral, used to validate every
// analytic kernel. Two routes: tensor-product Gauss-Legendre quadrature for
// separated pairs (smooth integrand, geometric convergence) and plain Monte
// Carlo for touching/overlapping/self pairs where the 1/r singularity sits
// inside the domain.
// ---------------------------------------------------------------------------

struct QuadratureSpec {
    int initial_points = 4;   ///< Gauss-Legendre points per axis at level 0
    int max_levels = 6;       ///< points double each level
    double rel_tol = 1e-10;   ///< stop when successive estimates agree this well

    void validate() const;
};

enum class OracleMethod { TensorQuadrature, MonteCarlo };

struct OracleEstimate {
    double value = 0.0;           ///< I-form, m^3
    double error_estimate = 0.0;  ///< same units; see each oracle for meaning
    OracleMethod method = OracleMethod::TensorQuadrature;
};

/// Thrown when quadrature fails to reach tolerance within max_levels;
/// carries the best estimate obtained.
class OracleConvergenceError : public NumericsError {
  public:
    OracleConvergenceError(const std::string& what, OracleEstimate best)
        : NumericsError(what), best_estimate(best) {}
    OracleEstimate best_estimate;
};

/// Converts an I-form value (m^3) to a coupling coefficient (1/farad).
double oracle_P_from_I(double I, double area1, double area2);

/// Nested Gauss-Legendre evaluation of the quadruple integral for a
/// separated ParallelOffset or Perpendicular pair, doubling points per axis
/// until two successive estimates agree to rel_tol. error_estimate is the
/// last successive difference. Touching pairs (gap <= 1e-6 * scale) are
/// rejected; use mc_oracle for those.
OracleEstimate quad_oracle(const CanonicalPair& pair, const QuadratureSpec& spec = {});

/// One tensor Gauss-Legendre estimate of I at a fixed point count per axis
/// (the building block quad_oracle refines).
double tensor_quadrature_I(const CanonicalPair& pair, int points_per_axis);

/// Monte Carlo mean of 1/r over uniformly sampled point pairs, any relation.
/// value = mean * S1 * S2 * sqrt(pi)/2; error_estimate = 3 standard errors.
/// Deterministically seeded (see VerificationReport::rng for the generator
/// identifier); the same seed reproduces the estimate bit for bit.
OracleEstimate mc_oracle(const CanonicalPair& pair, std::uint64_t samples, std::uint64_t seed);

/// Shortest distance between the two rectangles of a canonical pair.
double pair_min_gap(const CanonicalPair& pair);

// ---------------------------------------------------------------------------
// Randomized kernel verification
// ---------------------------------------------------------------------------

struct VerificationCase {
    int id = 0;
    PairRelation relation = PairRelation::Skew;
    CanonicalPair pair;
    double analytic = 0.0;
    double oracle = 0.0;
    double error_bound = 0.0;  ///< pass threshold in the units of `analytic`
    OracleMethod method = OracleMethod::TensorQuadrature;
    bool pass = false;
};

struct VerificationReport {
    std::vector<VerificationCase> cases;
    int failures = 0;
    std::string rng = "std::mt19937_64, uniform doubles via (x >> 11) * 2^-53";

    bool all_pass() const { return failures == 0; }
};

struct VerifyOptions {
    int separated_trials = 200;      ///< per relation (parallel, perpendicular)
    int touching_trials = 50;        ///< self / coplanar / shared-edge cases
    std::uint64_t mc_samples = 4'000'000;
    double quad_rel_threshold = 1e-8;
    /// Test hook: multiplies every analytic value by (1 + perturbation)
    /// before comparison, to confirm the harness detects deviations.
    double kernel_perturbation = 0.0;
};

/// Generates randomized parallel, coplanar, perpendicular and self
/// configurations, compares the analytic kernels against the appropriate
/// oracle, and reports per-case errors. Quadrature-checked cases pass at
/// relative error < quad_rel_threshold; Monte-Carlo-checked cases within
/// 3 standard errors, with a case outside the band retried at 4x the
/// samples (twice at most) so statistical flukes resolve while genuine
/// deviations gain significance. Failures are data in the report, not
/// exceptions.
VerificationReport verify_kernels(int trial_count, std::uint64_t seed,
                                  const VerifyOptions& options = {});

/// Serializes a report to the JSON interface format: an array of
/// {case-id, relation, limits, analytic, oracle, error-bound, pass}.
std::string report_to_json(const VerificationReport& report);

}  // namespace panelcap
