#include "panelcap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "panelcap/kernels.hpp"

namespace panelcap {

void QuadratureSpec::validate() const {
    if (initial_points < 2) throw InvalidInput("quadrature needs at least 2 points per axis");
    if (max_levels < 1) throw InvalidInput("quadrature needs at least 1 level");
    if (!(rel_tol > 0.0)) throw InvalidInput("quadrature tolerance must be positive");
}

double oracle_P_from_I(double I, double area1, double area2) {
    return 2.0 * I / (kSqrtPi * PhysicalConstants::four_pi_eps0 * area1 * area2);
}

namespace {

/// Gauss-Legendre nodes/weights on (-1, 1) by Newton iteration on the
/// three-term Legendre recurrence.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double t = std::cos(PhysicalConstants::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
}

struct MappedRule {
    std::vector<double> x, w;
    MappedRule(int n, double lo, double hi) {
        gauss_legendre(n, x, w);
        const double mid = 0.5 * (lo + hi);
        const double hw = 0.5 * (hi - lo);
        for (int i = 0; i < n; ++i) {
            x[i] = mid + hw * x[i];
            w[i] *= hw;
        }
    }
};

double pair_scale(const CanonicalPair& pair) {
    const RectLimits& L = pair.limits;
    return std::max(std::max(L.a1 - L.a0, L.b1 - L.b0),
                    std::max(L.c1 - L.c0, L.d1 - L.d0));
}

double interval_gap(double lo1, double hi1, double lo2, double hi2) {
    return std::max({0.0, lo2 - hi1, lo1 - hi2});
}

double point_interval_gap(double p, double lo, double hi) {
    return std::max({0.0, lo - p, p - hi});
}

/// Tensor Gauss-Legendre estimate of I with m points per axis.
double tensor_estimate(const CanonicalPair& pair, int m) {
    const RectLimits& L = pair.limits;
    const MappedRule rx1(m, L.a0, L.a1), ry1(m, L.b0, L.b1);
    const MappedRule rx2(m, L.c0, L.c1), rs2(m, L.d0, L.d1);

    // Collapse the four loops into two precomputed m^2 factors: the squared
    // distance separates into a part from (x1, x2) and a part from the
    // remaining two coordinates, for both relations.
    std::vector<double> pa_d2(static_cast<std::size_t>(m) * m);
    std::vector<double> pa_w(pa_d2.size());
    std::vector<double> pb_d2(pa_d2.size());
    std::vector<double> pb_w(pa_d2.size());

    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double dx = rx1.x[i] - rx2.x[j];
            pa_d2[static_cast<std::size_t>(i) * m + j] = dx * dx;
            pa_w[static_cast<std::size_t>(i) * m + j] = rx1.w[i] * rx2.w[j];
        }

    if (pair.relation == PairRelation::ParallelOffset) {
        const double z2 = pair.z_c * pair.z_c;
        for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
                const double dy = ry1.x[k] - rs2.x[l];
                pb_d2[static_cast<std::size_t>(k) * m + l] = dy * dy + z2;
                pb_w[static_cast<std::size_t>(k) * m + l] = ry1.w[k] * rs2.w[l];
            }
    } else {  // Perpendicular
        for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
                const double dy = ry1.x[k] - pair.y_c;
                const double dz = pair.z_c - rs2.x[l];
                pb_d2[static_cast<std::size_t>(k) * m + l] = dy * dy + dz * dz;
                pb_w[static_cast<std::size_t>(k) * m + l] = ry1.w[k] * rs2.w[l];
            }
    }

    const std::size_t nn = pa_d2.size();
    double total = 0.0;
    for (std::size_t a = 0; a < nn; ++a) {
        const double da = pa_d2[a];
        const double wa = pa_w[a];
        double inner = 0.0;
        for (std::size_t b = 0; b < nn; ++b)
            inner += pb_w[b] / std::sqrt(da + pb_d2[b]);
        total += wa * inner;
    }
    return 0.5 * kSqrtPi * total;
}

}  // namespace

double tensor_quadrature_I(const CanonicalPair& pair, int points_per_axis) {
    if (points_per_axis < 2) throw InvalidInput("need at least 2 points per axis");
    if (pair.relation != PairRelation::ParallelOffset &&
        pair.relation != PairRelation::Perpendicular)
        throw InvalidInput("tensor quadrature handles parallel-offset or perpendicular pairs");
    return tensor_estimate(pair, points_per_axis);
}

double pair_min_gap(const CanonicalPair& pair) {
    const RectLimits& L = pair.limits;
    double gx = 0.0, gy = 0.0, gz = 0.0;
    switch (pair.relation) {
        case PairRelation::Self:
            return 0.0;
        case PairRelation::Coplanar:
        case PairRelation::ParallelOffset:
            gx = interval_gap(L.a0, L.a1, L.c0, L.c1);
            gy = interval_gap(L.b0, L.b1, L.d0, L.d1);
            gz = std::abs(pair.z_c);
            break;
        case PairRelation::Perpendicular:
            gx = interval_gap(L.a0, L.a1, L.c0, L.c1);
            gy = point_interval_gap(pair.y_c, L.b0, L.b1);
            gz = point_interval_gap(pair.z_c, L.d0, L.d1);
            break;
        case PairRelation::Skew:
            throw InvalidInput("skew pairs are not supported");
    }
    return std::sqrt(gx * gx + gy * gy + gz * gz);
}

OracleEstimate quad_oracle(const CanonicalPair& pair, const QuadratureSpec& spec) {
    spec.validate();
    if (pair.relation != PairRelation::ParallelOffset &&
        pair.relation != PairRelation::Perpendicular)
        throw InvalidInput("quad_oracle handles separated parallel-offset or perpendicular "
                           "pairs; use mc_oracle for touching, coplanar or self pairs");
    if (pair_min_gap(pair) <= 1e-6 * pair_scale(pair))
        throw InvalidInput("pair is touching or nearly touching; use mc_oracle");

    int m = spec.initial_points;
    double prev = tensor_estimate(pair, m);
    OracleEstimate best{prev, std::abs(prev), OracleMethod::TensorQuadrature};
    for (int level = 1; level < spec.max_levels; ++level) {
        m *= 2;
        const double cur = tensor_estimate(pair, m);
        const double diff = std::abs(cur - prev);
        best = {cur, diff, OracleMethod::TensorQuadrature};
        if (diff <= spec.rel_tol * std::abs(cur)) return best;
        prev = cur;
    }
    std::ostringstream msg;
    msg << "quadrature did not reach relative tolerance " << spec.rel_tol << " within "
        << spec.max_levels << " levels (best estimate " << best.value << ", last difference "
        << best.error_estimate << ")";
    throw OracleConvergenceError(msg.str(), best);
}

namespace {

inline double uniform01(std::mt19937_64& rng) {
    // 53-bit mantissa in [0, 1); keeps the sample stream fully specified.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

}  // namespace

OracleEstimate mc_oracle(const CanonicalPair& pair, std::uint64_t samples, std::uint64_t seed) {
    if (samples < 10'000) throw InvalidInput("mc_oracle needs at least 1e4 samples");
    if (pair.relation == PairRelation::Skew)
        throw InvalidInput("skew pairs are not supported");

    const RectLimits& L = pair.limits;
    const bool perpendicular = pair.relation == PairRelation::Perpendicular;
    std::mt19937_64 rng(seed);

    NeumaierSum sum, sum_sq;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const double x1 = uniform_in(rng, L.a0, L.a1);
        const double y1 = uniform_in(rng, L.b0, L.b1);
        const double x2 = uniform_in(rng, L.c0, L.c1);
        const double s2 = uniform_in(rng, L.d0, L.d1);
        double d2;
        if (perpendicular) {
            const double dx = x1 - x2, dy = y1 - pair.y_c, dz = pair.z_c - s2;
            d2 = dx * dx + dy * dy + dz * dz;
        } else {
            const double dx = x1 - x2, dy = y1 - s2;
            d2 = dx * dx + dy * dy + pair.z_c * pair.z_c;
        }
        const double inv = 1.0 / std::sqrt(d2);
        sum.add(inv);
        sum_sq.add(inv * inv);
    }

    const double n = static_cast<double>(samples);
    const double mean = sum.value() / n;
    const double var = std::max(0.0, (sum_sq.value() - n * mean * mean) / (n - 1.0));
    const double sem = std::sqrt(var / n);
    const double areas = (L.a1 - L.a0) * (L.b1 - L.b0) * (L.c1 - L.c0) * (L.d1 - L.d0);
    const double to_I = 0.5 * kSqrtPi * areas;
    return {mean * to_I, 3.0 * sem * to_I, OracleMethod::MonteCarlo};
}

// ---------------------------------------------------------------------------
// Randomized verification
// ---------------------------------------------------------------------------

namespace {

CanonicalPair random_parallel_pair(std::mt19937_64& rng) {
    CanonicalPair pair;
    pair.relation = PairRelation::ParallelOffset;
    const double wa = uniform_in(rng, 0.2, 1.5), ha = uniform_in(rng, 0.2, 1.5);
    const double wb = uniform_in(rng, 0.2, 1.5), hb = uniform_in(rng, 0.2, 1.5);
    const double ox = uniform_in(rng, -1.0, 1.0), oy = uniform_in(rng, -1.0, 1.0);
    pair.limits = {0.0, wa, 0.0, ha, ox, ox + wb, oy, oy + hb};
    const double scale = pair_scale(pair);
    const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
    pair.z_c = sign * uniform_in(rng, 0.4, 2.0) * scale;
    return pair;
}

CanonicalPair random_perpendicular_pair(std::mt19937_64& rng) {
    CanonicalPair pair;
    pair.relation = PairRelation::Perpendicular;
    const double wa = uniform_in(rng, 0.2, 1.5), ha = uniform_in(rng, 0.2, 1.5);
    const double wb = uniform_in(rng, 0.2, 1.5), hb = uniform_in(rng, 0.2, 1.5);
    const double ox = uniform_in(rng, -1.0, 1.0), od = uniform_in(rng, -1.0, 1.0);
    pair.limits = {0.0, wa, 0.0, ha, ox, ox + wb, od, od + hb};
    const double scale = pair_scale(pair);
    const double margin = uniform_in(rng, 0.4, 2.0) * scale;
    if (uniform01(rng) < 0.5) {
        // Separate along the frame's y axis: y_c outside [b0, b1].
        pair.y_c = uniform01(rng) < 0.5 ? -margin : ha + margin;
        pair.z_c = uniform_in(rng, od - hb, od + 2.0 * hb);
    } else {
        // Separate along the frame's z axis: z_c outside [d0, d1].
        pair.z_c = uniform01(rng) < 0.5 ? od - margin : od + hb + margin;
        pair.y_c = uniform_in(rng, -ha, 2.0 * ha);
    }
    return pair;
}

CanonicalPair random_touching_pair(std::mt19937_64& rng, int kind) {
    CanonicalPair pair;
    const double w = uniform_in(rng, 0.3, 1.5);
    const double h = uniform_in(rng, 0.3, 1.5);
    switch (kind % 4) {
        case 0:  // coincident rectangles
            pair.relation = PairRelation::Self;
            pair.limits = {0.0, w, 0.0, h, 0.0, w, 0.0, h};
            break;
        case 1:  // coplanar, shared edge
            pair.relation = PairRelation::Coplanar;
            pair.limits = {0.0, w, 0.0, h, w, w + uniform_in(rng, 0.3, 1.5), 0.0, h};
            break;
        case 2: {  // coplanar, partial overlap
            pair.relation = PairRelation::Coplanar;
            const double sx = uniform_in(rng, 0.1, 0.9) * w;
            const double sy = uniform_in(rng, 0.1, 0.9) * h;
            pair.limits = {0.0, w, 0.0, h, sx, sx + w, sy, sy + h};
            break;
        }
        default:  // perpendicular, shared edge (adjacent cube faces)
            pair.relation = PairRelation::Perpendicular;
            pair.limits = {0.0, w, 0.0, h, 0.0, w, 0.0, uniform_in(rng, 0.3, 1.5)};
            pair.y_c = 0.0;
            pair.z_c = 0.0;
            break;
    }
    return pair;
}

}  // namespace

VerificationReport verify_kernels(int trial_count, std::uint64_t seed,
                                  const VerifyOptions& options) {
    VerifyOptions opt = options;
    if (trial_count > 0) opt.separated_trials = trial_count;

    VerificationReport report;
    std::mt19937_64 rng(seed);
    int id = 0;

    auto run_quad_case = [&](const CanonicalPair& pair) {
        VerificationCase vc;
        vc.id = id++;
        vc.relation = pair.relation;
        vc.pair = pair;
        vc.method = OracleMethod::TensorQuadrature;
        vc.analytic = quadruple_I(pair) * (1.0 + opt.kernel_perturbation);
        const OracleEstimate est = quad_oracle(pair);
        vc.oracle = est.value;
        vc.error_bound = opt.quad_rel_threshold * std::abs(est.value);
        vc.pass = std::abs(vc.analytic - vc.oracle) < vc.error_bound;
        if (!vc.pass) ++report.failures;
        report.cases.push_back(vc);
    };

    auto run_mc_case = [&](const CanonicalPair& pair) {
        VerificationCase vc;
        vc.id = id++;
        vc.relation = pair.relation;
        vc.pair = pair;
        vc.method = OracleMethod::MonteCarlo;
        vc.analytic = quadruple_I(pair) * (1.0 + opt.kernel_perturbation);
        // A correct kernel still lands outside 3 sigma for 0.3% of draws, so
        // a borderline case is retried at 4x the samples (twice at most); a
        // fluke regresses to the mean while a real deviation gains
        // significance as sigma shrinks.
        std::uint64_t samples = opt.mc_samples;
        for (int attempt = 0; attempt < 3; ++attempt, samples *= 4) {
            const OracleEstimate est = mc_oracle(pair, samples, rng());
            vc.oracle = est.value;
            vc.error_bound = est.error_estimate;  // 3 standard errors
            vc.pass = std::abs(vc.analytic - vc.oracle) <= vc.error_bound;
            if (vc.pass) break;
        }
        if (!vc.pass) ++report.failures;
        report.cases.push_back(vc);
    };

    for (int t = 0; t < opt.separated_trials; ++t) run_quad_case(random_parallel_pair(rng));
    for (int t = 0; t < opt.separated_trials; ++t) run_quad_case(random_perpendicular_pair(rng));
    for (int t = 0; t < opt.touching_trials; ++t) run_mc_case(random_touching_pair(rng, t));

    return report;
}

std::string report_to_json(const VerificationReport& report) {
    nlohmann::json cases = nlohmann::json::array();
    for (const VerificationCase& vc : report.cases) {
        const RectLimits& L = vc.pair.limits;
        cases.push_back({
            {"case-id", vc.id},
            {"relation", relation_name(vc.relation)},
            {"limits", {L.a0, L.a1, L.b0, L.b1, L.c0, L.c1, L.d0, L.d1}},
            {"y_c", vc.pair.y_c},
            {"z_c", vc.pair.z_c},
            {"analytic", vc.analytic},
            {"oracle", vc.oracle},
            {"error-bound", vc.error_bound},
            {"oracle-method",
             vc.method == OracleMethod::TensorQuadrature ? "tensor-quadrature" : "monte-carlo"},
            {"pass", vc.pass},
        });
    }
    nlohmann::json doc{
        {"rng", report.rng},
        {"failures", report.failures},
        {"all-pass", report.all_pass()},
        {"cases", cases},
    };
    return doc.dump(2);
}

}  // namespace panelcap
