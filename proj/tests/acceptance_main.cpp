// Acceptance suite: end-to-end checks of the solver against its pinned
// reference values and invariants. Prints one PASS/FAIL line per criterion
// and exits nonzero if any fail.
//
// The fine-mesh cube criterion assembles and factors a 13824x13824 dense
// matrix; expect a few minutes and ~3 GiB of RAM.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "panelcap/experiments.hpp"
#include "panelcap/oracle.hpp"
#include "panelcap/solver.hpp"

using namespace panelcap;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] %d. %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string format(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    return buf;
}

double cube_capacitance_normalized(int n) {
    const Mesh mesh = build_cube(1.0, n);
    const SolveResult res = solve(assemble(mesh, KernelTier::GalerkinQuadruple), mesh);
    return res.capacitance_normalized;
}

double plate_capacitance(int n, KernelTier tier) {
    const Mesh mesh = build_parallel_plate(1.0, 1.0, 0.1, n);
    const SolveResult res = solve(assemble(mesh, tier), mesh);
    return res.capacitance_farads;
}

// --- criterion 1: unit-cube capacitance on the fine mesh ------------------

void criterion_cube_fine() {
    const double c48 = cube_capacitance_normalized(48);
    const bool pass = std::abs(c48 - 0.66047) <= 0.0005;
    report(1, pass,
           format("unit cube n=48 (13824 tiles): C/(4 pi eps0) = %.5f, target 0.66047 +- 0.0005",
                  c48));
}

// --- criterion 2: unit-cube coarse bound -----------------------------------

void criterion_cube_coarse() {
    const double c1 = cube_capacitance_normalized(1);
    const double rel = std::abs(c1 - 0.660678) / 0.660678;
    report(2, rel < 0.02,
           format("unit cube n=1 (6 tiles): C/(4 pi eps0) = %.5f, %.2f%% from 0.660678 "
                  "(< 2%% required)",
                  c1, 100.0 * rel));
}

// --- criterion 3: kernel-oracle agreement ----------------------------------

void criterion_verify() {
    VerifyOptions opt;
    opt.separated_trials = 200;
    opt.touching_trials = 50;
    const VerificationReport rep = verify_kernels(200, 20240001, opt);
    int quad_cases = 0, mc_cases = 0;
    double worst_rel = 0.0;
    for (const auto& vc : rep.cases) {
        if (vc.method == OracleMethod::TensorQuadrature) {
            ++quad_cases;
            worst_rel = std::max(worst_rel, std::abs(vc.analytic - vc.oracle) /
                                                std::abs(vc.oracle));
        } else {
            ++mc_cases;
        }
    }
    report(3, rep.all_pass(),
           format("kernel vs oracle: %d quadrature cases (worst rel %.2e, limit 1e-8), "
                  "%d Monte-Carlo cases within 3 sigma, %d failure(s)",
                  quad_cases, worst_rel, mc_cases, rep.failures));
}

// --- criterion 4: self-coupling constant ------------------------------------

void criterion_self_constant() {
    CanonicalPair self;
    self.relation = PairRelation::Self;
    self.limits = {0, 1, 0, 1, 0, 1, 0, 1};
    const OracleEstimate mc = mc_oracle(self, 100'000'000, 18520301);

    const Tile tile{Axis::Z, 0.0, {0.0, 1.0}, {0.0, 1.0}, 0};
    const double P_self = coupling_P(tile, tile, KernelTier::GalerkinQuadruple);
    const double analytic_I = self_quadruple_I(1.0, 1.0);
    const double analytic_4pie0P = PhysicalConstants::four_pi_eps0 * P_self;
    const bool pass = std::abs(analytic_I - mc.value) <= mc.error_estimate;
    report(4, pass,
           format("unit-square self coupling: 4 pi eps0 P = %.6f (mean 1/r), MC(1e8) = %.6f "
                  "+- %.1e (3 sigma)",
                  analytic_4pie0P, 2.0 * mc.value / kSqrtPi,
                  2.0 * mc.error_estimate / kSqrtPi));
}

// --- criterion 5: parallel-plate convergence stability ----------------------

void criterion_plate_convergence() {
    const double ideal = PhysicalConstants::epsilon0 * 1.0 / 0.1;  // 88.54 pF
    bool above_ideal = true;
    double c16 = 0.0, c24 = 0.0;
    for (int n : {1, 2, 4, 8, 16, 24}) {
        const double c = plate_capacitance(n, KernelTier::GalerkinQuadruple);
        if (c <= ideal) above_ideal = false;
        if (n == 16) c16 = c;
        if (n == 24) c24 = c;
    }
    const double drift = std::abs(c16 - c24) / c24;
    report(5, above_ideal && drift < 0.01,
           format("plate (1m x 1m, 0.1 m gap): C(16)=%.4f pF, C(24)=%.4f pF, drift %.3f%% "
                  "(< 1%%), all n above eps0 A/d = %.2f pF: %s",
                  1e12 * c16, 1e12 * c24, 100.0 * drift, 1e12 * ideal,
                  above_ideal ? "yes" : "no"));
}

// --- criterion 6: kernel-tier ordering ---------------------------------------

void criterion_tier_ordering() {
    const double ref = plate_capacitance(32, KernelTier::GalerkinQuadruple);
    bool ordered = true;
    std::string detail = "point vs quad error relative to C_quad(32):";
    for (int n = 6; n <= 10; ++n) {
        const double err_point = std::abs(plate_capacitance(n, KernelTier::PointCharge) - ref);
        const double err_quad = std::abs(plate_capacitance(n, KernelTier::GalerkinQuadruple) - ref);
        if (!(err_point > err_quad)) ordered = false;
        detail += format(" n=%d: %.2e/%.2e", n, err_point, err_quad);
    }
    report(6, ordered, detail);
}

// --- criterion 7: Maxwell square symmetry ------------------------------------

void criterion_maxwell_square() {
    const Mesh mesh = build_square(1.0, 6);
    const SolveResult res = solve(assemble(mesh, KernelTier::GalerkinQuadruple), mesh);
    const ChargeGroupReport rep = group_maxwell_charges(res, mesh);

    const int expected_pop[6] = {4, 8, 8, 4, 8, 4};
    bool pass = rep.groups.size() == 6;
    double worst_spread = 0.0;
    for (std::size_t g = 0; pass && g < rep.groups.size(); ++g) {
        if (rep.groups[g].population != expected_pop[g]) pass = false;
        worst_spread = std::max(worst_spread, rep.groups[g].relative_spread);
    }
    if (worst_spread >= 1e-9) pass = false;
    report(7, pass,
           format("6x6 square: %zu charge groups, populations A:4 B:8 C:8 D:4 E:8 F:4, "
                  "worst within-group spread %.1e (< 1e-9)",
                  rep.groups.size(), worst_spread));
}

// --- criterion 8: invariant suite --------------------------------------------

bool invariant_kernel_symmetry(std::string& log) {
    // coupling_P symmetry across a mesh that mixes all relations.
    const Mesh mesh = build_cube(1.0, 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < mesh.size(); ++i)
        for (std::size_t j = i; j < mesh.size(); ++j) {
            const double pij = coupling_P(mesh.tiles[i], mesh.tiles[j],
                                          KernelTier::GalerkinQuadruple);
            const double pji = coupling_P(mesh.tiles[j], mesh.tiles[i],
                                          KernelTier::GalerkinQuadruple);
            worst = std::max(worst, std::abs(pij - pji) / std::abs(pij));
        }
    log += format(" symmetry %.1e;", worst);
    return worst < 1e-12;
}

bool invariant_positive_definite(std::string& log) {
    const Mesh mesh = build_cube(1.0, 3);
    const CouplingMatrix M = assemble(mesh, KernelTier::GalerkinQuadruple);
    const Eigen::LLT<Eigen::MatrixXd> llt(M.P);
    const bool ok = llt.info() == Eigen::Success;
    log += format(" PD factorization %s;", ok ? "ok" : "failed");
    return ok;
}

bool invariant_scaling_translation(std::string& log) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> len(0.2, 1.5), off(-1.5, 1.5);
    double worst_scale = 0.0, worst_shift = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        RectLimits L{off(rng), 0, off(rng), 0, off(rng), 0, off(rng), 0};
        L.a1 = L.a0 + len(rng);
        L.b1 = L.b0 + len(rng);
        L.c1 = L.c0 + len(rng);
        L.d1 = L.d0 + len(rng);
        const double zc = len(rng);

        const double base = parallel_quadruple_I(L, zc);
        const double lambda = 2.75;
        const RectLimits S{lambda * L.a0, lambda * L.a1, lambda * L.b0, lambda * L.b1,
                           lambda * L.c0, lambda * L.c1, lambda * L.d0, lambda * L.d1};
        const double scaled = parallel_quadruple_I(S, lambda * zc);
        worst_scale = std::max(worst_scale,
                               std::abs(scaled - lambda * lambda * lambda * base) /
                                   std::abs(scaled));

        const double dx = off(rng), dy = off(rng);
        const RectLimits T{L.a0 + dx, L.a1 + dx, L.b0 + dy, L.b1 + dy,
                           L.c0 + dx, L.c1 + dx, L.d0 + dy, L.d1 + dy};
        const double shifted = parallel_quadruple_I(T, zc);
        worst_shift = std::max(worst_shift, std::abs(shifted - base) / std::abs(base));
    }
    log += format(" scaling %.1e, translation %.1e;", worst_scale, worst_shift);
    return worst_scale < 1e-12 && worst_shift < 1e-12;
}

bool invariant_coplanar_limit(std::string& log) {
    const RectLimits shared_edge{0, 1, 0, 1, 1, 2, 0, 1};
    const double cop = coplanar_quadruple_I(shared_edge);
    double prev = HUGE_VAL;
    bool monotone = true;
    for (int k = 2; k <= 6; ++k) {
        const double diff =
            std::abs(parallel_quadruple_I(shared_edge, std::pow(10.0, -k)) - cop) / cop;
        if (!(diff < prev)) monotone = false;
        prev = diff;
    }
    log += format(" coplanar-limit monotone to %.1e;", prev);
    return monotone;
}

bool invariant_self_consistency(std::string& log) {
    const RectLimits coincident{0, 0.8, 0, 1.3, 0, 0.8, 0, 1.3};
    const double via_coplanar = coplanar_quadruple_I(coincident);
    const double direct = self_quadruple_I(0.8, 1.3);
    const double rel = std::abs(via_coplanar - direct) / direct;
    log += format(" self/coplanar %.1e;", rel);
    return rel < 1e-12;
}

bool invariant_far_field(std::string& log) {
    // d >= 100x the largest tile diagonal for unit squares: d >= 142.
    const Tile a{Axis::Z, 0.0, {0.0, 1.0}, {0.0, 1.0}, 0};
    const Tile b{Axis::Z, 150.0, {0.0, 1.0}, {0.0, 1.0}, 0};
    const double d = distance(a.center(), b.center());
    double worst = 0.0;
    for (KernelTier tier : {KernelTier::PointCharge, KernelTier::CenterCollocation,
                            KernelTier::GalerkinQuadruple}) {
        const double p = coupling_P(a, b, tier);
        worst = std::max(worst, std::abs(PhysicalConstants::four_pi_eps0 * p * d - 1.0));
    }
    log += format(" far-field %.1e;", worst);
    return worst < 1e-3;
}

bool invariant_voltage_scaling(std::string& log) {
    auto plate_with_voltages = [](double va, double vb) {
        Panel upper{Axis::Z, +0.05, {-0.5, 0.5}, {-0.5, 0.5}, 4, 4, 0, va};
        Panel lower{Axis::Z, -0.05, {-0.5, 0.5}, {-0.5, 0.5}, 4, 4, 1, vb};
        const Panel panels[] = {upper, lower};
        return mesh_from_panels(panels);
    };
    const Mesh base = plate_with_voltages(1.0, -1.0);
    const Mesh scaled = plate_with_voltages(3.0, -3.0);
    const CouplingMatrix M = assemble(base, KernelTier::GalerkinQuadruple);
    const SolveResult r1 = solve(M, base);
    const SolveResult r3 = solve(M, scaled);
    double worst_q = 0.0;
    for (Eigen::Index i = 0; i < M.size(); ++i)
        worst_q = std::max(worst_q,
                           std::abs(r3.charges(i) - 3.0 * r1.charges(i)) /
                               std::abs(3.0 * r1.charges(i)));
    const double cap_rel =
        std::abs(r3.capacitance_farads - r1.capacitance_farads) / r1.capacitance_farads;
    log += format(" voltage scaling q %.1e, C %.1e;", worst_q, cap_rel);
    return worst_q < 1e-12 && cap_rel < 1e-12;
}

void criterion_invariants() {
    std::string log = "invariants:";
    bool pass = true;
    pass &= invariant_kernel_symmetry(log);
    pass &= invariant_positive_definite(log);
    pass &= invariant_scaling_translation(log);
    pass &= invariant_coplanar_limit(log);
    pass &= invariant_self_consistency(log);
    pass &= invariant_far_field(log);
    pass &= invariant_voltage_scaling(log);
    report(8, pass, log);
}

}  // namespace

int main() {
    std::printf("panelcap acceptance suite\n");
    try {
        criterion_cube_coarse();   // 2 (fast first)
        criterion_verify();        // 3
        criterion_self_constant(); // 4
        criterion_plate_convergence();  // 5
        criterion_tier_ordering(); // 6
        criterion_maxwell_square();// 7
        criterion_invariants();    // 8
        criterion_cube_fine();     // 1 (minutes; last so quick failures surface early)
    } catch (const std::exception& e) {
        std::printf("[FAIL] acceptance aborted: %s\n", e.what());
        return 1;
    }
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", g_failures);
    return 1;
}
