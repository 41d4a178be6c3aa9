#include "panelcap/solver.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace panelcap {

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Dynamic row scheduling: workers pull the next row index until rows run
/// out. Entries are independent kernel evaluations, so no locking is needed.
template <typename RowFn>
void parallel_rows(Eigen::Index n, int threads, RowFn&& fn) {
    std::atomic<Eigen::Index> next{0};
    auto worker = [&] {
        for (;;) {
            const Eigen::Index i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    const int nthreads = std::min<Eigen::Index>(threads, n) > 0
                             ? static_cast<int>(std::min<Eigen::Index>(threads, n))
                             : 1;
    if (nthreads <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace

CouplingMatrix assemble(const Mesh& mesh, KernelTier tier, const AssemblyOptions& options) {
    const std::size_t n = mesh.tiles.size();
    if (n == 0) throw InvalidInput("cannot assemble an empty mesh");

    const double bytes = static_cast<double>(n) * static_cast<double>(n) * sizeof(double);
    const double cap = options.memory_cap_gib * 1073741824.0;
    if (bytes > cap) {
        std::ostringstream msg;
        msg << "dense coupling matrix for " << n << " tiles needs " << bytes / 1073741824.0
            << " GiB, above the " << options.memory_cap_gib << " GiB cap";
        throw NumericsError(msg.str());
    }

    CouplingMatrix matrix;
    matrix.tier = tier;
    matrix.P.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const int threads = resolve_threads(options.threads);
    const auto& tiles = mesh.tiles;

    if (tier == KernelTier::GalerkinQuadruple) {
        parallel_rows(static_cast<Eigen::Index>(n), threads, [&](Eigen::Index i) {
            for (Eigen::Index j = i; j < static_cast<Eigen::Index>(n); ++j)
                matrix.P(i, j) = coupling_P(tiles[i], tiles[j], tier);
        });
        // Mirror the upper triangle; column-wise writes keep this cheap.
        parallel_rows(static_cast<Eigen::Index>(n), threads, [&](Eigen::Index j) {
            for (Eigen::Index i = j + 1; i < static_cast<Eigen::Index>(n); ++i)
                matrix.P(i, j) = matrix.P(j, i);
        });
    } else {
        parallel_rows(static_cast<Eigen::Index>(n), threads, [&](Eigen::Index i) {
            for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j)
                matrix.P(i, j) = coupling_P(tiles[i], tiles[j], tier);
        });
    }
    return matrix;
}

namespace {

constexpr double kResidualLimit = 1e-10;
constexpr double kRcondLimit = 1e-12;

double relative_residual(const Eigen::MatrixXd& P, const Eigen::VectorXd& Q,
                         const Eigen::VectorXd& V) {
    const double vnorm = V.lpNorm<Eigen::Infinity>();
    if (vnorm == 0.0) return 0.0;
    return (P * Q - V).lpNorm<Eigen::Infinity>() / vnorm;
}

template <typename Factorization>
Eigen::VectorXd solve_with_refinement(const Factorization& fact, const Eigen::MatrixXd& P,
                                      const Eigen::VectorXd& V) {
    Eigen::VectorXd Q = fact.solve(V);
    for (int pass = 0; pass < 2; ++pass) {
        if (relative_residual(P, Q, V) < 0.1 * kResidualLimit) break;
        Q += fact.solve((V - P * Q).eval());
    }
    const double res = relative_residual(P, Q, V);
    if (!(res < kResidualLimit)) {
        std::ostringstream msg;
        msg << "solve residual " << res << " violates the " << kResidualLimit << " contract";
        throw NumericsError(msg.str());
    }
    return Q;
}

}  // namespace

SolveResult solve(const CouplingMatrix& matrix, const Mesh& mesh) {
    const Eigen::Index n = matrix.size();
    if (n != static_cast<Eigen::Index>(mesh.tiles.size()))
        throw InvalidInput("matrix size does not match the mesh");

    Eigen::VectorXd V(n);
    for (Eigen::Index i = 0; i < n; ++i)
        V(i) = mesh.conductor_voltage.at(mesh.tiles[i].conductor_id);

    SolveResult result;
    if (matrix.tier == KernelTier::GalerkinQuadruple) {
        const Eigen::LLT<Eigen::MatrixXd> llt(matrix.P);
        if (llt.info() != Eigen::Success)
            throw NumericsError("Cholesky factorization failed: coupling matrix is not "
                                "positive definite");
        if (llt.rcond() < kRcondLimit)
            throw NumericsError("coupling matrix condition estimate exceeds 1e12");
        result.charges = solve_with_refinement(llt, matrix.P, V);
    } else {
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(matrix.P);
        if (lu.rcond() < kRcondLimit)
            throw NumericsError("coupling matrix condition estimate exceeds 1e12");
        result.charges = solve_with_refinement(lu, matrix.P, V);
    }

    result.charge_densities.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Tile& t = mesh.tiles[i];
        result.charge_densities(i) = result.charges(i) / t.area();
        result.conductor_charges[t.conductor_id] += result.charges(i);
    }

    result.capacitance_farads = capacitance(result, mesh);
    result.capacitance_normalized =
        result.capacitance_farads / PhysicalConstants::four_pi_eps0;
    return result;
}

double capacitance(const SolveResult& result, const Mesh& mesh) {
    const auto& conductors = mesh.conductor_voltage;
    if (conductors.size() == 1) {
        const double v = conductors.begin()->second;
        if (v == 0.0)
            throw InvalidInput("self capacitance needs a nonzero conductor voltage");
        return result.conductor_charges.begin()->second / v;
    }
    if (conductors.size() == 2) {
        auto it = conductors.begin();
        const auto first = *it;
        const auto second = *(++it);
        const auto& [id_a, v_a] = first.second >= second.second ? first : second;
        const auto& [id_b, v_b] = first.second >= second.second ? second : first;
        if (v_a == v_b)
            throw InvalidInput("two-conductor capacitance needs distinct voltages");
        return result.conductor_charges.at(id_a) / (v_a - v_b);
    }
    std::ostringstream msg;
    msg << "capacitance extraction supports 1 or 2 conductors, mesh has "
        << conductors.size() << " (full capacitance-matrix extraction is out of scope)";
    throw InvalidInput(msg.str());
}

std::vector<ChargeRecord> charge_map(const SolveResult& result, const Mesh& mesh) {
    if (result.charges.size() != static_cast<Eigen::Index>(mesh.tiles.size()))
        throw InvalidInput("solve result does not match the mesh");
    std::vector<ChargeRecord> records;
    records.reserve(mesh.tiles.size());
    for (std::size_t i = 0; i < mesh.tiles.size(); ++i) {
        const Tile& t = mesh.tiles[i];
        records.push_back({t.center(), t.area(), result.charges(static_cast<Eigen::Index>(i)),
                           result.charge_densities(static_cast<Eigen::Index>(i))});
    }
    return records;
}

}  // namespace panelcap
