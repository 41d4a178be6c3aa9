#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "panelcap/geometry.hpp"
#include "panelcap/kernels.hpp"

namespace panelcap {

/// Dense matrix of coupling coefficients P_ij (1/farad), rows and columns
/// in mesh tile order.
struct CouplingMatrix {
    Eigen::MatrixXd P;
    KernelTier tier = KernelTier::GalerkinQuadruple;

    Eigen::Index size() const { return P.rows(); }
};

struct AssemblyOptions {
    double memory_cap_gib = 4.0;  ///< refuse to allocate a larger dense matrix
    int threads = 0;              ///< 0 = hardware concurrency
};

struct SolveResult {
    Eigen::VectorXd charges;                   // C, per tile
    Eigen::VectorXd charge_densities;          // C/m^2, per tile
    std::map<int, double> conductor_charges;   // C
    double capacitance_farads = 0.0;
    double capacitance_normalized = 0.0;       // C / (4 pi eps0 * 1 m)
};

struct ChargeRecord {
    Vec3 center;
    double area = 0.0;     // m^2
    double charge = 0.0;   // C
    double density = 0.0;  // C/m^2
};

/// Fills entry (i,j) with coupling_P(tile_i, tile_j, tier). For the Galerkin
/// tier only the upper triangle is evaluated and mirrored. Throws
/// NumericsError before allocating if the dense matrix would exceed the
/// memory cap.
CouplingMatrix assemble(const Mesh& mesh, KernelTier tier,
                        const AssemblyOptions& options = {});

/// Solves P Q = V with V_i the voltage of tile i's conductor. Cholesky for
/// the Galerkin tier (the matrix is symmetric positive definite), partial-
/// pivot LU otherwise. Rejects condition estimates above 1e12 and enforces
/// ||P Q - V||_inf / ||V||_inf < 1e-10 (with iterative refinement if the
/// first solve falls short). Fills conductor charges, densities and the
/// capacitance fields.
SolveResult solve(const CouplingMatrix& matrix, const Mesh& mesh);

/// Capacitance rules: two conductors -> C = Q_A / (V_A - V_B) with A the
/// higher-voltage conductor; one conductor -> self capacitance sum(Q)/V.
/// More than two conductors is an error.
double capacitance(const SolveResult& result, const Mesh& mesh);

/// Per-tile (center, area, charge, density) records in mesh order.
std::vector<ChargeRecord> charge_map(const SolveResult& result, const Mesh& mesh);

}  // namespace panelcap
