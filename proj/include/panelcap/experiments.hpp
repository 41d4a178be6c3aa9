#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "panelcap/oracle.hpp"
#include "panelcap/solver.hpp"

namespace panelcap {

enum class Scenario { ParallelPlate, Cube, Square, Custom, Verify };

const char* scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

struct RunConfig {
    Scenario scenario = Scenario::ParallelPlate;
    std::vector<int> n_sweep = {8};      // strictly increasing, positive
    KernelTier tier = KernelTier::GalerkinQuadruple;
    double width = 1.0;                  // m, parallel-plate
    double depth = 1.0;                  // m
    double gap = 0.1;                    // m
    double edge = 1.0;                   // m, cube
    std::filesystem::path geometry_file; // custom scenario
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 20240001;
    double memory_cap_gib = 4.0;
    int verify_trials = 200;

    void validate() const;
};

struct ConvergenceRecord {
    int n = 0;
    std::size_t tile_count = 0;
    double capacitance_farads = 0.0;
    double capacitance_normalized = 0.0;
    double assembly_seconds = 0.0;
    double solve_seconds = 0.0;
};

/// Charge statistics of one symmetry class of the 6x6 Maxwell square.
struct ChargeGroup {
    char label = 'A';                  // A..F, corner outward to center
    int population = 0;
    double mean_charge = 0.0;          // C
    double relative_spread = 0.0;      // (max-min)/|mean| within the group
};

struct ChargeGroupReport {
    std::vector<ChargeGroup> groups;   // exactly 6 for the 6x6 square
    double capacitance_farads = 0.0;
    double capacitance_normalized = 0.0;
};

struct CustomRunSummary {
    std::size_t tile_count = 0;
    int conductor_count = 0;
    SolveResult result;
};

// ---------------------------------------------------------------------------
// Scenario runners. Each writes its CSV/JSON artifacts under out_dir and
// returns the in-memory results. All artifacts are deterministic given
// (config, seed) except the informational timing columns.
//
// Files written:
//   parallel-plate: parallel_plate_<tier>.csv, parallel_plate_<tier>_summary.json,
//                   charge_map_plate.csv (for the largest n in the sweep)
//   cube:           cube_<tier>.csv, cube_<tier>_summary.json
//   square:         maxwell_square_groups.json, charge_map_square.csv
//   custom:         custom_summary.json, charge_map_custom.csv
//   verify:         verification_report.json
// ---------------------------------------------------------------------------

std::vector<ConvergenceRecord> run_parallel_plate_sweep(const RunConfig& config);
std::vector<ConvergenceRecord> run_cube(const RunConfig& config);
ChargeGroupReport run_maxwell_square(const RunConfig& config);
CustomRunSummary run_custom(const RunConfig& config);
VerificationReport run_verify(const RunConfig& config);

/// Convergence CSV: header `n,tiles,capacitance_F,capacitance_4pie0,assembly_s,solve_s`.
void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<ConvergenceRecord>& records);

/// Charge map CSV: header `cx,cy,cz,area,charge_C,density_C_per_m2`.
void write_charge_map_csv(const std::filesystem::path& path,
                          const std::vector<ChargeRecord>& records);

/// Groups the 36 tile charges of a 6x6 single-panel mesh by the symmetry
/// classes of the square (corner A outward to center F) and reports
/// populations, means and within-group spreads.
ChargeGroupReport group_maxwell_charges(const SolveResult& result, const Mesh& mesh);

}  // namespace panelcap
