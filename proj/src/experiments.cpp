#include "panelcap/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace panelcap {

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::ParallelPlate: return "parallel-plate";
        case Scenario::Cube: return "cube";
        case Scenario::Square: return "square";
        case Scenario::Custom: return "custom";
        case Scenario::Verify: return "verify";
    }
    return "?";
}

Scenario scenario_from_name(const std::string& name) {
    if (name == "parallel-plate") return Scenario::ParallelPlate;
    if (name == "cube") return Scenario::Cube;
    if (name == "square") return Scenario::Square;
    if (name == "custom") return Scenario::Custom;
    if (name == "verify") return Scenario::Verify;
    throw InvalidInput("unknown scenario '" + name + "'");
}

void RunConfig::validate() const {
    if (n_sweep.empty()) throw InvalidInput("no subdivision counts given");
    int prev = 0;
    for (int n : n_sweep) {
        if (n <= prev)
            throw InvalidInput("n sweep must be a strictly increasing list of positive counts");
        prev = n;
    }
    if (!(width > 0.0) || !(depth > 0.0) || !(gap > 0.0) || !(edge > 0.0))
        throw InvalidInput("geometry dimensions must be positive");
    if (!(memory_cap_gib > 0.0)) throw InvalidInput("memory cap must be positive");
    if (verify_trials < 1) throw InvalidInput("verification needs at least one trial");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, const char* spec = "%.16e") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

void ensure_out_dir(const RunConfig& config) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec)
        throw InvalidInput("cannot create output directory " + config.out_dir.string() + ": " +
                           ec.message());
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path.string());
    return out;
}

ConvergenceRecord solve_scenario_mesh(const Mesh& mesh, const RunConfig& config, int n,
                                      SolveResult* result_out = nullptr) {
    ConvergenceRecord rec;
    rec.n = n;
    rec.tile_count = mesh.size();

    AssemblyOptions opt;
    opt.memory_cap_gib = config.memory_cap_gib;

    const auto t0 = Clock::now();
    const CouplingMatrix matrix = assemble(mesh, config.tier, opt);
    rec.assembly_seconds = seconds_since(t0);

    const auto t1 = Clock::now();
    SolveResult result = solve(matrix, mesh);
    rec.solve_seconds = seconds_since(t1);

    rec.capacitance_farads = result.capacitance_farads;
    rec.capacitance_normalized = result.capacitance_normalized;
    if (result_out) *result_out = std::move(result);
    return rec;
}

nlohmann::json record_json(const ConvergenceRecord& r) {
    return {{"n", r.n},
            {"tiles", r.tile_count},
            {"capacitance_F", r.capacitance_farads},
            {"capacitance_4pie0", r.capacitance_normalized},
            {"assembly_s", r.assembly_seconds},
            {"solve_s", r.solve_seconds}};
}

}  // namespace

void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<ConvergenceRecord>& records) {
    auto out = open_out(path);
    out << "n,tiles,capacitance_F,capacitance_4pie0,assembly_s,solve_s\n";
    for (const auto& r : records) {
        out << r.n << ',' << r.tile_count << ',' << fmt(r.capacitance_farads) << ','
            << fmt(r.capacitance_normalized) << ',' << fmt(r.assembly_seconds, "%.6f") << ','
            << fmt(r.solve_seconds, "%.6f") << '\n';
    }
}

void write_charge_map_csv(const std::filesystem::path& path,
                          const std::vector<ChargeRecord>& records) {
    auto out = open_out(path);
    out << "cx,cy,cz,area,charge_C,density_C_per_m2\n";
    for (const auto& r : records) {
        out << fmt(r.center[0]) << ',' << fmt(r.center[1]) << ',' << fmt(r.center[2]) << ','
            << fmt(r.area) << ',' << fmt(r.charge) << ',' << fmt(r.density) << '\n';
    }
}

std::vector<ConvergenceRecord> run_parallel_plate_sweep(const RunConfig& config) {
    config.validate();
    ensure_out_dir(config);

    std::vector<ConvergenceRecord> records;
    std::vector<ChargeRecord> finest_map;
    for (int n : config.n_sweep) {
        const Mesh mesh = build_parallel_plate(config.width, config.depth, config.gap, n);
        const bool finest = n == config.n_sweep.back();
        SolveResult result;
        records.push_back(solve_scenario_mesh(mesh, config, n, finest ? &result : nullptr));
        if (finest) finest_map = charge_map(result, mesh);
    }

    const std::string stem = std::string("parallel_plate_") + tier_name(config.tier);
    write_convergence_csv(config.out_dir / (stem + ".csv"), records);
    write_charge_map_csv(config.out_dir / "charge_map_plate.csv", finest_map);

    // The point-charge tier is unusable at coarse meshes; flag (rather than
    // suppress) the first few sweep entries so plots can drop them.
    nlohmann::json flagged = nlohmann::json::array();
    if (config.tier == KernelTier::PointCharge) {
        for (std::size_t i = 0; i < records.size() && i < 5; ++i)
            flagged.push_back(records[i].n);
    }

    nlohmann::json summary{{"scenario", scenario_name(config.scenario)},
                           {"tier", tier_name(config.tier)},
                           {"width_m", config.width},
                           {"depth_m", config.depth},
                           {"gap_m", config.gap},
                           {"flagged_coarse_n", flagged},
                           {"records", nlohmann::json::array()}};
    for (const auto& r : records) summary["records"].push_back(record_json(r));
    open_out(config.out_dir / (stem + "_summary.json")) << summary.dump(2) << '\n';

    return records;
}

std::vector<ConvergenceRecord> run_cube(const RunConfig& config) {
    config.validate();
    ensure_out_dir(config);

    std::vector<ConvergenceRecord> records;
    for (int n : config.n_sweep) {
        const Mesh mesh = build_cube(config.edge, n);
        records.push_back(solve_scenario_mesh(mesh, config, n));
    }

    const std::string stem = std::string("cube_") + tier_name(config.tier);
    write_convergence_csv(config.out_dir / (stem + ".csv"), records);

    nlohmann::json summary{{"scenario", scenario_name(Scenario::Cube)},
                           {"tier", tier_name(config.tier)},
                           {"edge_m", config.edge},
                           {"records", nlohmann::json::array()}};
    for (const auto& r : records) summary["records"].push_back(record_json(r));
    summary["finest"] = record_json(records.back());
    open_out(config.out_dir / (stem + "_summary.json")) << summary.dump(2) << '\n';

    return records;
}

ChargeGroupReport group_maxwell_charges(const SolveResult& result, const Mesh& mesh) {
    if (mesh.size() != 36)
        throw InvalidInput("charge grouping is defined for the 6x6 square (36 tiles)");
    for (const Tile& t : mesh.tiles)
        if (t.normal != mesh.tiles.front().normal || t.offset != mesh.tiles.front().offset)
            throw InvalidInput("charge grouping needs a single-panel mesh");

    // Symmetry classes of the 6x6 grid, folded into one quadrant octant:
    // (0,0)=A corners, (0,1)=B, (0,2)=C, (1,1)=D, (1,2)=E, (2,2)=F center.
    auto label_of = [](int row, int col) {
        int a = std::min(row, 5 - row);
        int b = std::min(col, 5 - col);
        if (a > b) std::swap(a, b);
        if (a == 0) return static_cast<char>('A' + b);  // A, B, C
        if (a == 1) return b == 1 ? 'D' : 'E';
        return 'F';
    };

    std::map<char, std::vector<double>> buckets;
    for (int i = 0; i < 36; ++i)
        buckets[label_of(i / 6, i % 6)].push_back(result.charges(i));

    ChargeGroupReport report;
    report.capacitance_farads = result.capacitance_farads;
    report.capacitance_normalized = result.capacitance_normalized;
    for (const auto& [label, charges] : buckets) {
        ChargeGroup g;
        g.label = label;
        g.population = static_cast<int>(charges.size());
        double sum = 0.0;
        double lo = charges.front(), hi = charges.front();
        for (double q : charges) {
            sum += q;
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        g.mean_charge = sum / g.population;
        g.relative_spread = (hi - lo) / std::abs(g.mean_charge);
        report.groups.push_back(g);
    }
    return report;
}

ChargeGroupReport run_maxwell_square(const RunConfig& config) {
    config.validate();
    ensure_out_dir(config);

    const Mesh mesh = build_square(1.0, 6);
    AssemblyOptions opt;
    opt.memory_cap_gib = config.memory_cap_gib;
    const SolveResult result = solve(assemble(mesh, config.tier, opt), mesh);
    const ChargeGroupReport report = group_maxwell_charges(result, mesh);

    write_charge_map_csv(config.out_dir / "charge_map_square.csv", charge_map(result, mesh));

    nlohmann::json groups = nlohmann::json::array();
    for (const ChargeGroup& g : report.groups) {
        groups.push_back({{"label", std::string(1, g.label)},
                          {"population", g.population},
                          {"mean_charge_C", g.mean_charge},
                          {"relative_spread", g.relative_spread}});
    }
    nlohmann::json summary{{"scenario", scenario_name(Scenario::Square)},
                           {"tier", tier_name(config.tier)},
                           {"capacitance_F", report.capacitance_farads},
                           {"capacitance_4pie0", report.capacitance_normalized},
                           {"groups", groups}};
    open_out(config.out_dir / "maxwell_square_groups.json") << summary.dump(2) << '\n';

    return report;
}

CustomRunSummary run_custom(const RunConfig& config) {
    config.validate();
    if (config.geometry_file.empty())
        throw InvalidInput("custom scenario needs --geometry <file>");
    ensure_out_dir(config);

    const auto panels = panels_from_json_file(config.geometry_file.string());
    const Mesh mesh = mesh_from_panels(panels);
    if (mesh.conductor_voltage.size() > 2) {
        std::ostringstream msg;
        msg << "geometry has " << mesh.conductor_voltage.size()
            << " conductors; capacitance extraction supports at most 2 "
               "(capacitance-matrix extraction is out of scope)";
        throw InvalidInput(msg.str());
    }

    AssemblyOptions opt;
    opt.memory_cap_gib = config.memory_cap_gib;
    CustomRunSummary summary;
    summary.tile_count = mesh.size();
    summary.conductor_count = static_cast<int>(mesh.conductor_voltage.size());
    summary.result = solve(assemble(mesh, config.tier, opt), mesh);

    write_charge_map_csv(config.out_dir / "charge_map_custom.csv",
                         charge_map(summary.result, mesh));

    nlohmann::json conductors = nlohmann::json::array();
    for (const auto& [id, v] : mesh.conductor_voltage) {
        conductors.push_back({{"conductor", id},
                              {"voltage_V", v},
                              {"charge_C", summary.result.conductor_charges.at(id)}});
    }
    nlohmann::json doc{{"scenario", scenario_name(Scenario::Custom)},
                       {"tier", tier_name(config.tier)},
                       {"geometry", config.geometry_file.string()},
                       {"tiles", summary.tile_count},
                       {"conductors", conductors},
                       {"capacitance_F", summary.result.capacitance_farads},
                       {"capacitance_4pie0", summary.result.capacitance_normalized}};
    open_out(config.out_dir / "custom_summary.json") << doc.dump(2) << '\n';

    return summary;
}

VerificationReport run_verify(const RunConfig& config) {
    config.validate();
    ensure_out_dir(config);

    VerifyOptions opt;
    opt.touching_trials = std::max(1, config.verify_trials / 4);
    const VerificationReport report = verify_kernels(config.verify_trials, config.seed, opt);
    open_out(config.out_dir / "verification_report.json") << report_to_json(report) << '\n';
    return report;
}

}  // namespace panelcap
