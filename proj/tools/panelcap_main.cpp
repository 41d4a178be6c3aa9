// panelcap: method-of-moments capacitance solver for axis-aligned
// rectangular panels.
//
// Exit codes: 0 success, 1 usage/input error, 2 numerical failure,
// 3 verification failure.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "panelcap/experiments.hpp"

namespace {

int run(const panelcap::RunConfig& config) {
    using namespace panelcap;
    switch (config.scenario) {
        case Scenario::ParallelPlate: {
            const auto records = run_parallel_plate_sweep(config);
            for (const auto& r : records)
                std::printf("n=%-4d tiles=%-7zu C=%.6e F  (%.6f x 4*pi*eps0)\n", r.n,
                            r.tile_count, r.capacitance_farads, r.capacitance_normalized);
            return 0;
        }
        case Scenario::Cube: {
            const auto records = run_cube(config);
            for (const auto& r : records)
                std::printf("n=%-4d tiles=%-7zu C=%.6e F  (%.6f x 4*pi*eps0)\n", r.n,
                            r.tile_count, r.capacitance_farads, r.capacitance_normalized);
            return 0;
        }
        case Scenario::Square: {
            const auto report = run_maxwell_square(config);
            std::printf("6x6 square: C=%.6e F (%.6f x 4*pi*eps0)\n", report.capacitance_farads,
                        report.capacitance_normalized);
            for (const auto& g : report.groups)
                std::printf("  group %c: population=%d mean=%.6e C spread=%.2e\n", g.label,
                            g.population, g.mean_charge, g.relative_spread);
            return 0;
        }
        case Scenario::Custom: {
            const auto summary = run_custom(config);
            std::printf("%zu tiles, %d conductor(s): C=%.6e F (%.6f x 4*pi*eps0)\n",
                        summary.tile_count, summary.conductor_count,
                        summary.result.capacitance_farads,
                        summary.result.capacitance_normalized);
            return 0;
        }
        case Scenario::Verify: {
            const auto report = run_verify(config);
            std::printf("verification: %zu cases, %d failure(s)\n", report.cases.size(),
                        report.failures);
            return report.all_pass() ? 0 : 3;
        }
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Method-of-moments capacitance solver for axis-aligned rectangular panels"};

    std::string scenario = "parallel-plate";
    std::string tier = "quad";
    int n = 0;
    std::vector<int> n_sweep;
    panelcap::RunConfig config;
    std::string geometry;
    std::string out_dir = ".";

    app.add_option("--scenario", scenario,
                   "parallel-plate | cube | square | custom | verify")
        ->required();
    app.add_option("--n", n, "single subdivision count per dimension");
    app.add_option("--n-sweep", n_sweep, "comma-separated subdivision counts")
        ->delimiter(',');
    app.add_option("--tier", tier, "coupling kernel: point | double | quad");
    app.add_option("--width", config.width, "plate width, m");
    app.add_option("--depth", config.depth, "plate depth, m");
    app.add_option("--gap", config.gap, "plate separation, m");
    app.add_option("--edge", config.edge, "cube edge, m");
    app.add_option("--geometry", geometry, "geometry JSON file (custom scenario)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", config.seed, "random seed (verify scenario)");
    app.add_option("--memory-cap-gib", config.memory_cap_gib,
                   "dense-matrix memory cap in GiB");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        config.scenario = panelcap::scenario_from_name(scenario);
        config.tier = panelcap::tier_from_name(tier);
        config.geometry_file = geometry;
        config.out_dir = out_dir;
        if (!n_sweep.empty() && n > 0)
            throw panelcap::InvalidInput("give either --n or --n-sweep, not both");
        if (!n_sweep.empty())
            config.n_sweep = n_sweep;
        else if (n > 0)
            config.n_sweep = {n};
        return run(config);
    } catch (const panelcap::NumericsError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const panelcap::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
