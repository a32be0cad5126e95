#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ferronematic/analysis.hpp"
#include "ferronematic/config.hpp"
#include "ferronematic/scenario.hpp"
#include "ferronematic/solver.hpp"

namespace ferronematic {

using Json = nlohmann::ordered_json;

Scenario<double> make_scenario(const RunConfig& c, const Grid2D<double>& g);

struct RunResult {
    RunConfig config;
    Grid2D<double> grid;
    Trajectory<double> trajectory;
};

RunResult execute(const RunConfig& c);

/// Post-processing of a finished run: defects and windings, alignment with the field
/// direction (x when the field is zero), L∞ statistics, energy checks and counters.
Json summarize(const RunResult& r);

/// Writes config.txt, energy.csv, iterations.csv, summary.json and one
/// snapshot_<step>.csv per recorded snapshot into `dir`.
void write_outputs(const RunResult& r, const std::filesystem::path& dir);

struct Preset {
    std::string variant;  ///< subdirectory name, e.g. "h0.4_m3on"
    RunConfig config;
};

/// Figure ids accepted by presets().
std::vector<std::string> figure_ids();

/// Runs behind one figure id. The fig1 entries are convergence-study configs (the
/// horizon is their max_time) rather than plain runs. Throws std::invalid_argument
/// for an unknown id.
std::vector<Preset> presets(const std::string& figure);

/// The model of the degree-k figure presets at unit friction (l1' = l2 = 0.01,
/// c1 = 2, c2 = 8, c3 = 2, ξ = 1), k = 1, H = 0, t = 0.01.
RunConfig degree_k_base();

/// Self-convergence protocol driven by a config. The horizon is the config's
/// max_time; spatial and temporal resolutions take the study defaults.
ConvergenceSetup<double> convergence_setup(const RunConfig& c);

Json to_json(const ConvergenceReport<double>& r);

}  // namespace ferronematic
