// Command-line front end: run, converge, reproduce, energy.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "ferronematic/config.hpp"
#include "ferronematic/driver.hpp"
#include "ferronematic/energy.hpp"
#include "ferronematic/io.hpp"

namespace fs = std::filesystem;
using namespace ferronematic;

namespace {

enum Exit { kOk = 0, kConfig = 1, kSolver = 2, kIo = 3 };

void report_run(const RunResult& r, const fs::path& dir) {
    const auto s = summarize(r);
    std::printf("%s: t=%.6g steps=%ld inner=%ld E=%.10g violations=%ld q-defects=%zu m-defects=%zu\n",
                dir.string().c_str(), r.trajectory.final_time, r.trajectory.steps,
                r.trajectory.cumulative_inner_iterations(), s["energy"]["final"].get<double>(),
                s["energy"]["dissipation_violations"].get<long>(), s["defects"]["q"].size(), s["defects"]["m"].size());
}

int cmd_run(const std::string& path, const std::optional<std::string>& out, const std::optional<double>& max_time,
            const std::optional<int>& n) {
    RunConfig c = load_config(path);
    if (out) c.output_dir = *out;
    if (max_time) c.solver.max_time = *max_time;
    if (n) c.n = *n;
    validate(c);
    const auto r = execute(c);
    write_outputs(r, c.output_dir);
    report_run(r, c.output_dir);
    return kOk;
}

int cmd_converge(const std::string& path, const std::optional<std::string>& out, bool spatial_only,
                 bool temporal_only) {
    RunConfig c = load_config(path);
    if (out) c.output_dir = *out;
    auto setup = convergence_setup(c);
    setup.run_spatial = !temporal_only;
    setup.run_temporal = !spatial_only;
    const auto rep = convergence_study(setup);
    const auto j = to_json(rep);
    write_text(j.dump(2) + "\n", fs::path(c.output_dir) / "convergence.json");
    std::cout << j.dump(2) << "\n";
    return kOk;
}

int cmd_reproduce(const std::string& figure, const std::string& root, const std::optional<std::string>& only) {
    const auto runs = presets(figure);
    bool any = false;
    for (const auto& p : runs) {
        if (only && p.variant != *only) continue;
        any = true;
        const fs::path dir = fs::path(root) / p.config.output_dir;
        if (figure == "fig1") {
            const auto rep = convergence_study(convergence_setup(p.config));
            write_text(render_config(p.config), dir / "config.txt");
            write_text(to_json(rep).dump(2) + "\n", dir / "convergence.json");
            std::printf("%s: spatial order %.4g, temporal order %.4g\n", dir.string().c_str(),
                        rep.estimated_spatial_order, rep.estimated_temporal_order);
            continue;
        }
        const auto r = execute(p.config);
        write_outputs(r, dir);
        report_run(r, dir);
    }
    if (!any) throw std::invalid_argument("no variant '" + only.value_or("") + "' in " + figure);
    return kOk;
}

int cmd_energy(const std::string& snapshot, const std::string& config) {
    const RunConfig c = load_config(config);
    const auto snap = read_snapshot(snapshot);
    if (snap.grid.n() != c.n) {
        throw ConfigError("snapshot has n=" + std::to_string(snap.grid.n()) + " but grid.n=" + std::to_string(c.n),
                          "grid.n", 0);
    }
    const auto e = total_energy(snap.state, c.model, snap.grid);
    std::cout << kEnergyHeader << "\n" << energy_row(snap.t, e) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ferronematic gradient-flow solver"};
    app.require_subcommand(1);

    std::string config_path, snapshot_path, figure;
    std::optional<std::string> out, only;
    std::optional<double> max_time;
    std::optional<int> n;
    bool spatial_only = false, temporal_only = false, list = false;
    std::string root = "reproduce";

    auto* run = app.add_subcommand("run", "Run one configuration");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--out", out, "output directory (overrides output.dir)");
    run->add_option("--max-time", max_time, "final time (overrides solver.max_time)");
    run->add_option("--n", n, "nodes per axis (overrides grid.n)");

    auto* conv = app.add_subcommand("converge", "Self-convergence study of a configuration");
    conv->add_option("config", config_path, "config file")->required();
    conv->add_option("--out", out, "output directory (overrides output.dir)");
    conv->add_flag("--spatial-only", spatial_only);
    conv->add_flag("--temporal-only", temporal_only);

    auto* rep = app.add_subcommand("reproduce", "Run the presets behind a figure");
    rep->add_option("figure", figure, "figure id");
    rep->add_option("--out", root, "root output directory");
    rep->add_option("--only", only, "run a single variant");
    rep->add_flag("--list", list, "list figure ids and variants");

    auto* en = app.add_subcommand("energy", "Energy breakdown of a snapshot");
    en->add_option("snapshot", snapshot_path, "snapshot file")->required();
    en->add_option("config", config_path, "config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*run) return cmd_run(config_path, out, max_time, n);
        if (*conv) return cmd_converge(config_path, out, spatial_only, temporal_only);
        if (*rep) {
            if (list) {
                for (const auto& id : figure_ids()) {
                    std::cout << id;
                    for (const auto& p : presets(id)) std::cout << " " << p.variant;
                    std::cout << "\n";
                }
                return kOk;
            }
            if (figure.empty()) throw std::invalid_argument("reproduce needs a figure id (see --list)");
            return cmd_reproduce(figure, root, only);
        }
        if (*en) return cmd_energy(snapshot_path, config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const StepFailure& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kSolver;
    } catch (const SingularSystemError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kSolver;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::runtime_error& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kSolver;
    }
    return kOk;
}
