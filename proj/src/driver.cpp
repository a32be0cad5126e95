#include "ferronematic/driver.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "ferronematic/energy.hpp"
#include "ferronematic/io.hpp"

namespace ferronematic {

Scenario<double> make_scenario(const RunConfig& c, const Grid2D<double>& g) {
    switch (c.scenario.kind) {
        case ScenarioKind::DegreeK: return degree_k_scenario(g, c.scenario.k, c.scenario.m3_b);
        case ScenarioKind::Tangent:
            return tangent_scenario(g, c.scenario.c_init, c.scenario.m3_b, c.scenario.m3_i);
        case ScenarioKind::Smooth: return smooth_scenario(g, c.model, c.scenario.amplitude);
    }
    throw std::logic_error("unknown scenario kind");
}

RunResult execute(const RunConfig& c) {
    validate(c);
    const auto g = Grid2D<double>::make(c.n);
    const auto sc = make_scenario(c, g);
    return {c, g, run(sc.initial, sc.boundary, c.model, c.solver, g)};
}

namespace {

Json defects_json(const std::vector<Defect<double>>& ds) {
    Json arr = Json::array();
    for (const auto& d : ds) {
        arr.push_back({{"i", d.i},
                       {"j", d.j},
                       {"x", d.x},
                       {"y", d.y},
                       {"core_value", d.core_value},
                       {"vector_winding", d.vector_winding},
                       {"charge", d.charge}});
    }
    return arr;
}

Json cell_json(const CellCharge& c) {
    return {{"inside", c.inside},
            {"outside", c.outside},
            {"charged_cells_inside", c.charged_inside},
            {"charged_cells_outside", c.charged_outside}};
}

}  // namespace

Json summarize(const RunResult& r) {
    const auto& tr = r.trajectory;
    const auto& g = r.grid;
    const auto& s = tr.final_state;
    const auto& p = r.config.model;

    Json j;
    j["final_time"] = tr.final_time;
    j["steps"] = tr.steps;
    j["reached_steady"] = tr.reached_steady;

    int max_inner = 0;
    double max_final = 0;
    for (const auto& rep : tr.reports) {
        max_inner = std::max(max_inner, rep.inner_iterations);
        max_final = std::max(max_final, rep.final_increment_norm);
    }
    j["iterations"] = {{"cumulative_inner", tr.cumulative_inner_iterations()},
                       {"max_inner_per_step", max_inner},
                       {"max_final_increment", max_final},
                       {"last_step_change", tr.reports.empty() ? 0.0 : tr.reports.back().step_change_norm}};

    const double lb = energy_lower_bound(p, p.h_ext.norm());
    double e_min = tr.energies.empty() ? 0.0 : tr.energies.front().energy.total;
    for (const auto& e : tr.energies) e_min = std::min(e_min, e.energy.total);
    for (const auto& rep : tr.reports) e_min = std::min(e_min, rep.energy_after);
    j["energy"] = {{"initial", tr.energies.empty() ? 0.0 : tr.energies.front().energy.total},
                   {"final", tr.energies.empty() ? 0.0 : tr.energies.back().energy.total},
                   {"minimum", e_min},
                   {"lower_bound", lb},
                   {"dissipation_violations", count_dissipation_violations(tr.reports)}};

    const double margin = 0.1;
    double ax = p.h_ext(0), ay = p.h_ext(1);
    if (const double len = std::hypot(ax, ay); len > 0) {
        ax /= len;
        ay /= len;
    } else {
        ax = 1;
        ay = 0;
    }
    j["alignment"] = {{"axis", {ax, ay}},
                      {"margin", margin},
                      {"director", alignment_metric(s.q, g, ax, ay, margin)},
                      {"magnetization", alignment_metric(s.m, g, ax, ay, margin)}};

    const auto interior = linf_stats(s, g, g.delta_x());
    j["linf"] = {{"margin", g.delta_x()}, {"max_q", interior.max_q}, {"max_m", interior.max_m}};

    const auto ds = find_defects(s, g);
    j["defects"] = {{"threshold", DefectOptions{}.threshold},
                    {"q", defects_json(ds.q_defects)},
                    {"m", defects_json(ds.m_defects)},
                    {"q_total_vector_winding", total_vector_winding(ds.q_defects)},
                    {"m_total_winding", total_vector_winding(ds.m_defects)}};

    const int layer = std::max(1, static_cast<int>(std::lround(margin / g.delta_x())));
    j["winding"] = {{"boundary_q_vector", contour_winding(s.q.q11, s.q.q12, g)},
                    {"boundary_m", contour_winding(s.m.m1, s.m.m2, g)},
                    {"cell_margin_nodes", layer},
                    {"cells_q", cell_json(cell_charge(s.q.q11, s.q.q12, g, layer))},
                    {"cells_m", cell_json(cell_charge(s.m.m1, s.m.m2, g, layer))}};
    return j;
}

void write_outputs(const RunResult& r, const std::filesystem::path& dir) {
    write_text(render_config(r.config), dir / "config.txt");
    write_energy_series(r.trajectory.energies, dir / "energy.csv");
    write_iteration_log(r.trajectory.reports, r.config.solver.delta_t, dir / "iterations.csv");
    for (const auto& snap : r.trajectory.snapshots) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%08ld.csv", snap.step);
        write_snapshot(snap.state, r.grid, snap.t, dir / name);
    }
    write_text(summarize(r).dump(2) + "\n", dir / "summary.json");
}

RunConfig degree_k_base() {
    RunConfig c;
    c.model.l1 = 0.005;
    c.model.l2 = 0.01;
    c.model.c1 = 2;
    c.model.c2 = 8;
    c.model.c3 = 2;
    c.model.xi = 1;
    c.model.eta1 = c.model.eta2 = 1;
    c.n = 51;
    c.solver.delta_t = 1e-5;
    c.solver.max_time = 0.01;
    c.scenario.kind = ScenarioKind::DegreeK;
    c.scenario.k = 1;
    c.scenario.m3_b = 0;
    return c;
}

namespace {

RunConfig tangent_base(double xi, double c1, double eta, double m3) {
    RunConfig c;
    c.model.l1 = 0.0005;
    c.model.l2 = 0.001;
    c.model.c1 = c1;
    c.model.c2 = 8;
    c.model.c3 = 2;
    c.model.xi = xi;
    c.model.eta1 = c.model.eta2 = eta;
    c.n = 51;
    c.solver.delta_t = 1e-5;
    // Runs stop at steady state; the cap is a few relaxation times for these frictions.
    c.solver.max_time = eta * 2000;
    c.solver.record_every = 1000;
    c.scenario.kind = ScenarioKind::Tangent;
    c.scenario.c_init = c1;
    c.scenario.m3_b = m3;
    c.scenario.m3_i = m3;
    return c;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void both_m3(std::vector<Preset>& out, const std::string& stem, RunConfig c) {
    c.model.m3_enabled = false;
    out.push_back({stem + "_m3off", c});
    c.model.m3_enabled = true;
    out.push_back({stem + "_m3on", c});
}

}  // namespace

std::vector<std::string> figure_ids() {
    return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "test-xi1", "test-xi10", "hsweep-xi1", "hsweep-xi10"};
}

std::vector<Preset> presets(const std::string& figure) {
    std::vector<Preset> out;
    if (figure == "fig2" || figure == "fig3") {
        for (double h : {0.0, 0.4, 0.875, 4.0}) {
            RunConfig c = degree_k_base();
            c.scenario.k = figure == "fig2" ? 1 : 2;
            c.model.h_ext << h, 0, 0;
            both_m3(out, "h" + num(h), c);
        }
    } else if (figure == "fig4") {
        for (double xi : {0.025, 0.25, 0.5, 2.5}) {
            RunConfig c = degree_k_base();
            c.scenario.k = 2;
            c.model.xi = xi;
            c.model.h_ext << 0.4, 0, 0;
            both_m3(out, "xi" + num(xi), c);
        }
    } else if (figure == "fig5") {
        for (double c1 : {1.0, 2.0, 3.0, 5.0}) {
            RunConfig c = degree_k_base();
            c.scenario.k = 2;
            c.model.c1 = c1;
            c.model.h_ext << 0.4, 0, 0;
            both_m3(out, "c1_" + num(c1), c);
        }
    } else if (figure == "fig6") {
        for (double c3 : {2.5, 5.0, 10.0, 20.0}) {
            RunConfig c = degree_k_base();
            c.scenario.k = 2;
            c.model.c3 = c3;
            c.model.h_ext << 0.4, 0, 0;
            both_m3(out, "c3_" + num(c3), c);
        }
    } else if (figure == "test-xi1" || figure == "test-xi10") {
        const bool one = figure == "test-xi1";
        RunConfig c = tangent_base(one ? 1.0 : 10.0, one ? 0.5 : 0.25, 0.0005, 0.0);
        c.model.m3_enabled = false;
        out.push_back({"m3off", c});
    } else if (figure == "hsweep-xi1" || figure == "hsweep-xi10") {
        const bool one = figure == "hsweep-xi1";
        const double mid = one ? 0.00265 : 0.002825;
        for (double h : {0.0, mid, 0.25}) {
            RunConfig c = tangent_base(one ? 1.0 : 10.0, one ? 0.5 : 0.25, one ? 0.0001 : 0.0005, 0.25);
            c.model.h_ext << h, 0, 0;
            both_m3(out, "h" + num(h), c);
        }
    } else if (figure == "fig1") {
        RunConfig c = degree_k_base();
        c.solver.max_time = 0.005;
        out.push_back({"degree_k", c});
        c.scenario.kind = ScenarioKind::Smooth;
        c.scenario.m3_b = 0;
        out.push_back({"smooth", c});
    } else {
        std::string known;
        for (const auto& id : figure_ids()) known += " " + id;
        throw std::invalid_argument("unknown figure id '" + figure + "'; known:" + known);
    }
    for (auto& p : out) p.config.output_dir = figure + "/" + p.variant;
    return out;
}

ConvergenceSetup<double> convergence_setup(const RunConfig& c) {
    validate(c);
    ConvergenceSetup<double> s;
    s.params = c.model;
    s.solver = c.solver;
    s.horizon = c.solver.max_time;
    const RunConfig copy = c;
    s.scenario = [copy](const Grid2D<double>& g) { return make_scenario(copy, g); };
    return s;
}

Json to_json(const ConvergenceReport<double>& r) {
    auto pairs = [](const std::vector<std::pair<double, double>>& v, const char* step) {
        Json arr = Json::array();
        for (const auto& [h, e] : v) arr.push_back({{step, h}, {"error", e}});
        return arr;
    };
    auto order = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
    return {{"grid_errors", pairs(r.grid_errors, "delta_x")},
            {"time_errors", pairs(r.time_errors, "delta_t")},
            {"estimated_spatial_order", order(r.estimated_spatial_order)},
            {"estimated_temporal_order", order(r.estimated_temporal_order)}};
}

}  // namespace ferronematic
