#include "ferronematic/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace ferronematic {

std::string format17(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

void write_text(const std::string& text, const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.close();
    if (!out) throw IoError("write failed for " + path.string());
}

std::string snapshot_text(const State<double>& s, const Grid2D<double>& g, double t) {
    require_same_grid(g, s);
    std::string out = "# t=" + format17(t) + " n=" + std::to_string(g.n()) + "\n";
    out += kSnapshotHeader;
    out += "\n";
    out.reserve(out.size() + g.node_count() * 7 * 24);
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            out += format17(g.x(i));
            out += ',';
            out += format17(g.y(j));
            for (auto c : kAllComponents) {
                out += ',';
                out += format17(s[c](i, j));
            }
            out += '\n';
        }
    }
    return out;
}

void write_snapshot(const State<double>& s, const Grid2D<double>& g, double t, const std::filesystem::path& path) {
    write_text(snapshot_text(s, g, t), path);
}

namespace {

bool parse_cell(const std::string& cell, double& v) {
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    return ec == std::errc() && ptr == cell.data() + cell.size() && !cell.empty();
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

SnapshotData parse_snapshot(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# t=", 0) != 0) {
        throw SnapshotFormatError("snapshot must start with '# t=<time> n=<nodes>'", -1);
    }
    SnapshotData out;
    {
        const auto npos = line.find(" n=");
        if (npos == std::string::npos) throw SnapshotFormatError("snapshot preamble lacks n=", -1);
        const std::string ts = line.substr(4, npos - 4);
        const std::string ns = line.substr(npos + 3);
        int n = 0;
        auto [p, ec] = std::from_chars(ns.data(), ns.data() + ns.size(), n);
        if (!parse_cell(ts, out.t) || ec != std::errc() || p != ns.data() + ns.size()) {
            throw SnapshotFormatError("snapshot preamble is malformed: '" + line + "'", -1);
        }
        try {
            out.grid = Grid2D<double>::make(n);
        } catch (const std::invalid_argument& e) {
            throw SnapshotFormatError(std::string("snapshot preamble: ") + e.what(), -1);
        }
    }
    if (!std::getline(in, line) || line != kSnapshotHeader) {
        throw SnapshotFormatError(std::string("header mismatch, expected '") + kSnapshotHeader + "'", -1);
    }
    const auto& g = out.grid;
    out.state = State<double>::zeros(g);
    const long expected = static_cast<long>(g.node_count());
    long row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= expected) throw SnapshotFormatError("more than " + std::to_string(expected) + " data rows", row);
        double vals[7];
        std::size_t start = 0;
        int cells = 0;
        while (true) {
            const auto comma = line.find(',', start);
            const std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (cells == 7) throw SnapshotFormatError("row " + std::to_string(row) + ": too many cells", row);
            if (!parse_cell(cell, vals[cells])) {
                throw SnapshotFormatError("row " + std::to_string(row) + ": non-numeric cell '" + cell + "'", row);
            }
            ++cells;
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (cells != 7) {
            throw SnapshotFormatError("row " + std::to_string(row) + ": expected 7 cells, got " + std::to_string(cells), row);
        }
        const int i = static_cast<int>(row % g.n());
        const int j = static_cast<int>(row / g.n());
        if (std::abs(vals[0] - g.x(i)) > 1e-12 || std::abs(vals[1] - g.y(j)) > 1e-12) {
            throw SnapshotFormatError("row " + std::to_string(row) + ": coordinates do not match node (" +
                                          std::to_string(i) + ", " + std::to_string(j) + ")",
                                      row);
        }
        for (int k = 0; k < 5; ++k) out.state[kAllComponents[k]](i, j) = vals[k + 2];
        ++row;
    }
    if (row != expected) {
        throw SnapshotFormatError("expected " + std::to_string(expected) + " data rows, got " + std::to_string(row), row);
    }
    return out;
}

SnapshotData read_snapshot(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        return parse_snapshot(text);
    } catch (const SnapshotFormatError& e) {
        throw SnapshotFormatError(path.string() + ": " + e.what(), e.row());
    }
}

std::string energy_row(double t, const EnergyBreakdown<double>& e) {
    std::string out = format17(t);
    for (double v : {e.total, e.elastic_q, e.elastic_m, e.bulk_q, e.bulk_m, e.coupling_qm, e.stray, e.coupling_qh,
                     e.zeeman}) {
        out += ',';
        out += format17(v);
    }
    return out;
}

void write_energy_series(const std::vector<EnergySample<double>>& series, const std::filesystem::path& path) {
    std::string out = std::string(kEnergyHeader) + "\n";
    for (const auto& s : series) out += energy_row(s.t, s.energy) + "\n";
    write_text(out, path);
}

void write_iteration_log(const std::vector<StepReport<double>>& reports, double delta_t,
                         const std::filesystem::path& path) {
    std::string out = "step,t,inner_iterations,cumulative_iterations,final_increment,step_change\n";
    long cumulative = 0;
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const auto& r = reports[k];
        cumulative += r.inner_iterations;
        out += std::to_string(k + 1) + "," + format17(double(k + 1) * delta_t) + "," + std::to_string(r.inner_iterations) +
               "," + std::to_string(cumulative) + "," + format17(r.final_increment_norm) + "," +
               format17(r.step_change_norm) + "\n";
    }
    write_text(out, path);
}

}  // namespace ferronematic
