#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "ferronematic/energy.hpp"
#include "ferronematic/grid.hpp"
#include "ferronematic/solver.hpp"

namespace ferronematic {

/// File could not be opened, written or parsed; the message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed snapshot content. `row` is the 0-based data row (-1 for the preamble).
class SnapshotFormatError : public IoError {
public:
    SnapshotFormatError(const std::string& what, long row) : IoError(what), row_(row) {}
    long row() const { return row_; }

private:
    long row_;
};

struct SnapshotData {
    Grid2D<double> grid;
    double t = 0;
    State<double> state;
};

inline constexpr const char* kSnapshotHeader = "x,y,q11,q12,m1,m2,m3";
inline constexpr const char* kEnergyHeader = "t,total,elastic_q,elastic_m,bulk_q,bulk_m,coupling_qm,stray,coupling_qh,zeeman";

/// Formats with 17 significant digits, which round-trips every double.
std::string format17(double v);

/// Writes `# t=<t> n=<n>`, the header line, then one row per node with x varying
/// fastest (row-major in y).
void write_snapshot(const State<double>& s, const Grid2D<double>& g, double t, const std::filesystem::path& path);
std::string snapshot_text(const State<double>& s, const Grid2D<double>& g, double t);

SnapshotData read_snapshot(const std::filesystem::path& path);
SnapshotData parse_snapshot(const std::string& text);

std::string energy_row(double t, const EnergyBreakdown<double>& e);
void write_energy_series(const std::vector<EnergySample<double>>& series, const std::filesystem::path& path);

/// step,t,inner_iterations,cumulative_iterations,final_increment,step_change
void write_iteration_log(const std::vector<StepReport<double>>& reports, double delta_t,
                         const std::filesystem::path& path);

void write_text(const std::string& text, const std::filesystem::path& path);

}  // namespace ferronematic
