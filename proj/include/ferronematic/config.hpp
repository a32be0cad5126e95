#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "ferronematic/params.hpp"
#include "ferronematic/solver.hpp"

namespace ferronematic {

enum class ScenarioKind { DegreeK, Tangent, Smooth };

const char* to_string(ScenarioKind k);

/// Which initial/boundary data generator a run uses, with its arguments.
struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::DegreeK;
    int k = 1;                ///< degree_k
    double m3_b = 0;          ///< degree_k, tangent: boundary M3
    double c_init = 0.5;      ///< tangent: initial (Q11, Q12) = (M1, M2) = (c, c)
    double m3_i = 0;          ///< tangent: initial M3
    double amplitude = 0.2;   ///< smooth: bump amplitude

    bool operator==(const ScenarioSpec&) const = default;
};

struct RunConfig {
    ModelParams<double> model;
    SolverConfig<double> solver;
    int n = 51;
    ScenarioSpec scenario;
    std::string output_dir = "out";

    bool operator==(const RunConfig&) const = default;
};

/// Parse or validation failure. `line` is 0 when the problem is not tied to one line
/// (missing keys, cross-key constraints).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string key, int line)
        : std::runtime_error(what), key_(std::move(key)), line_(line) {}
    const std::string& key() const { return key_; }
    int line() const { return line_; }

private:
    std::string key_;
    int line_;
};

/// Parses the flat `section.key = value` format. `#` starts a comment; blank lines are
/// ignored. Numbers use the C locale. Every key must be known, appear once and hold a
/// value of the right type; the result is validated as a whole.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config: parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& c);

/// Keys a document must contain for the given scenario kind (all kinds if none).
std::vector<std::string> required_keys();

void validate(const RunConfig& c);

}  // namespace ferronematic
