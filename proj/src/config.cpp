#include "ferronematic/config.hpp"
#include "ferronematic/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <system_error>

namespace ferronematic {

const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::DegreeK: return "degree_k";
        case ScenarioKind::Tangent: return "tangent";
        case ScenarioKind::Smooth: return "smooth";
    }
    return "?";
}

namespace {

enum class Need { Always, Optional, DegreeK, Tangent, Smooth };

struct Entry {
    std::string key;
    Need need;
    // Applies the raw value; returns an error message or "".
    std::function<std::string(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
    /// Only rendered / accepted for this scenario kind (nullptr = any).
    const ScenarioKind* only_for = nullptr;
};

const ScenarioKind kDegreeK = ScenarioKind::DegreeK;
const ScenarioKind kTangent = ScenarioKind::Tangent;
const ScenarioKind kSmooth = ScenarioKind::Smooth;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& v, double& out) {
    const char* first = v.data();
    const char* last = v.data() + v.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_int(const std::string& v, int& out) {
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    return ec == std::errc() && ptr == v.data() + v.size();
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

using Check = std::function<std::string(double)>;

std::string positive(double v) { return v > 0 && std::isfinite(v) ? "" : "must be > 0"; }
std::string nonnegative(double v) { return v >= 0 && std::isfinite(v) ? "" : "must be >= 0"; }
std::string finite(double v) { return std::isfinite(v) ? "" : "must be finite"; }

template <typename Get>
Entry real_entry(std::string key, Need need, Get ref, Check check, const ScenarioKind* only = nullptr) {
    Entry e;
    e.key = std::move(key);
    e.need = need;
    e.only_for = only;
    e.set = [ref, check](RunConfig& c, const std::string& v) -> std::string {
        double x;
        if (!parse_double(v, x)) return "expected a number, got '" + v + "'";
        if (auto msg = check(x); !msg.empty()) return msg;
        ref(c) = x;
        return "";
    };
    e.get = [ref](const RunConfig& c) { return format_double(ref(const_cast<RunConfig&>(c))); };
    return e;
}

template <typename Get>
Entry int_entry(std::string key, Need need, Get ref, int min_value, const ScenarioKind* only = nullptr) {
    Entry e;
    e.key = std::move(key);
    e.need = need;
    e.only_for = only;
    e.set = [ref, min_value](RunConfig& c, const std::string& v) -> std::string {
        int x;
        if (!parse_int(v, x)) return "expected an integer, got '" + v + "'";
        if (x < min_value) return "must be >= " + std::to_string(min_value);
        ref(c) = x;
        return "";
    };
    e.get = [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); };
    return e;
}

template <typename Get>
Entry bool_entry(std::string key, Need need, Get ref) {
    Entry e;
    e.key = std::move(key);
    e.need = need;
    e.set = [ref](RunConfig& c, const std::string& v) -> std::string {
        if (v == "true") ref(c) = true;
        else if (v == "false") ref(c) = false;
        else return "expected true or false, got '" + v + "'";
        return "";
    };
    e.get = [ref](const RunConfig& c) { return std::string(ref(const_cast<RunConfig&>(c)) ? "true" : "false"); };
    return e;
}

const std::vector<Entry>& schema() {
    static const std::vector<Entry> entries = [] {
        std::vector<Entry> s;
        // l1 and l1_prime are handled separately (exactly one is required).
        s.push_back(real_entry("model.l2", Need::Always, [](RunConfig& c) -> double& { return c.model.l2; }, positive));
        s.push_back(real_entry("model.c1", Need::Always, [](RunConfig& c) -> double& { return c.model.c1; }, nonnegative));
        s.push_back(real_entry("model.c2", Need::Always, [](RunConfig& c) -> double& { return c.model.c2; }, nonnegative));
        s.push_back(real_entry("model.c3", Need::Always, [](RunConfig& c) -> double& { return c.model.c3; }, nonnegative));
        s.push_back(real_entry("model.xi", Need::Always, [](RunConfig& c) -> double& { return c.model.xi; }, positive));
        s.push_back(real_entry("model.eta1", Need::Optional, [](RunConfig& c) -> double& { return c.model.eta1; }, positive));
        s.push_back(real_entry("model.eta2", Need::Optional, [](RunConfig& c) -> double& { return c.model.eta2; }, positive));
        s.push_back(real_entry("model.h1", Need::Optional, [](RunConfig& c) -> double& { return c.model.h_ext(0); }, finite));
        s.push_back(real_entry("model.h2", Need::Optional, [](RunConfig& c) -> double& { return c.model.h_ext(1); }, finite));
        s.push_back(real_entry("model.h3", Need::Optional, [](RunConfig& c) -> double& { return c.model.h_ext(2); }, finite));
        s.push_back(bool_entry("model.m3_enabled", Need::Optional, [](RunConfig& c) -> bool& { return c.model.m3_enabled; }));

        s.push_back(int_entry("grid.n", Need::Always, [](RunConfig& c) -> int& { return c.n; }, 3));

        s.push_back(real_entry("solver.delta_t", Need::Always, [](RunConfig& c) -> double& { return c.solver.delta_t; }, positive));
        s.push_back(real_entry("solver.max_time", Need::Always, [](RunConfig& c) -> double& { return c.solver.max_time; }, nonnegative));
        s.push_back(real_entry("solver.epsilon", Need::Optional, [](RunConfig& c) -> double& { return c.solver.epsilon; }, positive));
        s.push_back(int_entry("solver.max_inner_iters", Need::Optional, [](RunConfig& c) -> int& { return c.solver.max_inner_iters; }, 1));
        s.push_back(real_entry("solver.steady_tol", Need::Optional, [](RunConfig& c) -> double& { return c.solver.steady_tol; }, nonnegative));
        s.push_back(int_entry("solver.record_every", Need::Optional, [](RunConfig& c) -> int& { return c.solver.record_every; }, 1));
        {
            Entry e;
            e.key = "solver.centering";
            e.need = Need::Optional;
            e.set = [](RunConfig& c, const std::string& v) -> std::string {
                if (v == "centered") c.solver.centering = TimeCentering::Centered;
                else if (v == "printed") c.solver.centering = TimeCentering::Printed;
                else return "expected centered or printed, got '" + v + "'";
                return "";
            };
            e.get = [](const RunConfig& c) { return std::string(to_string(c.solver.centering)); };
            s.push_back(e);
        }
        s.push_back(bool_entry("solver.diffusion_only", Need::Optional, [](RunConfig& c) -> bool& { return c.solver.diffusion_only; }));

        {
            Entry e;
            e.key = "scenario.kind";
            e.need = Need::Always;
            e.set = [](RunConfig& c, const std::string& v) -> std::string {
                if (v == "degree_k") c.scenario.kind = ScenarioKind::DegreeK;
                else if (v == "tangent") c.scenario.kind = ScenarioKind::Tangent;
                else if (v == "smooth") c.scenario.kind = ScenarioKind::Smooth;
                else return "expected degree_k, tangent or smooth, got '" + v + "'";
                return "";
            };
            e.get = [](const RunConfig& c) { return std::string(to_string(c.scenario.kind)); };
            s.push_back(e);
        }
        s.push_back(int_entry("scenario.k", Need::DegreeK, [](RunConfig& c) -> int& { return c.scenario.k; }, 1, &kDegreeK));
        s.push_back(real_entry("scenario.m3_b", Need::Optional, [](RunConfig& c) -> double& { return c.scenario.m3_b; }, finite));
        s.push_back(real_entry("scenario.c_init", Need::Tangent, [](RunConfig& c) -> double& { return c.scenario.c_init; }, finite, &kTangent));
        s.push_back(real_entry("scenario.m3_i", Need::Optional, [](RunConfig& c) -> double& { return c.scenario.m3_i; }, finite, &kTangent));
        s.push_back(real_entry("scenario.amplitude", Need::Optional, [](RunConfig& c) -> double& { return c.scenario.amplitude; }, finite, &kSmooth));

        {
            Entry e;
            e.key = "output.dir";
            e.need = Need::Optional;
            e.set = [](RunConfig& c, const std::string& v) -> std::string {
                if (v.empty()) return "must not be empty";
                c.output_dir = v;
                return "";
            };
            e.get = [](const RunConfig& c) { return c.output_dir; };
            s.push_back(e);
        }
        s.push_back(int_entry("output.snapshot_every", Need::Optional, [](RunConfig& c) -> int& { return c.solver.snapshot_every; }, 0));
        return s;
    }();
    return entries;
}

const Entry* find_entry(const std::string& key) {
    for (const auto& e : schema()) {
        if (e.key == key) return &e;
    }
    return nullptr;
}

bool applies(const Entry& e, ScenarioKind kind) {
    if (e.only_for && *e.only_for != kind) return false;
    // m3_b has no meaning for smooth data.
    if (e.key == "scenario.m3_b" && kind == ScenarioKind::Smooth) return false;
    return true;
}

bool required_for(Need need, ScenarioKind kind) {
    switch (need) {
        case Need::Always: return true;
        case Need::Optional: return false;
        case Need::DegreeK: return kind == ScenarioKind::DegreeK;
        case Need::Tangent: return kind == ScenarioKind::Tangent;
        case Need::Smooth: return kind == ScenarioKind::Smooth;
    }
    return false;
}

}  // namespace

std::vector<std::string> required_keys() {
    std::vector<std::string> out{"model.l1_prime"};
    for (const auto& e : schema()) {
        if (e.need != Need::Optional) out.push_back(e.key);
    }
    return out;
}

void validate(const RunConfig& c) {
    try {
        c.model.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid model: ") + e.what(), "model", 0);
    }
    const auto g = Grid2D<double>::make(c.n);
    try {
        c.solver.validate(g);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid solver settings: ") + e.what(), "solver", 0);
    }
    if (c.scenario.kind == ScenarioKind::DegreeK && c.scenario.k < 1) {
        throw ConfigError("scenario.k must be >= 1", "scenario.k", 0);
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::map<std::string, std::pair<std::string, int>> values;  // key -> (value, line)

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'", "", line_no);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key != "model.l1" && key != "model.l1_prime" && !find_entry(key)) {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'", key, line_no);
        }
        if (values.count(key)) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "' (first on line " +
                                  std::to_string(values[key].second) + ")",
                              key, line_no);
        }
        values[key] = {value, line_no};
    }

    auto fail = [](const std::string& key, int line, const std::string& msg) {
        throw ConfigError("line " + std::to_string(line) + ": " + key + " " + msg, key, line);
    };

    // The scenario kind decides which keys are required, so read it first.
    ScenarioKind kind = ScenarioKind::DegreeK;
    const bool has_kind = values.count("scenario.kind") > 0;
    if (has_kind) {
        const auto& [v, line] = values["scenario.kind"];
        if (auto msg = find_entry("scenario.kind")->set(c, v); !msg.empty()) fail("scenario.kind", line, msg);
        kind = c.scenario.kind;
    }

    std::vector<std::string> missing;
    const bool has_l1 = values.count("model.l1") > 0;
    const bool has_l1p = values.count("model.l1_prime") > 0;
    if (has_l1 && has_l1p) {
        throw ConfigError("line " + std::to_string(values["model.l1"].second) +
                              ": give either model.l1 or model.l1_prime, not both",
                          "model.l1", values["model.l1"].second);
    }
    if (!has_l1 && !has_l1p) missing.push_back("model.l1_prime (or model.l1)");
    for (const auto& e : schema()) {
        if (e.key == "scenario.kind") {
            if (!has_kind) missing.push_back(e.key);
            continue;
        }
        const bool present = values.count(e.key) > 0;
        if (!present && has_kind && required_for(e.need, kind)) missing.push_back(e.key);
        if (!present && !has_kind && e.need == Need::Always) missing.push_back(e.key);
    }
    if (!missing.empty()) {
        std::string msg = "missing required key" + std::string(missing.size() > 1 ? "s" : "") + ":";
        for (const auto& k : missing) msg += " " + k;
        throw ConfigError(msg, missing.front(), 0);
    }

    for (const auto& [key, vl] : values) {
        const auto& [value, line] = vl;
        if (key == "scenario.kind") continue;
        if (key == "model.l1" || key == "model.l1_prime") {
            double x;
            if (!parse_double(value, x)) fail(key, line, "expected a number, got '" + value + "'");
            if (auto msg = positive(x); !msg.empty()) fail(key, line, msg);
            c.model.l1 = key == "model.l1" ? x : x / 2;
            continue;
        }
        const Entry* e = find_entry(key);
        if (!applies(*e, kind)) fail(key, line, std::string("does not apply to scenario.kind = ") + to_string(kind));
        if (auto msg = e->set(c, value); !msg.empty()) fail(key, line, msg);
    }

    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string render_config(const RunConfig& c) {
    std::ostringstream out;
    std::string section;
    auto emit = [&](const std::string& key, const std::string& value) {
        const std::string sec = key.substr(0, key.find('.'));
        if (sec != section) {
            if (!section.empty()) out << "\n";
            section = sec;
        }
        out << key << " = " << value << "\n";
    };
    emit("model.l1_prime", format_double(2 * c.model.l1));
    for (const auto& e : schema()) {
        if (!applies(e, c.scenario.kind)) continue;
        emit(e.key, e.get(c));
    }
    return out.str();
}

}  // namespace ferronematic
