#include "kch/config.hpp"
#include "kch/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace kch {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Raised by value parsers; the caller prefixes the location and key.
struct BadValue {
    std::string rule;
};

double to_double(const std::string& v) {
    double x = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw BadValue{"expected a number"};
    return x;
}

long long to_integer(const std::string& v) {
    long long x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw BadValue{"expected an integer"};
    return x;
}

bool to_bool(const std::string& v) {
    const auto s = lower(v);
    if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
    if (s == "false" || s == "no" || s == "off" || s == "0") return false;
    throw BadValue{"expected true or false"};
}

double positive(const std::string& v) {
    const double x = to_double(v);
    if (!(x > 0.0)) throw BadValue{"must be > 0"};
    return x;
}

int positive_int(const std::string& v) {
    const auto x = to_integer(v);
    if (x < 1 || x > 1000000000) throw BadValue{"must be a positive integer"};
    return static_cast<int>(x);
}

int grid_size(const std::string& v, bool periodic) {
    const int n = positive_int(v);
    if (periodic && (n < 8 || (n & (n - 1)) != 0)) throw BadValue{"must be a power of two >= 8"};
    if (!periodic && (n < 9 || n > 1024)) throw BadValue{"must lie in [9, 1024]"};
    return n;
}

std::string format(double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string format(bool b) { return b ? "true" : "false"; }

struct KeySpec {
    const char* section;
    const char* key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> table = {
        {"grid", "n1", [](RunConfig& c, const std::string& v) { c.n1 = grid_size(v, true); },
         [](const RunConfig& c) { return std::to_string(c.n1); }},
        {"grid", "n2", [](RunConfig& c, const std::string& v) { c.n2 = grid_size(v, true); },
         [](const RunConfig& c) { return std::to_string(c.n2); }},
        {"grid", "n3", [](RunConfig& c, const std::string& v) { c.n3 = grid_size(v, false); },
         [](const RunConfig& c) { return std::to_string(c.n3); }},

        {"physics", "h", [](RunConfig& c, const std::string& v) { c.solver.plate.h = positive(v); },
         [](const RunConfig& c) { return format(c.solver.plate.h); }},
        {"physics", "lambda", [](RunConfig& c, const std::string& v) { c.solver.plate.lambda = positive(v); },
         [](const RunConfig& c) { return format(c.solver.plate.lambda); }},
        {"physics", "mu", [](RunConfig& c, const std::string& v) { c.solver.plate.mu = positive(v); },
         [](const RunConfig& c) { return format(c.solver.plate.mu); }},
        {"physics", "nu",
         [](RunConfig& c, const std::string& v) {
             const double x = to_double(v);
             if (!(x >= 0.0)) throw BadValue{"must be >= 0"};
             c.solver.plate.nu = x;
         },
         [](const RunConfig& c) { return format(c.solver.plate.nu); }},
        {"physics", "curvature_model",
         [](RunConfig& c, const std::string& v) {
             const auto s = lower(v);
             if (s == "non_normalized")
                 c.solver.plate.curvature = CurvatureModel::NonNormalized;
             else if (s == "normalized")
                 c.solver.plate.curvature = CurvatureModel::Normalized;
             else
                 throw BadValue{"expected non_normalized or normalized"};
         },
         [](const RunConfig& c) {
             return std::string(c.solver.plate.curvature == CurvatureModel::Normalized ? "normalized"
                                                                                       : "non_normalized");
         }},
        {"physics", "plate_model",
         [](RunConfig& c, const std::string& v) {
             const auto s = lower(v);
             if (s == "koiter")
                 c.solver.plate.model = PlateModel::Koiter;
             else if (s == "biharmonic")
                 c.solver.plate.model = PlateModel::Biharmonic;
             else
                 throw BadValue{"expected koiter or biharmonic"};
         },
         [](const RunConfig& c) {
             return std::string(c.solver.plate.model == PlateModel::Biharmonic ? "biharmonic" : "koiter");
         }},

        {"time", "dt", [](RunConfig& c, const std::string& v) { c.time.dt = positive(v); },
         [](const RunConfig& c) { return format(c.time.dt); }},
        {"time", "t_final",
         [](RunConfig& c, const std::string& v) {
             const double x = to_double(v);
             if (!(x >= 0.0)) throw BadValue{"must be >= 0"};
             c.time.t_final = x;
         },
         [](const RunConfig& c) { return format(c.time.t_final); }},
        {"time", "output_every", [](RunConfig& c, const std::string& v) { c.time.output_every = positive_int(v); },
         [](const RunConfig& c) { return std::to_string(c.time.output_every); }},

        {"solver", "pressure_tol", [](RunConfig& c, const std::string& v) { c.solver.fluid.pressure.tol = positive(v); },
         [](const RunConfig& c) { return format(c.solver.fluid.pressure.tol); }},
        {"solver", "pressure_max_iter",
         [](RunConfig& c, const std::string& v) { c.solver.fluid.pressure.max_iter = positive_int(v); },
         [](const RunConfig& c) { return std::to_string(c.solver.fluid.pressure.max_iter); }},
        {"solver", "picard_tol", [](RunConfig& c, const std::string& v) { c.solver.picard.tol = positive(v); },
         [](const RunConfig& c) { return format(c.solver.picard.tol); }},
        {"solver", "picard_max_iter",
         [](RunConfig& c, const std::string& v) { c.solver.picard.max_iter = positive_int(v); },
         [](const RunConfig& c) { return std::to_string(c.solver.picard.max_iter); }},
        {"solver", "relaxation",
         [](RunConfig& c, const std::string& v) {
             const double x = to_double(v);
             if (!(x > 0.0 && x <= 1.0)) throw BadValue{"must lie in (0, 1]"};
             c.solver.picard.relaxation = x;
         },
         [](const RunConfig& c) { return format(c.solver.picard.relaxation); }},
        {"solver", "cfl_max", [](RunConfig& c, const std::string& v) { c.solver.fluid.cfl_max = positive(v); },
         [](const RunConfig& c) { return format(c.solver.fluid.cfl_max); }},
        {"solver", "divergence_cleanup",
         [](RunConfig& c, const std::string& v) { c.solver.fluid.divergence_cleanup = to_bool(v); },
         [](const RunConfig& c) { return format(c.solver.fluid.divergence_cleanup); }},
        {"solver", "epsilon_smallness",
         [](RunConfig& c, const std::string& v) {
             const double x = to_double(v);
             if (!(x > 0.0 && x < 1.0)) throw BadValue{"must lie in (0, 1)"};
             c.solver.epsilon = x;
         },
         [](const RunConfig& c) { return format(c.solver.epsilon); }},
        {"solver", "c_min",
         [](RunConfig& c, const std::string& v) {
             const double x = to_double(v);
             if (!(x > 0.0 && x < 1.0)) throw BadValue{"must lie in (0, 1)"};
             c.solver.c_min = x;
         },
         [](const RunConfig& c) { return format(c.solver.c_min); }},
        {"solver", "apriori_c0", [](RunConfig& c, const std::string& v) { c.apriori_c0 = positive(v); },
         [](const RunConfig& c) { return format(c.apriori_c0); }},

        {"initial_data", "preset",
         [](RunConfig& c, const std::string& v) {
             const auto& names = preset_names();
             if (std::find(names.begin(), names.end(), v) == names.end()) {
                 std::string known;
                 for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
                 throw BadValue{"unknown preset (known: " + known + ")"};
             }
             c.preset.name = v;
         },
         [](const RunConfig& c) { return c.preset.name; }},
        {"initial_data", "amplitude",
         [](RunConfig& c, const std::string& v) {
             const double x = to_double(v);
             if (!(x >= 0.0)) throw BadValue{"must be >= 0"};
             c.preset.amplitude = x;
         },
         [](const RunConfig& c) { return format(c.preset.amplitude); }},
        {"initial_data", "swirl", [](RunConfig& c, const std::string& v) { c.preset.swirl = to_double(v); },
         [](const RunConfig& c) { return format(c.preset.swirl); }},
        {"initial_data", "shear", [](RunConfig& c, const std::string& v) { c.preset.shear = to_double(v); },
         [](const RunConfig& c) { return format(c.preset.shear); }},
        {"initial_data", "seed",
         [](RunConfig& c, const std::string& v) {
             const auto x = to_integer(v);
             if (x < 0) throw BadValue{"must be >= 0"};
             c.preset.seed = static_cast<std::uint64_t>(x);
         },
         [](const RunConfig& c) { return std::to_string(c.preset.seed); }},
        {"initial_data", "snapshot", [](RunConfig& c, const std::string& v) { c.snapshot = v; },
         [](const RunConfig& c) { return c.snapshot; }},

        {"output", "directory", [](RunConfig& c, const std::string& v) { c.output.directory = v; },
         [](const RunConfig& c) { return c.output.directory; }},
        {"output", "csv", [](RunConfig& c, const std::string& v) { c.output.csv = to_bool(v); },
         [](const RunConfig& c) { return format(c.output.csv); }},
        {"output", "snapshots", [](RunConfig& c, const std::string& v) { c.output.snapshots = to_bool(v); },
         [](const RunConfig& c) { return format(c.output.snapshots); }},
    };
    return table;
}

struct Alias {
    const char* section;
    const char* alias;
    const char* key;
};

constexpr Alias kAliases[] = {
    {"physics", "damping", "nu"},         {"physics", "thickness", "h"},
    {"physics", "curvature", "curvature_model"},
    {"time", "t_end", "t_final"},         {"time", "t", "t_final"},
    {"solver", "epsilon", "epsilon_smallness"},
    {"initial_data", "name", "preset"},   {"output", "dir", "directory"},
};

const KeySpec* find_key(const std::string& section, const std::string& key) {
    std::string k = key;
    for (const auto& a : kAliases)
        if (section == a.section && key == a.alias) k = a.key;
    for (const auto& spec : key_table())
        if (section == spec.section && k == spec.key) return &spec;
    return nullptr;
}

bool known_section(const std::string& s) {
    for (const auto& spec : key_table())
        if (s == spec.section) return true;
    return false;
}

std::string with_aliases(const std::string& section, const std::string& key) {
    std::string out = key;
    for (const auto& a : kAliases)
        if (section == a.section && key == a.key) out += std::string("/") + a.alias;
    return out;
}

}  // namespace

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

std::string suggest_key(const std::string& section, const std::string& key) {
    const std::string k = lower(key);
    std::size_t best = std::string::npos;
    std::string best_key, best_section;
    auto consider = [&](const std::string& sec, const std::string& candidate, const std::string& canonical) {
        const std::size_t d = edit_distance(k, candidate) + (sec == section ? 0 : 1);
        if (d < best) {
            best = d;
            best_key = canonical;
            best_section = sec;
        }
    };
    for (const auto& spec : key_table()) consider(spec.section, spec.key, spec.key);
    for (const auto& a : kAliases) consider(a.section, a.alias, a.key);
    const std::size_t limit = std::max<std::size_t>(2, k.size() / 3);
    if (best > limit) return "";
    const std::string name = with_aliases(best_section, best_key);
    return best_section == section ? name : "[" + best_section + "] " + name;
}

RunConfig parse_config_string(const std::string& text, const std::string& source) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    std::vector<std::pair<std::string, int>> seen;  // "section.key" and its line
    int lineno = 0;
    auto fail = [&](const std::string& msg) { throw ConfigError(source + ":" + std::to_string(lineno) + ": " + msg); };

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header '" + line + "'");
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (!known_section(section)) fail("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value', got '" + line + "'");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail("missing key before '='");
        if (section.empty()) fail("key '" + key + "' appears before any [section]");

        const KeySpec* spec = find_key(section, key);
        if (!spec) {
            std::string msg = "unknown key '" + key + "' in [" + section + "]";
            const auto hint = suggest_key(section, key);
            if (!hint.empty()) msg += "; did you mean " + hint + "?";
            fail(msg);
        }
        const std::string full = std::string(spec->section) + "." + spec->key;
        for (const auto& [name, at] : seen)
            if (name == full) fail(full + " is already set on line " + std::to_string(at));
        seen.emplace_back(full, lineno);
        if (value.empty()) fail(full + " has no value");
        try {
            spec->set(cfg, value);
        } catch (const BadValue& bad) {
            fail(full + " = " + value + " is invalid (" + bad.rule + ")");
        }
    }
    cfg.solver.plate.validate();
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_string(ss.str(), path);
}

std::string describe(const RunConfig& cfg) {
    std::ostringstream out;
    std::string section;
    for (const auto& spec : key_table()) {
        if (section != spec.section) {
            if (!section.empty()) out << '\n';
            section = spec.section;
            out << '[' << section << "]\n";
        }
        const auto value = spec.get(cfg);
        out << (value.empty() ? "# " : "") << spec.key << " = " << value << '\n';
    }
    return out.str();
}

}  // namespace kch
