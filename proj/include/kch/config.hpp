#pragma once

#include "kch/coupling.hpp"
#include "kch/errors.hpp"

#include <string>

namespace kch {

struct OutputConfig {
    std::string directory = "out";
    bool csv = true;
    bool snapshots = false;
};

struct RunConfig {
    int n1 = 32, n2 = 32, n3 = 33;
    SolverConfig solver;
    TimeConfig time;
    double apriori_c0 = 10.0;
    PresetParams preset;
    std::string snapshot;  // initial data from a snapshot file; takes precedence over the preset
    OutputConfig output;

    Grid grid() const { return Grid::make(n1, n2, n3); }
};

/// INI grammar: `[section]` headers, `key = value` lines, `#` or `;` comments,
/// blank lines. Keys are case-insensitive. Every key must belong to a section.
/// Unknown or repeated keys and malformed values throw ConfigError with
/// "<source>:<line>: ...".
RunConfig parse_config_string(const std::string& text, const std::string& source = "<config>");
RunConfig parse_config(const std::string& path);

/// The full configuration (defaults filled) in the INI grammar above.
std::string describe(const RunConfig& cfg);

/// Closest known key for a misspelled one ("" when nothing is close), formatted
/// "nu/damping" when the match is an alias.
std::string suggest_key(const std::string& section, const std::string& key);

std::size_t edit_distance(const std::string& a, const std::string& b);

}  // namespace kch
