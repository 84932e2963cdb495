#pragma once

// Run configuration files.
//
// Sectioned key-value text:
//
//   # comment
//   [dgp]
//   kind = discrete            # or gaussian
//   n = 10000
//   ...
//   [scenario]
//   mechanisms = none, oracle  # discrete arms
//   r_values = 0.25, 0.5, 1    # gaussian arms
//   n_reps = 2000
//   seed = 7
//   [diagnostics]
//   test = retention           # none | retention | tnr
//   [output]
//   dir = out
//   format = csv               # RepTable file format: csv | json
//
// Every key must belong to its section (and to the chosen dgp kind); anything
// else is rejected with the offending key named.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "screenlab/montecarlo.hpp"
#include "screenlab/power.hpp"

namespace screenlab {

struct ConfigEntry {
    std::string value;
    int line = 0;
};

/// Parsed text: section -> key -> entry. Duplicate keys are an error.
using ConfigSections = std::map<std::string, std::map<std::string, ConfigEntry>>;

ConfigSections parse_config_text(std::string_view text);

enum class TableFormat { Csv, Json };

struct RunConfig {
    Scenario scenario;
    double beta_target = 0.0;
    std::optional<Diagnostic> diagnostic;
    double alpha = 0.05;
    int n_boot = 999;
    PowerSpec power;
    std::string out_dir = ".";
    TableFormat format = TableFormat::Csv;
};

/// Builds and validates a RunConfig. Throws Error(InvalidConfig).
RunConfig build_run_config(const ConfigSections& sections);
RunConfig load_run_config(const std::string& path);

// Value parsers shared with the command line. Throw InvalidConfig.
double parse_double(std::string_view text, std::string_view what);
std::size_t parse_count(std::string_view text, std::string_view what);
std::uint64_t parse_seed(std::string_view text, std::string_view what);
bool parse_bool(std::string_view text, std::string_view what);
std::vector<std::string> split_list(std::string_view text);

}  // namespace screenlab
