#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpl/growth.hpp"

namespace qpl {

enum class Command { verify, simulate, limit_shape, pushforward };
enum class Format { csv, json };

/// Everything a CLI run depends on. `out` is where the result goes and is not part of
/// the experiment, so it is never embedded in output headers.
struct RunConfig {
    Command command = Command::verify;
    double q = 0.5;
    int n = 100;
    int trials = 10;
    int moments = 3;
    std::uint64_t seed = 42;
    Format format = Format::csv;
    Scaling scaling = Scaling::limit;
    std::optional<double> tolerance;  // verify: replaces every suite tolerance
    std::optional<double> x_min;      // limit-shape grid
    std::optional<double> x_max;
    int x_points = 101;
    std::string out;                  // empty: standard output
};

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

std::string to_string(Command c);
std::string to_string(Format f);
std::string to_string(Scaling s);
Command parse_command(const std::string& text);
Format parse_format(const std::string& text);
Scaling parse_scaling(const std::string& text);

/// 17 significant digits, '.' decimal point; reads back to the same double.
std::string format_double(double value);

/// Flat `key = value` lines. Blank lines and lines starting with '#' are skipped, except
/// `#! key=value` header lines, which are read as entries so that an output file can be
/// used as its own config. ConfigError on malformed lines.
ConfigEntries parse_key_values(const std::string& text);

/// Reads a config file: key=value text, a CSV output (starts with `#!`; only its header
/// lines are read), or a JSON output (via its "config" object). ConfigError if unreadable
/// or malformed.
ConfigEntries load_config_file(const std::string& path);

/// Applies entries in order (later wins). Unknown keys and unparsable values raise ConfigError.
/// Keys that only describe an output (schema, derived quantities) are ignored.
void apply_entries(RunConfig& cfg, const ConfigEntries& entries);

/// Range checks for the selected command; ConfigError naming the field.
void validate(const RunConfig& cfg);

/// The config as ordered entries (everything except `out`); apply_entries(to_entries(c))
/// reproduces c exactly.
ConfigEntries to_entries(const RunConfig& cfg);

}  // namespace qpl
