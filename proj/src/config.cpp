#include "qpl/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace qpl {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text)
{
    T value{};
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ConfigError("invalid value '" + text + "' for " + key);
    return value;
}

// Keys written into output headers that describe results rather than inputs.
const std::set<std::string>& derived_keys()
{
    static const std::set<std::string> keys{"schema", "kernel_q", "branch_x", "branch_z", "branch_r",
                                            "tv_distance", "status"};
    return keys;
}

}  // namespace

std::string to_string(Command c)
{
    switch (c) {
    case Command::verify: return "verify";
    case Command::simulate: return "simulate";
    case Command::limit_shape: return "limit-shape";
    case Command::pushforward: return "pushforward";
    }
    return "verify";
}

std::string to_string(Format f)
{
    return f == Format::json ? "json" : "csv";
}

std::string to_string(Scaling s)
{
    return s == Scaling::fixed ? "fixed" : "limit";
}

Command parse_command(const std::string& text)
{
    if (text == "verify") return Command::verify;
    if (text == "simulate") return Command::simulate;
    if (text == "limit-shape") return Command::limit_shape;
    if (text == "pushforward") return Command::pushforward;
    throw ConfigError("unknown command '" + text + "'");
}

Format parse_format(const std::string& text)
{
    if (text == "csv") return Format::csv;
    if (text == "json") return Format::json;
    throw ConfigError("format must be csv or json, got '" + text + "'");
}

Scaling parse_scaling(const std::string& text)
{
    if (text == "limit") return Scaling::limit;
    if (text == "fixed") return Scaling::fixed;
    throw ConfigError("scaling must be limit or fixed, got '" + text + "'");
}

std::string format_double(double value)
{
    return fmt::format("{:.17g}", value);
}

ConfigEntries parse_key_values(const std::string& text)
{
    ConfigEntries entries;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string body = trim(line);
        if (body.rfind("#!", 0) == 0)
            body = trim(body.substr(2));
        else if (body.empty() || body[0] == '#')
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(number) + ": expected key=value, got '" + body + "'");
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(number) + ": empty key");
        entries.emplace_back(std::move(key), std::move(value));
    }
    return entries;
}

ConfigEntries load_config_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
        }
        if (!doc.contains("config") || !doc["config"].is_object())
            throw ConfigError("JSON file '" + path + "' has no \"config\" object");
        ConfigEntries entries;
        for (const auto& [key, value] : doc["config"].items())
            entries.emplace_back(key, value.is_string() ? value.get<std::string>() : value.dump());
        return entries;
    }
    try {
        if (first != std::string::npos && text.compare(first, 2, "#!") == 0) {
            // A previous CSV output: only its header carries the config.
            std::string header;
            std::istringstream lines(text);
            std::string line;
            while (std::getline(lines, line))
                if (trim(line).rfind("#!", 0) == 0) header += line + "\n";
            return parse_key_values(header);
        }
        return parse_key_values(text);
    } catch (const ConfigError& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
}

void apply_entries(RunConfig& cfg, const ConfigEntries& entries)
{
    for (const auto& [key, value] : entries) {
        if (key == "command")
            cfg.command = parse_command(value);
        else if (key == "q")
            cfg.q = parse_number<double>(key, value);
        else if (key == "n")
            cfg.n = parse_number<int>(key, value);
        else if (key == "trials")
            cfg.trials = parse_number<int>(key, value);
        else if (key == "moments")
            cfg.moments = parse_number<int>(key, value);
        else if (key == "seed")
            cfg.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "format")
            cfg.format = parse_format(value);
        else if (key == "scaling")
            cfg.scaling = parse_scaling(value);
        else if (key == "tolerance")
            cfg.tolerance = parse_number<double>(key, value);
        else if (key == "x_min")
            cfg.x_min = parse_number<double>(key, value);
        else if (key == "x_max")
            cfg.x_max = parse_number<double>(key, value);
        else if (key == "x_points")
            cfg.x_points = parse_number<int>(key, value);
        else if (key == "out")
            cfg.out = value;
        else if (!derived_keys().contains(key))
            throw ConfigError("unknown config key '" + key + "'");
    }
}

void validate(const RunConfig& cfg)
{
    if (!(cfg.q > 0.0 && cfg.q < 1.0))
        throw ConfigError("q must lie in (0,1), got " + format_double(cfg.q));
    if (cfg.tolerance && !(*cfg.tolerance > 0.0))
        throw ConfigError("tolerance must be positive");
    switch (cfg.command) {
    case Command::verify:
        break;
    case Command::simulate:
        if (cfg.n < 1 || cfg.n > kMaxGrowthBoxes)
            throw ConfigError("n must lie in [1, " + std::to_string(kMaxGrowthBoxes) + "] for simulate");
        if (cfg.trials < 1 || cfg.trials > 10'000'000)
            throw ConfigError("trials must lie in [1, 10000000]");
        if (cfg.moments < 1 || cfg.moments > 12)
            throw ConfigError("moments must lie in [1, 12]");
        break;
    case Command::limit_shape:
        if (cfg.moments < 1 || cfg.moments > 32)
            throw ConfigError("moments must lie in [1, 32] for limit-shape");
        if (cfg.x_points < 2 || cfg.x_points > 1'000'000)
            throw ConfigError("x_points must lie in [2, 1000000]");
        if (cfg.x_min && cfg.x_max && !(*cfg.x_min < *cfg.x_max))
            throw ConfigError("x_min must be below x_max");
        break;
    case Command::pushforward:
        if (cfg.n < 1)
            throw ConfigError("n must be at least 1 for pushforward");
        break;
    }
}

ConfigEntries to_entries(const RunConfig& cfg)
{
    ConfigEntries entries{
        {"command", to_string(cfg.command)},
        {"q", format_double(cfg.q)},
        {"n", std::to_string(cfg.n)},
        {"trials", std::to_string(cfg.trials)},
        {"moments", std::to_string(cfg.moments)},
        {"seed", std::to_string(cfg.seed)},
        {"format", to_string(cfg.format)},
        {"scaling", to_string(cfg.scaling)},
        {"x_points", std::to_string(cfg.x_points)},
    };
    if (cfg.tolerance) entries.emplace_back("tolerance", format_double(*cfg.tolerance));
    if (cfg.x_min) entries.emplace_back("x_min", format_double(*cfg.x_min));
    if (cfg.x_max) entries.emplace_back("x_max", format_double(*cfg.x_max));
    return entries;
}

}  // namespace qpl
