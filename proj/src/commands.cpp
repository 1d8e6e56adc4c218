#include "qpl/commands.hpp"

#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>

#include <fmt/format.h>

#include "qpl/dynamics.hpp"
#include "qpl/growth.hpp"
#include "qpl/limitshape.hpp"
#include "qpl/qmeasure.hpp"
#include "qpl/rsk.hpp"
#include "qpl/verify.hpp"

namespace qpl {

namespace {

std::string number(double v)
{
    return std::isfinite(v) ? format_double(v) : "null";
}

std::string quoted(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20)
                out += fmt::format("\\u{:04x}", static_cast<int>(c));
            else
                out += c;
        }
    }
    return out + "\"";
}

template <class Range, class Fn>
std::string json_array(const Range& range, Fn&& render)
{
    std::string out = "[";
    bool first = true;
    for (const auto& item : range) {
        if (!first) out += ", ";
        out += render(item);
        first = false;
    }
    return out + "]";
}

std::string json_numbers(const std::vector<double>& values)
{
    return json_array(values, [](double v) { return number(v); });
}

std::string json_parts(const Partition& p)
{
    return json_array(p.parts(), [](int v) { return std::to_string(v); });
}

// Header lines shared by every output: schema, the full config, then derived values.
std::string csv_header(const std::string& schema, const RunConfig& cfg, const ConfigEntries& derived = {})
{
    std::string out = "#! schema=" + schema + "\n";
    for (const auto& [k, v] : to_entries(cfg)) out += "#! " + k + "=" + v + "\n";
    for (const auto& [k, v] : derived) out += "#! " + k + "=" + v + "\n";
    return out;
}

std::string json_config(const RunConfig& cfg)
{
    std::string out = "{";
    bool first = true;
    for (const auto& [k, v] : to_entries(cfg)) {
        if (!first) out += ", ";
        out += quoted(k) + ": " + quoted(v);
        first = false;
    }
    return out + "}";
}

}  // namespace

CommandOutput run_verify(const RunConfig& cfg)
{
    VerifyOptions options;
    options.seed = cfg.seed;
    options.tolerance = cfg.tolerance;
    const auto results = run_all_suites(options);

    const SuiteResult* failed = nullptr;
    for (const auto& r : results) {
        std::cerr << fmt::format("verify: {:<20} {}  ({:.2f} s)\n", r.name, r.passed() ? "pass" : "FAIL", r.seconds);
        if (!failed && !r.passed()) failed = &r;
    }
    CommandOutput out;
    const std::string status = failed ? "fail" : "pass";
    if (failed) {
        const auto* check = failed->first_failure();
        out.exit_code = kExitCheckFailure;
        out.message = fmt::format("verify failed: suite '{}' check '{}' value {} is not below tolerance {}",
                                  failed->name, check->name, number(check->value), number(check->tolerance));
    } else {
        out.message = fmt::format("verify passed: {} suites", results.size());
    }

    if (cfg.format == Format::csv) {
        out.text = csv_header("qpl-verify/1", cfg, {{"status", status}});
        out.text += "suite,check,value,tolerance,result\n";
        for (const auto& r : results)
            for (const auto& c : r.checks)
                out.text += fmt::format("{},{},{},{},{}\n", r.name, c.name, number(c.value), number(c.tolerance),
                                        c.passed ? "pass" : "fail");
    } else {
        out.text = "{\n  \"schema\": \"qpl-verify/1\",\n  \"config\": " + json_config(cfg) + ",\n";
        out.text += "  \"status\": " + quoted(status) + ",\n  \"suites\": [\n";
        for (std::size_t i = 0; i < results.size(); ++i) {
            const auto& r = results[i];
            out.text += "    {\"name\": " + quoted(r.name) + ", \"status\": " +
                        quoted(r.passed() ? "pass" : "fail") + ", \"checks\": ";
            out.text += json_array(r.checks, [](const CheckResult& c) {
                return "{\"name\": " + quoted(c.name) + ", \"value\": " + number(c.value) +
                       ", \"tolerance\": " + number(c.tolerance) + ", \"passed\": " + (c.passed ? "true" : "false") +
                       "}";
            });
            out.text += i + 1 < results.size() ? "},\n" : "}\n";
        }
        out.text += "  ]\n}\n";
    }
    return out;
}

CommandOutput run_simulate(const RunConfig& cfg)
{
    McOptions options;
    options.scaling = cfg.scaling;
    const auto report = mc_limit_experiment(cfg.n, QParam(cfg.q), cfg.trials, cfg.moments, cfg.seed, options);

    std::map<Partition, int> counts;
    for (const auto& shape : report.shapes) ++counts[shape];

    CommandOutput out;
    out.message = fmt::format("simulated {} trajectories of {} boxes", report.trials, report.n_boxes);
    const auto moments = static_cast<std::size_t>(report.moments);
    if (cfg.format == Format::csv) {
        out.text = csv_header("qpl-simulate/1", cfg, {{"kernel_q", format_double(report.kernel_q)}});
        out.text += "moment,mean,stderr,target\n";
        for (std::size_t n = 0; n < moments; ++n)
            out.text += fmt::format("{},{},{},{}\n", n + 1, number(report.mean[n]), number(report.stderr_[n]),
                                    report.target.empty() ? "" : number(report.target[n]));
        out.text += "#\nshape,count,frequency\n";
        for (auto it = counts.rbegin(); it != counts.rend(); ++it)
            out.text += fmt::format("{},{},{}\n", it->first.to_string(), it->second,
                                    number(static_cast<double>(it->second) / report.trials));
        out.text += "#\ntrial,shape";
        for (std::size_t n = 1; n <= moments; ++n) out.text += fmt::format(",p_{}", n);
        out.text += "\n";
        for (std::size_t i = 0; i < report.samples.size(); ++i) {
            out.text += fmt::format("{},{}", i, report.shapes[i].to_string());
            for (double v : report.samples[i]) out.text += "," + number(v);
            out.text += "\n";
        }
    } else {
        out.text = "{\n  \"schema\": \"qpl-simulate/1\",\n  \"config\": " + json_config(cfg) + ",\n";
        out.text += fmt::format("  \"n\": {},\n  \"q\": {},\n  \"seed\": {},\n  \"trials\": {},\n", report.n_boxes,
                                number(report.q), report.seed, report.trials);
        out.text += fmt::format("  \"kernel_q\": {},\n  \"scaling\": {},\n", number(report.kernel_q),
                                quoted(to_string(report.scaling)));
        out.text += "  \"moments\": " + json_numbers(report.mean) + ",\n";
        out.text += "  \"stderr\": " + json_numbers(report.stderr_) + ",\n";
        out.text += "  \"targets\": " + json_numbers(report.target) + ",\n";
        out.text += "  \"shape_counts\": [";
        bool first = true;
        for (auto it = counts.rbegin(); it != counts.rend(); ++it) {
            out.text += fmt::format("{}{{\"shape\": {}, \"count\": {}}}", first ? "" : ", ", json_parts(it->first),
                                    it->second);
            first = false;
        }
        out.text += "],\n  \"trajectories\": [\n";
        for (std::size_t i = 0; i < report.samples.size(); ++i) {
            out.text += fmt::format("    {{\"trial\": {}, \"shape\": {}, \"p\": {}}}{}\n", i,
                                    json_parts(report.shapes[i]), json_numbers(report.samples[i]),
                                    i + 1 < report.samples.size() ? "," : "");
        }
        out.text += "  ]\n}\n";
    }
    return out;
}

CommandOutput run_limit_shape(const RunConfig& cfg)
{
    const QParam q(cfg.q);
    const auto branch = branch_point(q);
    const double x_min = cfg.x_min.value_or(std::ceil((branch.x + 1e-6) * 10.0) / 10.0);
    const double x_max = cfg.x_max.value_or(x_min + 10.0);
    if (x_min < branch.x)
        throw ConfigError(fmt::format("x_min = {} is below the branch point x* = {}; R_Ω has no root there",
                                      number(x_min), number(branch.x)));
    if (!(x_max > x_min))
        throw ConfigError("x_max must exceed x_min");

    const OmegaRFunction r(q);
    std::vector<double> xs;
    std::vector<double> rs;
    for (int i = 0; i < cfg.x_points; ++i) {
        const double x = x_min + (x_max - x_min) * i / (cfg.x_points - 1);
        xs.push_back(x);
        rs.push_back(r(x));
    }
    const auto p_check = limit_moments(q, cfg.moments);
    const auto h_check = p_to_h(p_check);
    const auto h_series = series_h_omega(q, cfg.moments);

    CommandOutput out;
    out.message = fmt::format("R_Ω on {} points, {} moments", cfg.x_points, cfg.moments);
    const ConfigEntries derived{{"branch_x", number(branch.x)},
                                {"branch_z", number(branch.z)},
                                {"branch_r", number(branch.r)}};
    if (cfg.format == Format::csv) {
        out.text = csv_header("qpl-limit-shape/1", cfg, derived);
        out.text += "x,r\n";
        for (std::size_t i = 0; i < xs.size(); ++i) out.text += number(xs[i]) + "," + number(rs[i]) + "\n";
        out.text += "#\nn,p_check,h_check,h_series\n";
        for (std::size_t n = 1; n <= p_check.size(); ++n)
            out.text += fmt::format("{},{},{},{}\n", n, number(p_check(n)), number(h_check(n)), number(h_series(n)));
    } else {
        out.text = "{\n  \"schema\": \"qpl-limit-shape/1\",\n  \"config\": " + json_config(cfg) + ",\n";
        out.text += fmt::format("  \"q\": {},\n  \"branch\": {{\"x\": {}, \"z\": {}, \"r\": {}}},\n", number(cfg.q),
                                number(branch.x), number(branch.z), number(branch.r));
        out.text += "  \"x\": " + json_numbers(xs) + ",\n";
        out.text += "  \"r\": " + json_numbers(rs) + ",\n";
        out.text += "  \"p_check\": " + json_numbers(p_check.values) + ",\n";
        out.text += "  \"h_check\": " + json_numbers(h_check.values) + ",\n";
        out.text += "  \"h_series\": " + json_numbers(h_series.values) + "\n}\n";
    }
    return out;
}

CommandOutput run_pushforward(const RunConfig& cfg)
{
    const QParam q(cfg.q);
    const auto dist = pushforward_exact(cfg.n, q);
    double tv = 0.0;
    std::vector<double> measure;
    for (const auto& [shape, p] : dist) {
        measure.push_back(q_measure(shape, q));
        tv += std::fabs(p - measure.back());
    }
    tv *= 0.5;

    CommandOutput out;
    out.message = fmt::format("level {}: {} shapes, total variation {}", cfg.n, dist.size(), number(tv));
    if (cfg.format == Format::csv) {
        out.text = csv_header("qpl-pushforward/1", cfg, {{"tv_distance", number(tv)}});
        out.text += "shape,pushforward,q_measure,abs_diff\n";
        std::size_t i = dist.size();
        for (auto it = dist.rbegin(); it != dist.rend(); ++it) {
            const double m = measure[--i];
            out.text += fmt::format("{},{},{},{}\n", it->first.to_string(), number(it->second), number(m),
                                    number(std::fabs(it->second - m)));
        }
    } else {
        out.text = "{\n  \"schema\": \"qpl-pushforward/1\",\n  \"config\": " + json_config(cfg) + ",\n";
        out.text += fmt::format("  \"n\": {},\n  \"q\": {},\n  \"tv_distance\": {},\n  \"shapes\": [\n", cfg.n,
                                number(cfg.q), number(tv));
        std::size_t i = dist.size();
        for (auto it = dist.rbegin(); it != dist.rend(); ++it) {
            const double m = measure[--i];
            out.text += fmt::format("    {{\"shape\": {}, \"pushforward\": {}, \"q_measure\": {}}}{}\n",
                                    json_parts(it->first), number(it->second), number(m), i > 0 ? "," : "");
        }
        out.text += "  ]\n}\n";
    }
    return out;
}

CommandOutput run_command(const RunConfig& cfg)
{
    switch (cfg.command) {
    case Command::verify: return run_verify(cfg);
    case Command::simulate: return run_simulate(cfg);
    case Command::limit_shape: return run_limit_shape(cfg);
    case Command::pushforward: return run_pushforward(cfg);
    }
    throw ConfigError("unknown command");
}

void write_output(const RunConfig& cfg, const std::string& text)
{
    if (cfg.out.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout)
            throw IoError("cannot write to standard output");
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
    if (!file)
        throw IoError("cannot open '" + cfg.out + "' for writing: " + std::strerror(errno));
    file << text;
    file.close();
    if (!file)
        throw IoError("failed writing '" + cfg.out + "'");
}

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
    if (dynamic_cast<const CapacityError*>(&e)) return kExitCapacity;
    if (dynamic_cast<const IoError*>(&e)) return kExitIo;
    return kExitNumerical;
}

}  // namespace qpl
