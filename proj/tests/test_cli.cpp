#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "qpl/commands.hpp"
#include "qpl/config.hpp"
#include "qpl/rng.hpp"

using namespace qpl;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir()
{
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / ("qpl_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream(p, std::ios::binary) << text;
}

// Runs the qpl executable with stderr discarded; returns its exit status.
int run_cli(const std::string& args)
{
    const std::string command = std::string("\"") + QPL_CLI_PATH + "\" " + args + " 2>/dev/null >/dev/null";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig config_for(Command c)
{
    RunConfig cfg;
    cfg.command = c;
    return cfg;
}

bool same(const RunConfig& a, const RunConfig& b)
{
    return a.command == b.command && a.q == b.q && a.n == b.n && a.trials == b.trials && a.moments == b.moments &&
           a.seed == b.seed && a.format == b.format && a.scaling == b.scaling && a.tolerance == b.tolerance &&
           a.x_min == b.x_min && a.x_max == b.x_max && a.x_points == b.x_points;
}

}  // namespace

TEST_SUITE("cli")
{
    TEST_CASE("config entries round trip exactly")
    {
        StreamRng rng(41, 0);
        for (int i = 0; i < 200; ++i) {
            RunConfig cfg;
            cfg.command = static_cast<Command>(rng.next() % 4);
            cfg.q = rng.uniform();
            cfg.n = static_cast<int>(rng.next() % 100000);
            cfg.trials = static_cast<int>(rng.next() % 1000);
            cfg.moments = static_cast<int>(rng.next() % 12);
            cfg.seed = rng.next();
            cfg.format = rng.next() % 2 ? Format::csv : Format::json;
            cfg.scaling = rng.next() % 2 ? Scaling::limit : Scaling::fixed;
            if (rng.next() % 2) cfg.tolerance = rng.uniform() * 1e-7;
            if (rng.next() % 2) cfg.x_min = 3.0 * rng.uniform();
            if (rng.next() % 2) cfg.x_max = 3.0 + 30.0 * rng.uniform();
            cfg.x_points = static_cast<int>(rng.next() % 5000);

            RunConfig back;
            apply_entries(back, to_entries(cfg));
            CHECK(same(cfg, back));

            // through text as well
            std::string text;
            for (const auto& [k, v] : to_entries(cfg)) text += k + " = " + v + "\n";
            RunConfig parsed;
            apply_entries(parsed, parse_key_values(text));
            CHECK(same(cfg, parsed));
        }
        CHECK(std::stod(format_double(0.1)) == 0.1);
    }

    TEST_CASE("key=value parsing")
    {
        const auto e = parse_key_values("# comment\n\n  q = 0.25 \n#! n=7\nseed=3\n");
        REQUIRE(e.size() == 3);
        CHECK(e[0] == std::pair<std::string, std::string>{"q", "0.25"});
        CHECK(e[1] == std::pair<std::string, std::string>{"n", "7"});
        CHECK(e[2] == std::pair<std::string, std::string>{"seed", "3"});
        CHECK_THROWS_AS(parse_key_values("q 0.5\n"), ConfigError);
        CHECK_THROWS_AS(parse_key_values("=0.5\n"), ConfigError);

        RunConfig cfg;
        CHECK_THROWS_AS(apply_entries(cfg, {{"colour", "red"}}), ConfigError);
        CHECK_THROWS_AS(apply_entries(cfg, {{"n", "12x"}}), ConfigError);
        CHECK_THROWS_AS(apply_entries(cfg, {{"format", "xml"}}), ConfigError);
        CHECK_THROWS_AS(apply_entries(cfg, {{"command", "plot"}}), ConfigError);
        CHECK_NOTHROW(apply_entries(cfg, {{"schema", "qpl-simulate/1"}, {"kernel_q", "0.9"}}));
        apply_entries(cfg, {{"q", "0.3"}, {"q", "0.4"}});
        CHECK(cfg.q == 0.4);
    }

    TEST_CASE("validation")
    {
        auto cfg = config_for(Command::verify);
        cfg.q = 1.5;
        CHECK_THROWS_AS(validate(cfg), ConfigError);
        cfg.q = 0.0;
        CHECK_THROWS_AS(validate(cfg), ConfigError);

        cfg = config_for(Command::simulate);
        CHECK_NOTHROW(validate(cfg));
        cfg.n = 0;
        CHECK_THROWS_AS(validate(cfg), ConfigError);
        cfg = config_for(Command::simulate);
        cfg.moments = 13;
        CHECK_THROWS_AS(validate(cfg), ConfigError);
        cfg = config_for(Command::simulate);
        cfg.trials = 0;
        CHECK_THROWS_AS(validate(cfg), ConfigError);

        cfg = config_for(Command::limit_shape);
        cfg.x_min = 5.0;
        cfg.x_max = 4.0;
        CHECK_THROWS_AS(validate(cfg), ConfigError);
        cfg = config_for(Command::verify);
        cfg.tolerance = -1.0;
        CHECK_THROWS_AS(validate(cfg), ConfigError);
    }

    TEST_CASE("verify: defaults pass and a tampered tolerance fails")
    {
        const auto ok = run_verify(config_for(Command::verify));
        CHECK(ok.exit_code == kExitOk);
        std::istringstream lines(ok.text);
        std::string line;
        std::set<std::string> names;
        while (std::getline(lines, line)) {
            if (line.empty() || line[0] == '#' || line.rfind("suite,", 0) == 0) continue;
            names.insert(line.substr(0, line.find(',')));
            CHECK(line.substr(line.rfind(',') + 1) == "pass");
        }
        CHECK(names.size() >= 7);
        CHECK(ok.text.find("#! status=pass") != std::string::npos);

        auto tampered = config_for(Command::verify);
        tampered.tolerance = 1e-30;
        const auto bad = run_verify(tampered);
        CHECK(bad.exit_code == kExitCheckFailure);
        CHECK(bad.message.find("hook_identity") != std::string::npos);
    }

    TEST_CASE("simulate: JSON schema and determinism")
    {
        auto cfg = config_for(Command::simulate);
        cfg.format = Format::json;
        cfg.n = 100;
        cfg.trials = 10;
        const auto a = run_simulate(cfg);
        const auto b = run_simulate(cfg);
        CHECK(a.text == b.text);
        const auto doc = nlohmann::json::parse(a.text);
        for (const char* key : {"n", "q", "seed", "moments", "targets", "stderr"}) CHECK(doc.contains(key));
        CHECK(doc["n"] == 100);
        CHECK(doc["seed"] == 42);
        CHECK(doc["moments"].size() == 3);
        CHECK(doc["targets"].size() == 3);
        CHECK(doc["stderr"].size() == 3);
        CHECK(doc["trajectories"].size() == 10);
        CHECK(doc["config"]["command"] == "simulate");
    }

    TEST_CASE("simulate: two-box frequency")
    {
        auto cfg = config_for(Command::simulate);
        cfg.format = Format::json;
        cfg.n = 2;
        cfg.trials = 100000;
        cfg.moments = 1;
        cfg.scaling = Scaling::fixed;
        const auto doc = nlohmann::json::parse(run_simulate(cfg).text);
        double rows = 0.0;
        for (const auto& entry : doc["shape_counts"])
            if (entry["shape"] == nlohmann::json::array({2})) rows = entry["count"].get<double>();
        const double p = 2.0 / 3.0;
        const double sigma = std::sqrt(p * (1 - p) / cfg.trials);
        CHECK(std::fabs(rows / cfg.trials - p) < 3.0 * sigma);
    }

    TEST_CASE("limit-shape and pushforward outputs")
    {
        auto cfg = config_for(Command::limit_shape);
        cfg.format = Format::json;
        cfg.x_points = 5;
        const auto doc = nlohmann::json::parse(run_limit_shape(cfg).text);
        CHECK(doc["x"].size() == 5);
        CHECK(doc["h_series"].size() == 3);
        cfg.x_min = 1.0;
        CHECK_THROWS_AS(run_limit_shape(cfg), ConfigError);

        auto pf = config_for(Command::pushforward);
        pf.n = 5;
        const auto out = run_pushforward(pf);
        CHECK(out.exit_code == kExitOk);
        CHECK(out.text.find("#! tv_distance=") != std::string::npos);
        pf.n = 10;
        CHECK_THROWS_AS(run_pushforward(pf), CapacityError);
    }

    TEST_CASE("outputs reproduce themselves as configs")
    {
        auto cfg = config_for(Command::simulate);
        cfg.n = 60;
        cfg.trials = 4;
        cfg.seed = 1234;
        cfg.scaling = Scaling::fixed;
        for (Format f : {Format::csv, Format::json}) {
            cfg.format = f;
            const fs::path path = scratch_dir() / (f == Format::csv ? "self.csv" : "self.json");
            write_file(path, run_simulate(cfg).text);
            RunConfig back;
            apply_entries(back, load_config_file(path.string()));
            CHECK(same(cfg, back));
        }
        CHECK_THROWS_AS(load_config_file((scratch_dir() / "missing.cfg").string()), ConfigError);
        write_file(scratch_dir() / "broken.json", "{\"config\": 3}");
        CHECK_THROWS_AS(load_config_file((scratch_dir() / "broken.json").string()), ConfigError);
    }

    TEST_CASE("executable: exit codes")
    {
        const fs::path dir = scratch_dir();
        CHECK(run_cli("--help") == 0);
        CHECK(run_cli("") == kExitConfig);
        CHECK(run_cli("simulate --q 1.5") == kExitConfig);
        CHECK(run_cli("simulate --n abc") == kExitConfig);
        CHECK(run_cli("simulate --bogus 1") == kExitConfig);
        CHECK(run_cli("pushforward --n 10") == kExitCapacity);
        CHECK(run_cli("simulate --n 10 --trials 2 --out \"" + (dir / "no/such/dir/x.csv").string() + "\"") == kExitIo);
        CHECK(run_cli("verify --tolerance 1e-30 --out \"" + (dir / "v.csv").string() + "\"") == kExitCheckFailure);
        CHECK(run_cli("pushforward --n 4 --q 0.3 --out \"" + (dir / "p.csv").string() + "\"") == kExitOk);
    }

    TEST_CASE("executable: byte-identical reruns and reproduction from headers")
    {
        const fs::path dir = scratch_dir();
        const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string(), c = (dir / "c.csv").string();
        REQUIRE(run_cli("simulate --n 100 --trials 10 --seed 42 --out \"" + a + "\"") == 0);
        REQUIRE(run_cli("simulate --n 100 --trials 10 --seed 42 --out \"" + b + "\"") == 0);
        CHECK(slurp(a) == slurp(b));
        REQUIRE(run_cli("simulate --config \"" + a + "\" --out \"" + c + "\"") == 0);
        CHECK(slurp(a) == slurp(c));
        REQUIRE(run_cli("simulate --config \"" + a + "\" --seed 43 --out \"" + c + "\"") == 0);
        CHECK(slurp(a) != slurp(c));

        const std::string j1 = (dir / "a.json").string(), j2 = (dir / "b.json").string();
        REQUIRE(run_cli("limit-shape --q 0.3 --format json --out \"" + j1 + "\"") == 0);
        REQUIRE(run_cli("limit-shape --config \"" + j1 + "\" --out \"" + j2 + "\"") == 0);
        CHECK(slurp(j1) == slurp(j2));

        const std::string cfg = (dir / "run.cfg").string();
        write_file(cfg, "# flat config\ncommand = pushforward\nq = 0.7\nn = 5\n");
        REQUIRE(run_cli("pushforward --config \"" + cfg + "\" --out \"" + a + "\"") == 0);
        CHECK(slurp(a).find("#! q=0.69999999999999996") != std::string::npos);
        CHECK(slurp(a).find("#! n=5") != std::string::npos);
    }
}
