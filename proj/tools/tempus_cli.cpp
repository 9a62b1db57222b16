/*
 * tempus_cli.cpp — command line front end.
 *
 *   tempus run <config>       run a scenario config (key=value or .json)
 *   tempus list               list builtin scenarios
 *   tempus validate <config>  parse and range-check a config
 *   tempus selftest           run every builtin with its defaults
 *
 * Exit codes: 0 success, 1 check failure, 2 config parse error,
 * 3 coverage or window-mass error.
 */

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <tempus/tempus.hpp>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw tempus::ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string json_scalar(const nlohmann::json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
}

// JSON is an alternative encoding of the same grammar: top-level scalars,
// one object per section. Converting to the text form reuses one parser.
std::string json_to_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw tempus::ConfigError(std::string("json parse error: ") + e.what());
    }
    if (!j.is_object()) throw tempus::ConfigError("json config must be an object");
    std::string s;
    for (const auto& [key, val] : j.items())
        if (!val.is_object()) s += key + " = " + json_scalar(val) + "\n";
    for (const auto& [key, val] : j.items()) {
        if (!val.is_object()) continue;
        s += "[" + key + "]\n";
        for (const auto& [k2, v2] : val.items()) {
            if (v2.is_object())
                throw tempus::ConfigError("json config: nested object under '" + key + "." + k2 +
                                          "'");
            s += k2 + " = " + json_scalar(v2) + "\n";
        }
    }
    return s;
}

tempus::ScenarioConfig load_config(const std::string& path) {
    std::string text = read_file(path);
    if (std::filesystem::path(path).extension() == ".json") text = json_to_config_text(text);
    return tempus::parse_scenario_config(text);
}

void print_report(const tempus::RunReport& rep, const std::string& dir) {
    for (const auto& c : rep.checks) {
        std::printf("[%s] %-42s measured=%.6g tolerance=%.3g%s%s\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.measured, c.tolerance, c.note.empty() ? "" : "  ",
                    c.note.c_str());
    }
    std::printf("outputs in %s:", dir.c_str());
    for (const auto& o : rep.outputs) std::printf(" %s", o.c_str());
    std::printf("\nscenario %s: %s\n", rep.scenario.c_str(), rep.pass() ? "PASS" : "FAIL");
}

int run_one(const tempus::ScenarioConfig& cfg) {
    const char* env = std::getenv("TEMPUS_OUT");
    const std::string dir = env && *env ? env : cfg.output_dir;
    const auto rep = tempus::run_scenario(cfg);
    print_report(rep, dir);
    return rep.pass() ? 0 : 1;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"covariant time-observable scenarios"};
    app.require_subcommand(1);

    std::string run_path, validate_path;
    auto* cmd_run = app.add_subcommand("run", "run a scenario config");
    cmd_run->add_option("config", run_path, "config file (key=value, or .json)")->required();
    auto* cmd_list = app.add_subcommand("list", "list builtin scenarios");
    auto* cmd_validate = app.add_subcommand("validate", "parse and range-check a config");
    cmd_validate->add_option("config", validate_path, "config file")->required();
    auto* cmd_selftest = app.add_subcommand("selftest", "run every builtin with its defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (cmd_list->parsed()) {
        for (const auto& name : tempus::list_scenarios())
            std::printf("%-8s %s\n", name.c_str(), tempus::scenario_description(name).c_str());
        return 0;
    }
    if (cmd_validate->parsed()) {
        const auto cfg = load_config(validate_path);
        const auto bad = tempus::validate_scenario(cfg);
        if (!bad.empty()) {
            for (const auto& b : bad) std::fprintf(stderr, "error: %s\n", b.c_str());
            return 2;
        }
        std::printf("ok\n%s", tempus::scenario_config_text(cfg).c_str());
        return 0;
    }
    if (cmd_run->parsed()) return run_one(load_config(run_path));
    if (cmd_selftest->parsed()) {
        int worst = 0;
        for (const auto& name : tempus::list_scenarios()) {
            auto cfg = tempus::default_scenario_config(name);
            cfg.output_dir = "tempus_selftest_out/" + name;
            std::printf("== %s ==\n", name.c_str());
            const int rc = run_one(cfg);
            worst = std::max(worst, rc);
        }
        std::printf("selftest: %s\n", worst == 0 ? "PASS" : "FAIL");
        return worst;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const tempus::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const tempus::GridCoverageError& e) {
        std::fprintf(stderr, "grid coverage error: %s\n", e.what());
        return 3;
    } catch (const tempus::WindowMassError& e) {
        std::fprintf(stderr, "window mass error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
