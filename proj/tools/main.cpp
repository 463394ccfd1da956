#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "runner.hpp"
#include "sqz/version.hpp"

namespace {

bool looks_like_config(const std::string &target) {
    return target.size() > 5 && target.substr(target.size() - 5) == ".json";
}

}  // namespace

int main(int argc, char **argv) {
    using namespace sqz::cli;

    CLI::App app{"Squeezed-light simulation scenarios"};
    app.set_version_flag("--version", std::string(sqz::kVersion));
    app.require_subcommand(1);

    std::string target;
    std::vector<std::string> assignments;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out_dir;
    std::string format;
    auto *run = app.add_subcommand("run", "run a scenario by name or from a config file");
    run->add_option("target", target, "scenario name or config.json")->required();
    run->add_option("--param,-p", assignments, "parameter override key=value (repeatable)");
    run->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t &s) { seed = s; seed_given = true; }, "random seed (default 0)");
    run->add_option("--out", out_dir, "output directory (overrides SQZ_OUT)");
    run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    std::string config_path;
    auto *check = app.add_subcommand("validate", "check a config file without running it");
    check->add_option("config", config_path, "config.json")->required();

    app.add_subcommand("list", "list scenarios and their parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kSchemaError;
    }

    try {
        if (app.got_subcommand("list")) {
            std::cout << describe_catalog();
            return kOk;
        }
        if (app.got_subcommand("validate")) {
            const auto config = load_config(config_path);
            const auto report = validate(config);
            std::cout << (report.known_scenario ? report.text() : "error: unknown scenario '" + config.scenario + "'\n");
            return report.exit_code();
        }
        ScenarioConfig config;
        if (looks_like_config(target)) {
            config = load_config(target);
        } else {
            config.scenario = target;
        }
        for (const auto &a : assignments) {
            auto [key, value] = parse_param_assignment(a);
            config.params[key] = value;
        }
        if (seed_given) {
            config.seed = seed;
        }
        if (!out_dir.empty()) {
            config.output_dir = out_dir;
        }
        if (!format.empty()) {
            config.format = format;
        }
        return run_scenario(config, std::cout, std::cerr);
    } catch (const CliError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code();
    }
}
