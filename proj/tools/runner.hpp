#pragma once

// Scenario catalog and runner behind the sqz command-line tool.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace sqz::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUnknownScenario = 2,
    kSchemaError = 3,
    kIoError = 4,
};

class CliError : public std::runtime_error {
   public:
    CliError(int code, const std::string &what) : std::runtime_error(what), code_(code) {}
    int code() const { return code_; }

   private:
    int code_;
};

enum class ParamKind { Number, Integer, String };

struct ParamSpec {
    std::string name;
    ParamKind kind;
    bool required;
    nlohmann::json fallback;  ///< default when not required
    std::string help;
};

/// Resolved scenario parameters (defaults filled in).
class Params {
   public:
    explicit Params(nlohmann::json values) : values_(std::move(values)) {}
    double number(const std::string &name) const;
    long long integer(const std::string &name) const;
    std::string text(const std::string &name) const;
    const nlohmann::json &json() const { return values_; }

   private:
    nlohmann::json values_;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

/// Files produced by a scenario, in the order they were added.
struct Outputs {
    std::vector<std::pair<std::string, std::string>> files;
    std::vector<std::string> notes;  ///< echoed to stdout and the manifest

    void add_text(const std::string &name, std::string content);
};

struct Scenario {
    std::string name;
    std::string summary;
    std::vector<ParamSpec> params;
    std::function<void(const Params &, std::uint64_t seed, Outputs &, bool json_tables)> run;
};

const std::vector<Scenario> &catalog();
const Scenario *find_scenario(const std::string &name);

struct ScenarioConfig {
    std::string scenario;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::string output_dir;  ///< empty: $SQZ_OUT, then ./sqz-out/<scenario>
    std::string format = "csv";
    std::vector<std::string> unknown_keys;  ///< top-level keys that were ignored
};

/// Reads a JSON config file. Throws CliError (kIoError, kSchemaError).
ScenarioConfig load_config(const std::filesystem::path &path);

/// Parses "k=v"; numeric-looking values become numbers.
std::pair<std::string, nlohmann::json> parse_param_assignment(const std::string &text);

struct ValidationReport {
    bool known_scenario = false;
    std::vector<std::string> missing;
    std::vector<std::string> extra;
    std::vector<std::string> invalid;

    int exit_code() const;
    std::string text() const;
};

ValidationReport validate(const ScenarioConfig &config);

/// Fills defaults; throws CliError with kSchemaError on missing or ill-typed values.
Params resolve_params(const Scenario &scenario, const nlohmann::json &given);

std::filesystem::path output_directory(const ScenarioConfig &config);

/// Validates, runs, writes the outputs and manifest.json. Never throws; returns
/// an exit code and prints diagnostics to `err`.
int run_scenario(const ScenarioConfig &config, std::ostream &out, std::ostream &err);

std::string sha256_hex(const std::string &data);

/// Catalog listing with parameter schemas.
std::string describe_catalog();

}  // namespace sqz::cli
