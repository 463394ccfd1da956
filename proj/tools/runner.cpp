#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "sqz/version.hpp"

namespace sqz::cli {

namespace fs = std::filesystem;

namespace {

const nlohmann::json &lookup(const nlohmann::json &values, const std::string &name) {
    auto it = values.find(name);
    if (it == values.end()) {
        throw CliError(kSchemaError, "parameter '" + name + "' is not defined");
    }
    return *it;
}

std::string kind_name(ParamKind kind) {
    switch (kind) {
        case ParamKind::Number:
            return "number";
        case ParamKind::Integer:
            return "integer";
        case ParamKind::String:
            return "string";
    }
    return "?";
}

bool matches_kind(const nlohmann::json &value, ParamKind kind) {
    switch (kind) {
        case ParamKind::Number:
            return value.is_number() && std::isfinite(value.get<double>());
        case ParamKind::Integer:
            if (value.is_number_integer()) {
                return true;
            }
            if (value.is_number_float()) {
                const double v = value.get<double>();
                return std::isfinite(v) && std::floor(v) == v;
            }
            return false;
        case ParamKind::String:
            return value.is_string();
    }
    return false;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

void write_file(const fs::path &path, const std::string &content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw CliError(kIoError, "cannot open " + path.string() + " for writing");
    }
    file << content;
    if (!file) {
        throw CliError(kIoError, "failed writing " + path.string());
    }
}

}  // namespace

double Params::number(const std::string &name) const { return lookup(values_, name).get<double>(); }

long long Params::integer(const std::string &name) const {
    return static_cast<long long>(std::llround(lookup(values_, name).get<double>()));
}

std::string Params::text(const std::string &name) const { return lookup(values_, name).get<std::string>(); }

std::string Table::to_csv() const {
    std::ostringstream out;
    for (std::size_t k = 0; k < columns.size(); ++k) {
        out << (k ? "," : "") << columns[k];
    }
    out << '\n' << std::setprecision(10);
    for (const auto &row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            out << (k ? "," : "") << row[k];
        }
        out << '\n';
    }
    return out.str();
}

nlohmann::json Table::to_json() const {
    nlohmann::json j;
    j["columns"] = columns;
    j["rows"] = rows;
    return j;
}

void Outputs::add_text(const std::string &name, std::string content) { files.emplace_back(name, std::move(content)); }

const Scenario *find_scenario(const std::string &name) {
    for (const auto &s : catalog()) {
        if (s.name == name) {
            return &s;
        }
    }
    return nullptr;
}

ScenarioConfig load_config(const fs::path &path) {
    std::ifstream file(path);
    if (!file) {
        throw CliError(kIoError, "cannot read config file " + path.string());
    }
    nlohmann::json j;
    try {
        file >> j;
    } catch (const nlohmann::json::exception &e) {
        throw CliError(kSchemaError, std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw CliError(kSchemaError, "config must be a JSON object");
    }
    ScenarioConfig config;
    static const std::set<std::string> known{"scenario", "params", "seed", "output_dir", "format"};
    for (const auto &[key, value] : j.items()) {
        if (!known.count(key)) {
            config.unknown_keys.push_back(key);
        }
    }
    if (!j.contains("scenario") || !j["scenario"].is_string()) {
        throw CliError(kSchemaError, "config needs a string field 'scenario'");
    }
    config.scenario = j["scenario"].get<std::string>();
    if (j.contains("params")) {
        if (!j["params"].is_object()) {
            throw CliError(kSchemaError, "'params' must be an object");
        }
        config.params = j["params"];
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0) {
            throw CliError(kSchemaError, "'seed' must be a non-negative integer");
        }
        config.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) {
            throw CliError(kSchemaError, "'output_dir' must be a string");
        }
        config.output_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("format")) {
        if (!j["format"].is_string()) {
            throw CliError(kSchemaError, "'format' must be \"csv\" or \"json\"");
        }
        config.format = j["format"].get<std::string>();
    }
    return config;
}

std::pair<std::string, nlohmann::json> parse_param_assignment(const std::string &text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw CliError(kSchemaError, "--param expects key=value, got '" + text + "'");
    }
    const std::string key = text.substr(0, eq);
    const std::string raw = text.substr(eq + 1);
    if (!raw.empty()) {
        char *end = nullptr;
        const double v = std::strtod(raw.c_str(), &end);
        if (end != nullptr && *end == '\0') {
            const bool integral = raw.find_first_of(".eEnN") == std::string::npos;
            if (integral) {
                return {key, nlohmann::json(static_cast<long long>(v))};
            }
            return {key, nlohmann::json(v)};
        }
    }
    return {key, nlohmann::json(raw)};
}

int ValidationReport::exit_code() const {
    if (!known_scenario) {
        return kUnknownScenario;
    }
    if (!missing.empty() || !invalid.empty()) {
        return kSchemaError;
    }
    return kOk;
}

std::string ValidationReport::text() const {
    std::ostringstream out;
    if (!known_scenario) {
        out << "error: unknown scenario\n";
        return out.str();
    }
    for (const auto &m : missing) {
        out << "error: missing required parameter '" << m << "'\n";
    }
    for (const auto &m : invalid) {
        out << "error: " << m << '\n';
    }
    for (const auto &m : extra) {
        out << "warning: unknown parameter '" << m << "' is ignored\n";
    }
    if (exit_code() == kOk) {
        out << "OK\n";
    }
    return out.str();
}

ValidationReport validate(const ScenarioConfig &config) {
    ValidationReport report;
    const Scenario *scenario = find_scenario(config.scenario);
    if (scenario == nullptr) {
        return report;
    }
    report.known_scenario = true;
    for (const auto &spec : scenario->params) {
        auto it = config.params.find(spec.name);
        if (it == config.params.end()) {
            if (spec.required) {
                report.missing.push_back(spec.name);
            }
            continue;
        }
        if (!matches_kind(*it, spec.kind)) {
            report.invalid.push_back("parameter '" + spec.name + "' must be a " + kind_name(spec.kind));
        }
    }
    for (const auto &[key, value] : config.params.items()) {
        const bool declared = std::any_of(scenario->params.begin(), scenario->params.end(),
                                          [&key](const ParamSpec &s) { return s.name == key; });
        if (!declared) {
            report.extra.push_back(key);
        }
    }
    if (config.format != "csv" && config.format != "json") {
        report.invalid.push_back("format must be \"csv\" or \"json\"");
    }
    for (const auto &key : config.unknown_keys) {
        report.extra.push_back(key);
    }
    return report;
}

Params resolve_params(const Scenario &scenario, const nlohmann::json &given) {
    nlohmann::json values = nlohmann::json::object();
    for (const auto &spec : scenario.params) {
        auto it = given.find(spec.name);
        if (it == given.end()) {
            if (spec.required) {
                throw CliError(kSchemaError, "missing required parameter '" + spec.name + "'");
            }
            values[spec.name] = spec.fallback;
            continue;
        }
        if (!matches_kind(*it, spec.kind)) {
            throw CliError(kSchemaError, "parameter '" + spec.name + "' must be a " + kind_name(spec.kind));
        }
        values[spec.name] = *it;
    }
    return Params(std::move(values));
}

fs::path output_directory(const ScenarioConfig &config) {
    if (!config.output_dir.empty()) {
        return config.output_dir;
    }
    if (const char *env = std::getenv("SQZ_OUT"); env != nullptr && *env != '\0') {
        return fs::path(env);
    }
    return fs::path("sqz-out") / config.scenario;
}

int run_scenario(const ScenarioConfig &config, std::ostream &out, std::ostream &err) {
    const auto report = validate(config);
    if (report.exit_code() != kOk) {
        if (!report.known_scenario) {
            err << "error: unknown scenario '" << config.scenario << "' (see `sqz list`)\n";
        } else {
            err << report.text();
        }
        return report.exit_code();
    }
    for (const auto &key : report.extra) {
        err << "warning: unknown parameter '" << key << "' is ignored\n";
    }
    const Scenario &scenario = *find_scenario(config.scenario);
    try {
        const Params params = resolve_params(scenario, config.params);
        Outputs outputs;
        try {
            scenario.run(params, config.seed, outputs, config.format == "json");
        } catch (const CliError &) {
            throw;
        } catch (const std::invalid_argument &e) {
            throw CliError(kSchemaError, std::string("invalid parameter value: ") + e.what());
        } catch (const std::domain_error &e) {
            throw CliError(kSchemaError, std::string("parameters outside the model's domain: ") + e.what());
        }

        const fs::path dir = output_directory(config);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) {
            throw CliError(kIoError, "cannot create output directory " + dir.string() + ": " + ec.message());
        }
        nlohmann::json manifest;
        manifest["scenario"] = config.scenario;
        manifest["params"] = params.json();
        manifest["seed"] = config.seed;
        manifest["format"] = config.format;
        manifest["version"] = kVersion;
        manifest["timestamp"] = utc_timestamp();
        manifest["notes"] = outputs.notes;
        manifest["outputs"] = nlohmann::json::array();
        for (const auto &[name, content] : outputs.files) {
            write_file(dir / name, content);
            manifest["outputs"].push_back({{"file", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
        }
        write_file(dir / "manifest.json", manifest.dump(2) + "\n");
        for (const auto &note : outputs.notes) {
            out << note << '\n';
        }
        out << "wrote " << outputs.files.size() << " file(s) and manifest.json to " << dir.string() << '\n';
        return kOk;
    } catch (const CliError &e) {
        err << "error: " << e.what() << '\n';
        return e.code();
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

std::string sha256_hex(const std::string &data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::ostringstream hex;
    hex << std::hex << std::setfill('0');
    for (unsigned int k = 0; k < len; ++k) {
        hex << std::setw(2) << static_cast<int>(digest[k]);
    }
    return hex.str();
}

std::string describe_catalog() {
    std::ostringstream out;
    for (const auto &s : catalog()) {
        out << s.name << "\n  " << s.summary << '\n';
        for (const auto &p : s.params) {
            out << "    " << std::left << std::setw(20) << p.name << std::setw(8) << kind_name(p.kind);
            if (p.required) {
                out << "required   ";
            } else {
                out << "default " << p.fallback.dump() << "  ";
            }
            out << p.help << '\n';
        }
    }
    return out.str();
}

}  // namespace sqz::cli
