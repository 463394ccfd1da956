#include <gtest/gtest.h>
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "runner.hpp"

namespace fs = std::filesystem;
using namespace sqz::cli;

namespace {

class TempDir {
   public:
    TempDir() {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        path_ = fs::temp_directory_path() / (std::string("sqz_cli_") + info->test_suite_name() + "_" + info->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path &path() const { return path_; }

   private:
    fs::path path_;
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path &p, std::vector<std::string> &header) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    header.clear();
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) {
        header.push_back(cell);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        std::vector<double> row;
        for (std::string cell; std::getline(ls, cell, ',');) {
            row.push_back(std::stod(cell));
        }
        rows.push_back(row);
    }
    return rows;
}

int run(const ScenarioConfig &config) {
    std::ostringstream out;
    std::ostringstream err;
    return run_scenario(config, out, err);
}

int shell(const std::string &args) {
    const int status = std::system((std::string(SQZ_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

void write_file(const fs::path &p, const std::string &text) {
    std::ofstream out(p);
    out << text;
}

}  // namespace

TEST(Catalog, HasAllScenarios) {
    for (const char *name : {"loss-sweep", "opa-spectrum", "ppktp-estimate", "cavity-figures", "tomography-demo",
                             "spectrum-drift-demo", "teleport-sweep", "gw-snr-sweep", "herald-photon", "kitten",
                             "kitten-superposition"}) {
        EXPECT_NE(find_scenario(name), nullptr) << name;
    }
    EXPECT_EQ(catalog().size(), 11u);
    EXPECT_EQ(find_scenario("nope"), nullptr);
    EXPECT_NE(describe_catalog().find("r_max"), std::string::npos);
}

TEST(ParamAssignment, NumbersAndStrings) {
    auto [k1, v1] = parse_param_assignment("r=1.15");
    EXPECT_EQ(k1, "r");
    EXPECT_TRUE(v1.is_number());
    EXPECT_DOUBLE_EQ(v1.get<double>(), 1.15);
    auto [k2, v2] = parse_param_assignment("state=photon");
    EXPECT_TRUE(v2.is_string());
    auto [k3, v3] = parse_param_assignment("n=24");
    EXPECT_TRUE(v3.is_number_integer());
    EXPECT_THROW(parse_param_assignment("novalue"), CliError);
}

TEST(LossSweep, MatchesBeamSplitterModelRowByRow) {
    TempDir tmp;
    ScenarioConfig c;
    c.scenario = "loss-sweep";
    c.output_dir = tmp.path().string();
    ASSERT_EQ(run(c), kOk);
    std::vector<std::string> header;
    const auto rows = read_csv(tmp.path() / "loss_sweep.csv", header);
    ASSERT_EQ(header, (std::vector<std::string>{"transmissivity", "var_x", "var_p", "squeezing_db", "antisqueezing_db"}));
    ASSERT_EQ(rows.size(), 10u);
    const double r = 1.15;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double T = rows[i][0];
        EXPECT_NEAR(T, 0.1 * static_cast<double>(i + 1), 1e-9);
        const double vx = T * std::exp(-2 * r) / 2 + (1 - T) / 2;
        const double vp = T * std::exp(2 * r) / 2 + (1 - T) / 2;
        EXPECT_NEAR(rows[i][1], vx, 1e-9 * std::max(1.0, vx));
        EXPECT_NEAR(rows[i][2], vp, 1e-9 * vp);
        EXPECT_NEAR(rows[i][3], 10 * std::log10(2 * vx), 1e-6);
        EXPECT_NEAR(rows[i][4], 10 * std::log10(2 * vp), 1e-6);
    }
}

TEST(OpaSpectrum, LowFrequencyIsSixDecibels) {
    TempDir tmp;
    ScenarioConfig c;
    c.scenario = "opa-spectrum";
    c.output_dir = tmp.path().string();
    ASSERT_EQ(run(c), kOk);
    std::vector<std::string> header;
    const auto rows = read_csv(tmp.path() / "opa_spectrum.csv", header);
    ASSERT_EQ(header, (std::vector<std::string>{"freq_hz", "v_plus", "v_minus"}));
    EXPECT_EQ(rows.front()[0], 0.0);
    EXPECT_NEAR(10 * std::log10(2 * rows.front()[2]), -6.02, 0.01);
    EXPECT_NEAR(rows.back()[2], 0.5, 0.01);
}

TEST(RunScenario, UnknownScenarioWritesNothing) {
    TempDir tmp;
    ScenarioConfig c;
    c.scenario = "does-not-exist";
    c.output_dir = (tmp.path() / "out").string();
    EXPECT_EQ(run(c), kUnknownScenario);
    EXPECT_FALSE(fs::exists(tmp.path() / "out"));
}

TEST(RunScenario, MissingRequiredParamIsSchemaError) {
    TempDir tmp;
    ScenarioConfig c;
    c.scenario = "teleport-sweep";
    c.output_dir = (tmp.path() / "out").string();
    EXPECT_EQ(run(c), kSchemaError);
    EXPECT_FALSE(fs::exists(tmp.path() / "out"));
    c.params["r_max"] = "two";
    EXPECT_EQ(run(c), kSchemaError);
    c.params["r_max"] = -1.0;
    EXPECT_EQ(run(c), kSchemaError);
}

TEST(RunScenario, UnwritableOutputIsIoError) {
    TempDir tmp;
    write_file(tmp.path() / "blocker", "x");
    ScenarioConfig c;
    c.scenario = "cavity-figures";
    c.output_dir = (tmp.path() / "blocker" / "sub").string();
    EXPECT_EQ(run(c), kIoError);
}

TEST(RunScenario, SameSeedGivesByteIdenticalCsv) {
    TempDir tmp;
    ScenarioConfig c;
    c.scenario = "tomography-demo";
    c.params = {{"n_phases", 12}, {"samples", 300}, {"grid_n", 11}};
    c.seed = 17;
    c.output_dir = (tmp.path() / "a").string();
    ASSERT_EQ(run(c), kOk);
    c.output_dir = (tmp.path() / "b").string();
    ASSERT_EQ(run(c), kOk);
    for (const char *f : {"dataset.csv", "wigner.csv"}) {
        EXPECT_EQ(slurp(tmp.path() / "a" / f), slurp(tmp.path() / "b" / f)) << f;
    }
    c.seed = 18;
    c.output_dir = (tmp.path() / "c").string();
    ASSERT_EQ(run(c), kOk);
    EXPECT_NE(slurp(tmp.path() / "a" / "dataset.csv"), slurp(tmp.path() / "c" / "dataset.csv"));
}

TEST(RunScenario, ManifestRecordsConfigVersionAndChecksums) {
    TempDir tmp;
    ScenarioConfig c;
    c.scenario = "teleport-sweep";
    c.params = {{"r_max", 1.0}};
    c.seed = 5;
    c.output_dir = tmp.path().string();
    ASSERT_EQ(run(c), kOk);
    const auto manifest = nlohmann::json::parse(slurp(tmp.path() / "manifest.json"));
    EXPECT_EQ(manifest["scenario"], "teleport-sweep");
    EXPECT_EQ(manifest["seed"], 5);
    EXPECT_EQ(manifest["params"]["r_max"], 1.0);
    EXPECT_TRUE(manifest.contains("version"));
    EXPECT_TRUE(manifest.contains("timestamp"));
    ASSERT_FALSE(manifest["outputs"].empty());
    for (const auto &o : manifest["outputs"]) {
        const auto content = slurp(tmp.path() / o["file"].get<std::string>());
        EXPECT_EQ(o["bytes"], content.size());
        EXPECT_EQ(o["sha256"], sha256_hex(content));
    }
}

TEST(RunScenario, JsonFormatMirrorsCsv) {
    TempDir tmp;
    ScenarioConfig c;
    c.scenario = "gw-snr-sweep";
    c.format = "json";
    c.output_dir = tmp.path().string();
    ASSERT_EQ(run(c), kOk);
    bool csv = false;
    bool json = false;
    for (const auto &e : fs::directory_iterator(tmp.path())) {
        csv = csv || e.path().extension() == ".csv";
        json = json || (e.path().extension() == ".json" && e.path().filename() != "manifest.json");
    }
    EXPECT_TRUE(csv);
    EXPECT_TRUE(json);
}

TEST(Sha256, KnownVector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Validate, ReportsOkMissingAndExtra) {
    ScenarioConfig c;
    c.scenario = "teleport-sweep";
    c.params = {{"r_max", 2.0}};
    auto rep = validate(c);
    EXPECT_EQ(rep.exit_code(), kOk);
    EXPECT_NE(rep.text().find("OK"), std::string::npos);

    c.params = nlohmann::json::object();
    rep = validate(c);
    EXPECT_EQ(rep.exit_code(), kSchemaError);
    EXPECT_NE(rep.text().find("r_max"), std::string::npos);

    c.params = {{"r_max", 2.0}, {"colour", "blue"}};
    rep = validate(c);
    EXPECT_EQ(rep.exit_code(), kOk);
    EXPECT_NE(rep.text().find("warning"), std::string::npos);
    EXPECT_NE(rep.text().find("colour"), std::string::npos);

    c.scenario = "nope";
    EXPECT_EQ(validate(c).exit_code(), kUnknownScenario);
}

TEST(LoadConfig, ReadsFileAndFlagsUnknownKeys) {
    TempDir tmp;
    write_file(tmp.path() / "c.json",
               R"({"scenario": "teleport-sweep", "params": {"r_max": 1.5}, "seed": 9, "format": "json", "owner": "lab"})");
    const auto c = load_config(tmp.path() / "c.json");
    EXPECT_EQ(c.scenario, "teleport-sweep");
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.format, "json");
    EXPECT_EQ(c.unknown_keys, (std::vector<std::string>{"owner"}));
    try {
        load_config(tmp.path() / "missing.json");
        FAIL() << "expected an I/O error";
    } catch (const CliError &e) {
        EXPECT_EQ(e.code(), kIoError);
    }
    write_file(tmp.path() / "bad.json", "{not json");
    try {
        load_config(tmp.path() / "bad.json");
        FAIL() << "expected a schema error";
    } catch (const CliError &e) {
        EXPECT_EQ(e.code(), kSchemaError);
    }
}

TEST(OutputDirectory, Precedence) {
    ScenarioConfig c;
    c.scenario = "kitten";
    ::unsetenv("SQZ_OUT");
    EXPECT_EQ(output_directory(c), fs::path("sqz-out") / "kitten");
    ::setenv("SQZ_OUT", "/tmp/sqz-env", 1);
    EXPECT_EQ(output_directory(c), fs::path("/tmp/sqz-env"));
    c.output_dir = "/tmp/explicit";
    EXPECT_EQ(output_directory(c), fs::path("/tmp/explicit"));
    ::unsetenv("SQZ_OUT");
}

TEST(Binary, ExitCodes) {
    TempDir tmp;
    const auto out = tmp.path().string();
    EXPECT_EQ(shell("list"), 0);
    EXPECT_EQ(shell("run cavity-figures --out " + out + "/ok"), 0);
    EXPECT_TRUE(fs::exists(tmp.path() / "ok" / "manifest.json"));
    EXPECT_EQ(shell("run no-such-scenario --out " + out + "/x"), 2);
    EXPECT_FALSE(fs::exists(tmp.path() / "x"));
    EXPECT_EQ(shell("run teleport-sweep --out " + out + "/y"), 3);
    EXPECT_EQ(shell("validate " + out + "/absent.json"), 4);
    write_file(tmp.path() / "good.json", R"({"scenario": "teleport-sweep", "params": {"r_max": 1.0}, "extra": 1})");
    EXPECT_EQ(shell("validate " + out + "/good.json"), 0);
    write_file(tmp.path() / "bad.json", R"({"scenario": "teleport-sweep", "params": {}})");
    EXPECT_EQ(shell("validate " + out + "/bad.json"), 3);
    EXPECT_EQ(shell("run " + out + "/good.json --out " + out + "/cfg"), 0);
    EXPECT_TRUE(fs::exists(tmp.path() / "cfg" / "manifest.json"));
}

TEST(Binary, SqzOutEnvironmentVariable) {
    TempDir tmp;
    const auto target = tmp.path() / "env-out";
    const std::string cmd = "SQZ_OUT=" + target.string() + " " + SQZ_CLI_PATH + " run ppktp-estimate >/dev/null 2>&1";
    ASSERT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 0);
    EXPECT_TRUE(fs::exists(target / "manifest.json"));
}

TEST(AllScenarios, CompleteAtDefaults) {
    TempDir tmp;
    for (const auto &s : catalog()) {
        ScenarioConfig c;
        c.scenario = s.name;
        if (s.name == "teleport-sweep") {
            c.params["r_max"] = 2.0;
        }
        c.output_dir = (tmp.path() / s.name).string();
        const auto start = std::chrono::steady_clock::now();
        EXPECT_EQ(run(c), kOk) << s.name;
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        EXPECT_LT(secs, 60.0) << s.name;
        EXPECT_TRUE(fs::exists(tmp.path() / s.name / "manifest.json")) << s.name;
    }
}
