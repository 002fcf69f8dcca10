#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "owagen/metrics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("owagen_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

CliRun run(const std::string& args) {
    static int counter = 0;
    const fs::path err_file = fs::temp_directory_path() / ("owagen_cli_err_" + std::to_string(counter++));
    const std::string cmd = std::string(OWAGEN_CLI_PATH) + " " + args + " 2>" + err_file.string();
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
    const int status = pclose(pipe);
    CliRun r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, slurp(err_file)};
    fs::remove(err_file);
    return r;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(CliGenerate, NearUniformWeights) {
    const CliRun r = run("generate --alpha 0.5 --delta 0.999 --n 5");
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string first = r.out.substr(0, r.out.find('\n'));
    std::stringstream ss(first);
    std::string field;
    int count = 0;
    while (std::getline(ss, field, ',')) {
        EXPECT_NEAR(std::stod(field), 0.2, 2e-3);
        ++count;
    }
    EXPECT_EQ(count, 5);
}

TEST(CliGenerate, CornerVector) {
    const CliRun r = run("generate --alpha 0 --delta 0 --n 3");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "1,0,0");
}

TEST(CliGenerate, InfeasibleExitCode) {
    const CliRun r = run("generate --alpha 0.1 --delta 0.9 --n 5");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("0.36"), std::string::npos) << r.err;
    const CliRun j = run("generate --alpha 0.1 --delta 0.9 --n 5 --format json");
    EXPECT_EQ(j.code, 2);
    EXPECT_NEAR(json::parse(j.out).at("delta_max").get<double>(), 0.36, 1e-15);
}

TEST(CliGenerate, UsageErrors) {
    EXPECT_EQ(run("generate --alpha 1.5 --delta 0 --n 3").code, 1);
    EXPECT_EQ(run("generate --alpha 0.5 --delta 0.5").code, 1);
    EXPECT_EQ(run("generate --alpha 0.5 --delta 0.5 --n 3 --epsilon 0").code, 1);
    EXPECT_EQ(run("generate --alpha 0.5 --delta 0.5 --n 3 --format yaml").code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("--help").code, 0);
}

TEST(CliGenerate, JsonRoundTripsMetrics) {
    const CliRun r = run("generate --alpha 0.37 --delta 0.61 --n 9 --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    for (const char* key : {"weights", "alpha", "delta", "orness", "dispersion", "tradeoff", "feasible"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j.at("feasible"), true);
    const owagen::WeightVector w(j.at("weights").get<std::vector<double>>());
    EXPECT_EQ(owagen::orness(w), j.at("orness").get<double>());
    EXPECT_EQ(owagen::dispersion(w), j.at("dispersion").get<double>());
    EXPECT_EQ(owagen::tradeoff(w), j.at("tradeoff").get<double>());
}

TEST(CliGenerate, CsvFormat) {
    const CliRun r = run("generate --alpha 1 --delta 0 --n 2 --format csv");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "index,weight\n1,0\n2,1\n");
}

TEST(CliAggregate, ExplicitWeights) {
    const CliRun r = run("aggregate --weights 0,0,1 --criteria 3,1,2");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "3\n");
}

TEST(CliAggregate, GeneratedWeights) {
    const CliRun r = run("aggregate --alpha 0.5 --delta 0.999 --n 5 --criteria 1,2,3,4,5");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(std::stod(r.out), 3.0, 0.01);
}

TEST(CliAggregate, LengthMismatch) {
    EXPECT_EQ(run("aggregate --weights 1,0 --criteria 7").code, 1);
    EXPECT_EQ(run("aggregate --criteria 7").code, 1);
    EXPECT_EQ(run("aggregate --alpha 0.1 --delta 0.9 --n 2 --criteria 1,2").code, 2);
}

TEST(CliMetrics, Uniform) {
    const CliRun r = run("metrics --weights 0.25,0.25,0.25,0.25 --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_NEAR(j.at("orness").get<double>(), 0.5, 1e-15);
    EXPECT_NEAR(j.at("dispersion").get<double>(), 1.0, 1e-15);
    EXPECT_EQ(run("metrics --weights 0.5,0.6").code, 1);
    EXPECT_EQ(run("metrics --weights 1").code, 1);
}

TEST(CliSweep, ByteIdenticalAcrossRuns) {
    const fs::path a = scratch("sweep_a");
    const fs::path b = scratch("sweep_b");
    ASSERT_EQ(run("sweep --samples 100 --seed 7 --out-dir " + a.string()).code, 0);
    ASSERT_EQ(run("sweep --samples 100 --seed 7 --out-dir " + b.string()).code, 0);
    const std::string sweep = slurp(a / "sweep.csv");
    EXPECT_EQ(sweep, slurp(b / "sweep.csv"));
    EXPECT_EQ(slurp(a / "epsilon_curve.csv"), slurp(b / "epsilon_curve.csv"));
    EXPECT_EQ(sweep.substr(0, sweep.find('\n')), "alpha,delta,distance,accepted");
    EXPECT_EQ(count_lines(sweep), 101u);
    const std::string curve = slurp(a / "epsilon_curve.csv");
    EXPECT_EQ(curve.substr(0, curve.find('\n')), "epsilon,rejected_fraction");
    EXPECT_EQ(count_lines(curve), 31u);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(CliSweep, ThreadCapDoesNotChangeOutput) {
    const fs::path a = scratch("threads_a");
    const fs::path b = scratch("threads_b");
    ASSERT_EQ(run("sweep --samples 150 --seed 3 --out-dir " + a.string()).code, 0);
    ASSERT_EQ(std::system(("OWAGEN_THREADS=1 " + std::string(OWAGEN_CLI_PATH) + " sweep --samples 150 --seed 3 "
                           "--out-dir " + b.string() + " >/dev/null")
                              .c_str()),
              0);
    EXPECT_EQ(slurp(a / "sweep.csv"), slurp(b / "sweep.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(CliSweep, UnwritableDirectory) {
    const fs::path dir = scratch("io");
    std::ofstream(dir / "file") << "x";
    EXPECT_EQ(run("sweep --samples 10 --out-dir " + (dir / "file" / "sub").string()).code, 3);
    fs::remove_all(dir);
}

TEST(CliFrontier, SummaryLine) {
    const fs::path dir = scratch("frontier");
    const CliRun r = run("frontier --samples 2000 --seed 42 --out-dir " + dir.string());
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find(" a="), std::string::npos);
    EXPECT_NE(r.out.find(" b="), std::string::npos);
    EXPECT_NE(r.out.find(" c="), std::string::npos);
    EXPECT_TRUE(fs::exists(dir / "sweep.csv"));
    fs::remove_all(dir);
}

TEST(CliGrid, Cardinality) {
    const fs::path dir = scratch("grid");
    const CliRun r = run("grid --n 5 --metric dispersion --resolution 41 --out-dir " + dir.string());
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string csv = slurp(dir / "grid_dispersion_n5.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "alpha,delta,value,feasible");
    EXPECT_EQ(count_lines(csv), 41u * 41u + 1u);
    EXPECT_FALSE(fs::exists(dir / "grid_orness_n5.csv"));
    fs::remove_all(dir);
}
