#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "hybridsched/io.hpp"

namespace hybridsched {
namespace {

namespace fs = std::filesystem;

struct CliDir {
    fs::path path;
    CliDir() {
        path = fs::temp_directory_path() / ("hybridsched_cli_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter++));
        fs::create_directories(path);
    }
    ~CliDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static inline int counter = 0;
};

int run_cli(const std::string& args) {
    std::string cmd = std::string(HYBRIDSCHED_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

TEST(Cli, GenProducesLoadableDemand) {
    CliDir dir;
    std::string out = dir.file("demand.csv");
    ASSERT_EQ(run_cli("gen -n 16 --n-large 2 --n-medium 4 --seed 5 -o " + out), 0);
    Matrix d = load_demand(out);
    EXPECT_EQ(d.size(), 16);
    EXPECT_TRUE(is_nonnegative(d));
}

TEST(Cli, RunAndValidateRoundTrip) {
    CliDir dir;
    std::string demand = dir.file("demand.csv");
    Matrix d(2, 0.0);
    d(0, 0) = d(1, 1) = 10.0;
    save_demand(demand, d);

    std::string schedule = dir.file("schedule.json");
    ASSERT_EQ(run_cli("run -a eclipse -d " + demand + " --delta 1 --ratio 10 -o " + schedule), 0);
    ASSERT_EQ(run_cli("validate -d " + demand + " -s " + schedule + " --delta 1 --ratio 10"), 0);

    // corrupt the schedule: duplicate an output inside the first matching
    json j = json::parse(read_text_file(schedule));
    j["steps"][0]["pairs"][1][1] = j["steps"][0]["pairs"][0][1];
    write_text_file(schedule, j.dump());
    EXPECT_NE(run_cli("validate -d " + demand + " -s " + schedule + " --delta 1 --ratio 10"), 0);
}

TEST(Cli, TwohopLedgerValidates) {
    CliDir dir;
    std::string demand = dir.file("demand.csv");
    ASSERT_EQ(run_cli("gen -n 12 --n-large 2 --n-medium 4 --seed 3 -o " + demand), 0);
    std::string schedule = dir.file("schedule.json");
    std::string ledger = dir.file("ledger.jsonl");
    ASSERT_EQ(run_cli("run -a twohop -d " + demand + " --delta 0.04 --ratio 10 -o " + schedule +
                      " --ledger " + ledger),
              0);
    EXPECT_EQ(run_cli("validate -d " + demand + " -s " + schedule + " --ledger " + ledger +
                      " --delta 0.04 --ratio 10"),
              0);
}

TEST(Cli, BffScheduleValidates) {
    CliDir dir;
    std::string demand = dir.file("demand.csv");
    ASSERT_EQ(run_cli("gen -n 12 --n-large 2 --n-medium 4 --seed 8 -o " + demand), 0);
    std::string schedule = dir.file("bff.json");
    ASSERT_EQ(run_cli("run -a bff -d " + demand + " --delta 0.01 --ratio 10 -o " + schedule), 0);
    EXPECT_EQ(run_cli("validate -d " + demand + " -s " + schedule + " --delta 0.01 --ratio 10"), 0);
}

TEST(Cli, SweepIsByteDeterministicWithoutTiming) {
    CliDir dir;
    std::string base = dir.file("sweep");
    std::string args = "sweep --algos eclipse bff -n 12 --runs 2 --flows 2x4 --delta 0.01 --ratio 10 "
                       "--no-timing -o " + base;
    ASSERT_EQ(run_cli(args), 0);
    std::string csv1 = read_text_file(base + ".csv");
    ASSERT_EQ(run_cli(args), 0);
    EXPECT_EQ(read_text_file(base + ".csv"), csv1);
}

TEST(Cli, SweepConfigFileWithFlagOverride) {
    CliDir dir;
    std::string config = dir.file("exp.json");
    write_text_file(config, json{{"algorithms", {"eclipse"}},
                                 {"n", 12},
                                 {"runs", 1},
                                 {"flows", {{2, 4}}},
                                 {"delta", {0.01}},
                                 {"ratio", {10.0}},
                                 {"record_wall_time", false},
                                 {"output", dir.file("fromfile")}}
                            .dump());
    ASSERT_EQ(run_cli("sweep -c " + config + " --runs 2"), 0);  // flag overrides file
    std::ifstream csv(dir.file("fromfile") + ".csv");
    ASSERT_TRUE(csv.good());
    int rows = -1;  // discount header
    std::string line;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    EXPECT_EQ(rows, 2);
}

TEST(Cli, ErrorsExitNonzero) {
    CliDir dir;
    EXPECT_NE(run_cli("run -a eclipse -d " + dir.file("missing.csv")), 0);
    std::string demand = dir.file("demand.csv");
    Matrix d(2, 0.0);
    d(0, 1) = 1.0;
    save_demand(demand, d);
    EXPECT_NE(run_cli("run -a warp -d " + demand), 0);
}

TEST(Cli, OutputDirEnvVariableIsHonored) {
    CliDir dir;
    std::string cmd = "HYBRIDSCHED_OUTDIR=" + dir.path.string() + " " + HYBRIDSCHED_CLI_PATH +
                      " gen -n 8 --n-large 1 --n-medium 2 -o envtest.csv >/dev/null 2>&1";
    ASSERT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 0);
    EXPECT_TRUE(fs::exists(dir.file("envtest.csv")));
}

}  // namespace
}  // namespace hybridsched
