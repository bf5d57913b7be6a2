#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "layerfem/cli.hpp"

using namespace layerfem;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> result;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        result.push_back(line);
    }
    return result;
}

}  // namespace

TEST(Cli, SweepProducesRowsAndRate)
{
    const auto r = run({"sweep", "--problem", "CD2", "--eps-list", "1e-6", "--H-list", "0.125,0.0625", "--k", "1",
                        "--mesh-family", "uniform", "--norm", "CD2_ENERGY", "--seq", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 3u);
    // eoc is the 11th column.
    std::vector<std::string> cells;
    std::istringstream row(rows[2]);
    for (std::string cell; std::getline(row, cell, ',');) {
        cells.push_back(cell);
    }
    ASSERT_GE(cells.size(), 11u);
    // The energy error is bounded by C H; at eps = 1e-6 its L2 part dominates and converges faster.
    EXPECT_GE(std::stod(cells[10]), 0.75);
}

TEST(Cli, MeshRowAtTransition)
{
    const auto r = run({"mesh", "--family", "two-region", "--eps", "1e-4", "--H", "0.125", "--tau-exp", "0.5",
                        "--alpha", "1", "--sides", "left"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("\n8,0.01\n"), std::string::npos);
}

TEST(Cli, UnknownProblemIsUsageError)
{
    const auto r = run({"solve", "--problem", "NOPE", "--eps", "1e-4", "--H", "0.125"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("NOPE"), std::string::npos);
}

TEST(Cli, UnknownFlagIsNamed)
{
    const auto r = run({"sweep", "--problem", "CD2", "--eps-list", "1e-4", "--H-list", "0.5", "--bogus", "1"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("bogus"), std::string::npos);
}

TEST(Cli, RuntimeFailureExitsTwo)
{
    const auto r = run({"solve", "--problem", "CD2", "--eps", "0.09", "--H", "0.25", "--mesh-family", "two-region",
                        "--tau-exp", "0.5"});
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, ConfigFileMatchesFlags)
{
    const auto path = std::filesystem::temp_directory_path() / "layerfem_cli_test.cfg";
    {
        std::ofstream cfg(path);
        cfg << "# sweep settings\n"
            << "problem = RD2\n"
            << "eps-list=1e-5,1e-7\n"
            << "H-list=0.25,0.125\n"
            << "k=2\n"
            << "mesh-family=two-region\n"
            << "seq=true\n";
    }
    const auto from_file = run({"sweep", "--config", path.string()});
    const auto from_flags = run({"sweep", "--problem", "RD2", "--eps-list", "1e-5,1e-7", "--H-list", "0.25,0.125",
                                 "--k", "2", "--mesh-family", "two-region", "--seq"});
    ASSERT_EQ(from_file.code, 0) << from_file.err;
    ASSERT_EQ(from_flags.code, 0) << from_flags.err;
    EXPECT_EQ(from_file.out, from_flags.out);

    const auto overridden = run({"sweep", "--config", path.string(), "--eps-list", "1e-6"});
    ASSERT_EQ(overridden.code, 0) << overridden.err;
    EXPECT_NE(overridden.out, from_file.out);
    std::filesystem::remove(path);
}

TEST(Cli, ConfigRejectsUnknownKey)
{
    const auto path = std::filesystem::temp_directory_path() / "layerfem_cli_bad.cfg";
    {
        std::ofstream cfg(path);
        cfg << "problem=CD2\nwidth=3\n";
    }
    const auto r = run({"sweep", "--config", path.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("width"), std::string::npos);
    std::filesystem::remove(path);
}

TEST(Cli, PresetsListEachIdOnce)
{
    const auto r = run({"presets"});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* id : {"CD2", "RD2", "CD4-HINGED", "CD4-XWEAK", "CD4-CLAMPED", "RD4-HINGED", "RD4-CLAMPED", "MIX4",
                           "MIX4-HINGED"}) {
        int count = 0;
        for (const auto& line : lines(r.out)) {
            if (line.rfind(std::string(id) + ",", 0) == 0) {
                ++count;
            }
        }
        EXPECT_EQ(count, 1) << id;
    }
    EXPECT_NE(r.out.find("(k-1)/k"), std::string::npos);
}

TEST(Cli, InterpSweepRuns)
{
    const auto r = run({"interp", "--problem", "CD2", "--interp", "moment", "--eps-list", "1e-4", "--H-list",
                        "0.25,0.125", "--k", "2", "--seq"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out).size(), 3u);
}

TEST(Cli, SolveWritesMarkdown)
{
    const auto r = run({"solve", "--problem", "MIX4", "--eps", "1e-6", "--H", "0.125", "--k", "2", "--mesh-family",
                        "two-region", "--format", "md"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("| problem", 0), 0u);
}
