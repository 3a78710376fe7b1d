#include "tdcr/scenario.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace {

const std::string kConfigs = TDCR_CONFIG_DIR;

class Cli : public ::testing::Test
{
protected:
    void SetUp() override
    {
        std::random_device rd;
        dir_ = fs::temp_directory_path() / ("tdcr_cli_" + std::to_string(rd()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string& args, std::string* stdout_text = nullptr) const
    {
        const auto out = dir_ / "stdout.txt";
        const std::string cmd = "TDCR_LOG=error '" + std::string(TDCR_CLI_BINARY) + "' " + args + " > '" +
                                out.string() + "' 2> '" + (dir_ / "stderr.txt").string() + "'";
        const int status = std::system(cmd.c_str());
        if (stdout_text)
            *stdout_text = read(out);
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    fs::path write(const std::string& name, const std::string& text) const
    {
        const auto path = dir_ / name;
        std::ofstream(path) << text;
        return path;
    }

    static std::string read(const fs::path& path)
    {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    static std::size_t count_lines(const std::string& text)
    {
        return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpAndUsageErrors)
{
    EXPECT_EQ(run("--help"), 0);
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("solve"), 1);
    EXPECT_EQ(run("frobnicate --config x"), 1);
    EXPECT_EQ(run("sample --config " + kConfigs + "/unloaded.yaml --jobs 0"), 1);
}

TEST_F(Cli, MalformedScenarioWritesNothing)
{
    const auto bad = write("bad.yaml", "robot:\n  disk_mass: heavy\n");
    const auto out = dir_ / "out";
    EXPECT_EQ(run("solve --config " + bad.string() + " --out " + out.string()), 1);
    EXPECT_FALSE(fs::exists(out));
    EXPECT_NE(read(dir_ / "stderr.txt").find("bad.yaml:2:"), std::string::npos);
    EXPECT_EQ(run("solve --config " + (dir_ / "missing.yaml").string()), 1);
}

TEST_F(Cli, SolveUnloadedGivesTheStraightPose)
{
    const auto out = dir_ / "solve";
    ASSERT_EQ(run("solve --config " + kConfigs + "/unloaded.yaml --out " + out.string()), 0);
    const auto csv = read(out / "solution.csv");
    EXPECT_EQ(count_lines(csv), 22u);
    const auto last = csv.substr(csv.rfind('\n', csv.size() - 2) + 1);
    EXPECT_EQ(last.rfind("20,0,0,0,0,0,0.4", 0), 0u) << last;
    EXPECT_TRUE(fs::exists(out / "shape.svg"));
}

TEST_F(Cli, SolveWithoutForcesIsAConfigError)
{
    const auto cfg = write("noforces.yaml", "load:\n  gravity: false\n");
    EXPECT_EQ(run("solve --config " + cfg.string() + " --out " + (dir_ / "o").string()), 1);
}

TEST_F(Cli, SolveThatFailsToConvergeExitsTwoAndWritesNothing)
{
    const auto cfg = write("hard.yaml", "solver:\n  max_newton_iters: 1\nforces: [0, 3, 9.4, 9.9, 0.5, 9.9, 9.9, 0.5]\n");
    const auto out = dir_ / "o";
    EXPECT_EQ(run("solve --config " + cfg.string() + " --out " + out.string()), 2);
    EXPECT_FALSE(fs::exists(out / "solution.csv"));
}

TEST_F(Cli, SampleIsReproducibleAcrossRunsAndJobs)
{
    const std::string cfg = kConfigs + "/unloaded.yaml";
    ASSERT_EQ(run("sample --config " + cfg + " --out " + (dir_ / "a").string() + " --jobs 1 --shapes"), 0);
    ASSERT_EQ(run("sample --config " + cfg + " --out " + (dir_ / "b").string() + " --jobs 1"), 0);
    ASSERT_EQ(run("sample --config " + cfg + " --out " + (dir_ / "c").string() + " --jobs 4"), 0);
    const auto a = read(dir_ / "a" / "workspace.csv");
    EXPECT_EQ(count_lines(a), 11u);
    EXPECT_EQ(a, read(dir_ / "b" / "workspace.csv"));
    EXPECT_EQ(a, read(dir_ / "c" / "workspace.csv"));
    EXPECT_EQ(count_lines(read(dir_ / "a" / "shapes.csv")), 1u + 10u * 21u);
    EXPECT_TRUE(fs::exists(dir_ / "a" / "shapes.svg"));
    EXPECT_FALSE(fs::exists(dir_ / "b" / "shapes.csv"));

    ASSERT_EQ(run("sample --config " + cfg + " --out " + (dir_ / "d").string() + " --seed 8"), 0);
    EXPECT_NE(a, read(dir_ / "d" / "workspace.csv"));
}

TEST_F(Cli, SampleCountZeroIsHeaderOnly)
{
    const auto cfg = write("zero.yaml", "sample_count: 0\n");
    ASSERT_EQ(run("sample --config " + cfg.string() + " --out " + (dir_ / "o").string()), 0);
    EXPECT_EQ(count_lines(read(dir_ / "o" / "workspace.csv")), 1u);
}

TEST_F(Cli, DumpConfigRoundTrips)
{
    std::string dumped;
    ASSERT_EQ(run("optimize --config " + kConfigs + "/reference_scenario.yaml --seed 12 --dump-config", &dumped), 0);
    const auto sc = tdcr::parse_scenario(dumped);
    auto expected = tdcr::load_scenario(kConfigs + "/reference_scenario.yaml");
    expected.seed = 12;
    expected.ga.rng_seed = 12;
    EXPECT_EQ(sc, expected);
}

TEST_F(Cli, OptimizeWritesItsArtifacts)
{
    const auto cfg = write("small.yaml", "load:\n  gravity: false\n  external_force: [0, 0, 0]\n  external_torque: [0, "
                                         "0, 0]\nga:\n  population_size: 10\n  max_generations: 4\n");
    const auto out = dir_ / "o";
    const int code = run("optimize --config " + cfg.string() + " --out " + out.string());
    EXPECT_TRUE(code == 0 || code == 2) << code;
    for (const char* f : {"ga_history.csv", "best.csv", "convergence.svg", "best_shape.svg"})
        EXPECT_TRUE(fs::exists(out / f)) << f;
    const auto history = read(out / "ga_history.csv");
    EXPECT_EQ(history.rfind("generation,best_objective,mean_objective\n", 0), 0u);
}
