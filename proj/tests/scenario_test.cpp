#include "tdcr/report.hpp"
#include "tdcr/scenario.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace tdcr;

namespace {

int error_line(const std::string& text)
{
    try
    {
        parse_scenario(text, "test.yaml");
    }
    catch (const ScenarioError& e)
    {
        return e.line();
    }
    return -1;
}

std::string error_text(const std::string& text)
{
    try
    {
        parse_scenario(text, "test.yaml");
    }
    catch (const ScenarioError& e)
    {
        return e.what();
    }
    return {};
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

}  // namespace

TEST(Scenario, EmptyMappingGivesDefaults)
{
    const auto sc = parse_scenario("seed: 1\n");
    EXPECT_EQ(sc.robot, RobotParams{});
    EXPECT_EQ(sc.ga, GAConfig{});
    EXPECT_EQ(sc.solver, SolverSettings{});
    EXPECT_TRUE(sc.load.gravity_on);
    EXPECT_EQ(sc.load.external_force, Vec3(0.1, 0.1, -0.1));
    EXPECT_EQ(sc.load.external_torque, Vec3(-0.1, 0.1, 0.1));
    EXPECT_EQ(sc.bounds, ForceBounds::uniform(RobotParams{}, 0, 10));
    EXPECT_FALSE(sc.forces);
    EXPECT_FALSE(sc.sample_count);
}

TEST(Scenario, ShippedConfigsLoad)
{
    const auto reference = load_scenario(std::string(TDCR_CONFIG_DIR) + "/reference_scenario.yaml");
    EXPECT_EQ(reference.robot, RobotParams{});
    EXPECT_EQ(reference.ga, GAConfig{});
    ASSERT_TRUE(reference.forces);
    EXPECT_EQ(reference.forces->base_tensions.size(), 8u);
    EXPECT_EQ(reference.sample_count, 100);

    const auto unloaded = load_scenario(std::string(TDCR_CONFIG_DIR) + "/unloaded.yaml");
    EXPECT_EQ(unloaded.load, LoadCase::unloaded());
    EXPECT_EQ(unloaded.seed, 7u);
}

TEST(Scenario, ScalarAndListBounds)
{
    const auto sc = parse_scenario("bounds:\n  lower: [0, 0, 0, 0, 1, 1, 1, 1]\n  upper: 5\n");
    EXPECT_EQ(sc.bounds.lower[4], 1.0);
    EXPECT_EQ(sc.bounds.upper, std::vector<double>(8, 5.0));
}

TEST(Scenario, DumpRoundTrips)
{
    auto sc = parse_scenario("robot:\n  disk_mass: 0.0025\nload:\n  gravity: false\nforces: [1, 2, 3, 4, 5, 6, 7, "
                             "8.125]\nsample_count: 3\nseed: 99\nga:\n  stall_generations: 3\n");
    sc.load.external_force = Vec3(0.1, 1.0 / 3.0, -2e-7);
    const auto again = parse_scenario(dump_scenario(sc));
    EXPECT_EQ(again, sc);
    EXPECT_EQ(dump_scenario(again), dump_scenario(sc));
}

TEST(Scenario, UnknownKeyIsAnchored)
{
    EXPECT_EQ(error_line("seed: 1\nga:\n  population_size: 10\n  populaton: 3\n"), 4);
    EXPECT_NE(error_text("seed: 1\nbogus: 2\n").find("test.yaml:2:"), std::string::npos);
    EXPECT_NE(error_text("seed: 1\nbogus: 2\n").find("bogus"), std::string::npos);
}

TEST(Scenario, WrongTypesAreAnchored)
{
    EXPECT_EQ(error_line("robot:\n  disks_per_segment: many\n"), 2);
    EXPECT_EQ(error_line("load:\n  external_force: [1, 2]\n"), 2);
    EXPECT_EQ(error_line("forces: [1, 2, x, 4, 5, 6, 7, 8]\n"), 1);
    EXPECT_EQ(error_line("ga: 5\n"), 1);
}

TEST(Scenario, InvalidValuesAreRejected)
{
    EXPECT_GT(error_line("forces: [1, 2, 3]\n"), 0);
    EXPECT_GT(error_line("forces: [1, 2, 3, 4, 5, 6, 7, -8]\n"), 0);
    EXPECT_EQ(error_line("seed: 1\nsolver:\n  residual_tol: -1\n"), 3);
    EXPECT_GT(error_line("sample_count: -2\n"), 0);
    EXPECT_GT(error_line("bounds:\n  lower: 5\n  upper: 1\n"), 0);
    EXPECT_GT(error_line("robot:\n  subsegment_length: 0\n"), 0);
}

TEST(Scenario, SyntaxErrorsAndEmptyFiles)
{
    EXPECT_GT(error_line("a: [1, 2\nb: 3\n"), 0);
    EXPECT_EQ(error_line(""), 0);
    EXPECT_THROW(load_scenario("/nonexistent/scenario.yaml"), ScenarioError);
}

TEST(Report, DoublesRoundTrip)
{
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 0.4})
        EXPECT_EQ(std::stod(report::format_double(v)), v);
}

TEST(Report, SolutionCsvLayout)
{
    RobotParams p;
    const auto forces = TendonForceSet::zeros(p);
    const auto sol = solve_equilibrium(forces, LoadCase::unloaded(), p);
    const auto rows = lines(report::solution_csv(sol, forces, p));
    ASSERT_EQ(rows.size(), 22u);
    EXPECT_EQ(rows[0], "disk,beta,gamma,twist,x,y,z,tension_1,tension_2,tension_3,tension_4,tension_5,tension_6,"
                       "tension_7,tension_8");
    EXPECT_EQ(rows.back().rfind("20,0,0,0,0,0,0.4", 0), 0u);
}

TEST(Report, WorkspaceCsvHeaderOnlyWhenEmpty)
{
    const auto rows = lines(report::workspace_csv({}));
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].substr(0, 21), "sample_index,force_1,");
}

TEST(Report, SvgsAreWellFormed)
{
    RobotParams p;
    const auto pts = shape_polyline(Configuration::straight(20), p);
    const auto svg = report::shape_svg({{pts, "a"}}, "t");
    EXPECT_EQ(svg.rfind("<svg", 0) == 0 || svg.rfind("<?xml", 0) == 0, true);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_NE(svg.find("polyline"), std::string::npos);
}
