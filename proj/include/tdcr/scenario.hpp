#pragma once

#include "tdcr/optimizer.hpp"
#include "tdcr/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace tdcr {

// Everything a CLI run needs. Sections missing from the file take the defaults below.
struct Scenario
{
    RobotParams robot;
    LoadCase load = {true, Vec3(0.1, 0.1, -0.1), Vec3(-0.1, 0.1, 0.1)};
    ForceBounds bounds = ForceBounds::uniform(RobotParams{}, 0.0, 10.0);
    GAConfig ga;
    SolverSettings solver;
    std::optional<TendonForceSet> forces;  // `solve` mode
    std::optional<int> sample_count;       // `sample` mode
    std::uint64_t seed = 1;                // `sample` mode

    // Cross-section checks (counts of forces and bounds against the robot).
    void validate() const;

    bool operator==(const Scenario&) const = default;
};

// Configuration error carrying the 1-based line it refers to (0 when unknown).
class ScenarioError : public std::runtime_error
{
public:
    ScenarioError(const std::string& source, int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

// Strict parse: unknown keys, wrong types and invalid values are ScenarioErrors.
Scenario parse_scenario(const std::string& text, const std::string& source_name = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

// Full dump with every field spelled out; parse_scenario(dump_scenario(s)) == s.
std::string dump_scenario(const Scenario& scenario);

}  // namespace tdcr
