#pragma once

#include "tdcr/optimizer.hpp"
#include "tdcr/solver.hpp"
#include "tdcr/workspace.hpp"

#include <string>
#include <vector>

namespace tdcr::report {

// Floats are written with 17 significant digits so CSV values round-trip exactly.
std::string format_double(double value);

std::string solution_csv(const EquilibriumSolution& solution, const TendonForceSet& forces, const RobotParams& params);
std::string workspace_csv(const std::vector<WorkspaceSample>& samples);
std::string shapes_csv(const std::vector<WorkspaceSample>& samples, const RobotParams& params);
std::string history_csv(const GAResult& result);
std::string best_csv(const GAResult& result);

struct Polyline
{
    std::vector<Vec3> points;
    std::string label;
};

// Side-by-side x-z and y-z projections of robot backbones.
std::string shape_svg(const std::vector<Polyline>& shapes, const std::string& title);

// Tip distance against sample index; non-converged samples drawn hollow.
std::string workspace_svg(const std::vector<WorkspaceSample>& samples, double reach);

// Best and population-mean objective per generation.
std::string convergence_svg(const GAResult& result, double reach);

}  // namespace tdcr::report
