#pragma once

#include "tdcr/optimizer.hpp"
#include "tdcr/solver.hpp"

#include <cstdint>
#include <vector>

namespace tdcr {

struct WorkspaceSample
{
    int sample_index = 0;
    TendonForceSet forces;
    Vec3 tip_position = Vec3::Zero();
    double tip_norm = 0.0;
    bool converged = false;
    double residual_norm = 0.0;
    Configuration config;
};

// Draws `count` force sets uniformly inside `bounds` and solves each one. Samples that
// fail to converge are kept and flagged. All draws happen up front, so the output is
// the same for any `jobs`.
std::vector<WorkspaceSample> sample_workspace(int count, const ForceBounds& bounds, const LoadCase& load,
                                              const RobotParams& params, const SolverSettings& settings,
                                              std::uint64_t seed, int jobs = 1);

double converged_fraction(const std::vector<WorkspaceSample>& samples);

// Disk centers from the base (origin) to the tip. Rejects non-converged solutions.
std::vector<Vec3> shape_polyline(const EquilibriumSolution& solution, const RobotParams& params);
std::vector<Vec3> shape_polyline(const Configuration& config, const RobotParams& params);

}  // namespace tdcr
