#pragma once

#include "tdcr/geometry.hpp"
#include "tdcr/statics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tdcr {

struct SolverSettings
{
    double residual_tol = 1e-8;      // [N m]
    int max_newton_iters = 100;
    double damping_min = 1e-4;
    double fd_step = 1e-7;           // relative finite-difference step
    double friction_loop_tol = 1e-6; // [N]
    int max_friction_iters = 20;

    void validate() const;
    bool operator==(const SolverSettings&) const = default;
};

enum class SolveStatus
{
    converged,
    iteration_limit,
    line_search_failed,
    singular_jacobian,
    non_finite,
};

const char* to_string(SolveStatus status);

struct EquilibriumSolution
{
    Configuration config;
    double residual_norm = 0.0;
    TensionProfile tensions;
    HomTransform tip_pose;
    bool converged = false;
    SolveStatus status = SolveStatus::iteration_limit;
    int newton_iterations = 0;    // summed over all friction-loop passes
    int friction_iterations = 0;
    bool friction_monotone = true;  // max tension change non-increasing over the last 3 passes
    std::vector<double> tension_changes;
    std::string message;
};

// Central-difference Jacobian of the fixed-tension residual; column q is perturbed by
// fd_step * max(1, |x_q|). Throws NonFiniteError if a perturbed residual is not finite.
Eigen::MatrixXd numeric_jacobian(const Configuration& config, const TensionProfile& tensions, const LoadCase& load,
                                 const RobotParams& params, double fd_step);

// Static equilibrium for the given base tensions and load. Friction is handled by an
// outer loop that freezes chord tensions during each damped Newton solve.
EquilibriumSolution solve_equilibrium(const TendonForceSet& forces, const LoadCase& load, const RobotParams& params,
                                      const SolverSettings& settings = {},
                                      const std::optional<Configuration>& initial = std::nullopt);

}  // namespace tdcr
