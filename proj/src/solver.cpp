#include "tdcr/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tdcr {

namespace {

// Inner Newton solves run this much tighter than the outer certificate so that
// the tension refresh alone decides the final residual.
constexpr double kInnerTolFactor = 1e-2;
constexpr double kMinRcond = 1e-14;
constexpr double kArmijo = 1e-4;

struct NewtonOutcome
{
    Configuration config;
    SolveStatus status = SolveStatus::iteration_limit;
    int iterations = 0;
    std::string message;
};

bool admissible(const Configuration& config, double length)
{
    for (const auto& s : config.states)
        if (!is_admissible(s, length))
            return false;
    return true;
}

// Residual norm, or +inf when the trial configuration is outside the model's domain.
double trial_norm(const Configuration& config, const TensionProfile& tensions, const LoadCase& load,
                  const RobotParams& params, Eigen::VectorXd& residual)
{
    if (!admissible(config, params.subsegment_length))
        return std::numeric_limits<double>::infinity();
    try
    {
        residual = equilibrium_residual(config, tensions, load, params);
    }
    catch (const NonFiniteError&)
    {
        return std::numeric_limits<double>::infinity();
    }
    const double norm = residual.norm();
    return std::isfinite(norm) ? norm : std::numeric_limits<double>::infinity();
}

NewtonOutcome damped_newton(Configuration config, const TensionProfile& tensions, const LoadCase& load,
                            const RobotParams& params, const SolverSettings& settings, int budget)
{
    NewtonOutcome out;
    const double tol = kInnerTolFactor * settings.residual_tol;
    Eigen::VectorXd residual;
    double norm = trial_norm(config, tensions, load, params, residual);
    if (!std::isfinite(norm))
    {
        out.config = std::move(config);
        out.status = SolveStatus::non_finite;
        out.message = "residual is not finite at the initial configuration";
        return out;
    }

    while (norm >= tol)
    {
        if (out.iterations >= budget)
        {
            out.status = SolveStatus::iteration_limit;
            out.message = "Newton iteration budget exhausted (|r| = " + std::to_string(norm) + ")";
            out.config = std::move(config);
            return out;
        }
        ++out.iterations;

        Eigen::MatrixXd jac;
        try
        {
            jac = numeric_jacobian(config, tensions, load, params, settings.fd_step);
        }
        catch (const NonFiniteError& e)
        {
            out.status = SolveStatus::non_finite;
            out.message = std::string(e.what()) + " at disk " + std::to_string(e.disk());
            out.config = std::move(config);
            return out;
        }
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
        const double rcond = lu.rcond();
        if (!(rcond > kMinRcond))
        {
            out.status = SolveStatus::singular_jacobian;
            out.message = "Jacobian is numerically singular (rcond estimate " + std::to_string(rcond) + ")";
            out.config = std::move(config);
            return out;
        }
        const Eigen::VectorXd step = -lu.solve(residual);
        const Eigen::VectorXd x = config.to_vector();

        bool accepted = false;
        for (double damping = 1.0; damping >= settings.damping_min; damping *= 0.5)
        {
            Configuration candidate = Configuration::from_vector(x + damping * step);
            Eigen::VectorXd candidate_residual;
            const double candidate_norm = trial_norm(candidate, tensions, load, params, candidate_residual);
            if (candidate_norm < (1.0 - kArmijo * damping) * norm)
            {
                config = std::move(candidate);
                residual = std::move(candidate_residual);
                norm = candidate_norm;
                accepted = true;
                break;
            }
        }
        if (!accepted)
        {
            // Already at the round-off floor of the residual: accept as converged.
            if (norm < settings.residual_tol)
                break;
            out.status = SolveStatus::line_search_failed;
            out.message = "line search could not reduce |r| = " + std::to_string(norm);
            out.config = std::move(config);
            return out;
        }
    }
    out.status = SolveStatus::converged;
    out.config = std::move(config);
    return out;
}

}  // namespace

void SolverSettings::validate() const
{
    if (!(residual_tol > 0.0) || !(damping_min > 0.0) || !(fd_step > 0.0) || !(friction_loop_tol > 0.0) ||
        max_newton_iters < 1 || max_friction_iters < 1)
        throw std::invalid_argument("solver settings must all be positive");
    if (damping_min > 1.0)
        throw std::invalid_argument("solver damping_min must not exceed 1");
}

const char* to_string(SolveStatus status)
{
    switch (status)
    {
    case SolveStatus::converged: return "converged";
    case SolveStatus::iteration_limit: return "iteration_limit";
    case SolveStatus::line_search_failed: return "line_search_failed";
    case SolveStatus::singular_jacobian: return "singular_jacobian";
    case SolveStatus::non_finite: return "non_finite";
    }
    return "unknown";
}

Eigen::MatrixXd numeric_jacobian(const Configuration& config, const TensionProfile& tensions, const LoadCase& load,
                                 const RobotParams& params, double fd_step)
{
    const Eigen::VectorXd x = config.to_vector();
    const auto n = x.size();
    Eigen::MatrixXd jac(n, n);
    Eigen::VectorXd probe = x;
    for (Eigen::Index q = 0; q < n; ++q)
    {
        const double h = fd_step * std::max(1.0, std::abs(x[q]));
        probe[q] = x[q] + h;
        const Eigen::VectorXd plus = equilibrium_residual(Configuration::from_vector(probe), tensions, load, params);
        probe[q] = x[q] - h;
        const Eigen::VectorXd minus = equilibrium_residual(Configuration::from_vector(probe), tensions, load, params);
        probe[q] = x[q];
        jac.col(q) = (plus - minus) / (2.0 * h);
        if (!jac.col(q).allFinite())
            throw NonFiniteError("non-finite Jacobian column", static_cast<int>(q / 3) + 1);
    }
    return jac;
}

EquilibriumSolution solve_equilibrium(const TendonForceSet& forces, const LoadCase& load, const RobotParams& params,
                                      const SolverSettings& settings, const std::optional<Configuration>& initial)
{
    params.validate();
    settings.validate();
    forces.validate(params);
    load.validate();

    EquilibriumSolution sol;
    sol.config = initial ? *initial : Configuration::straight(params.num_subsegments());
    if (sol.config.size() != params.num_subsegments())
        throw std::invalid_argument("initial configuration does not match the robot");
    if (!admissible(sol.config, params.subsegment_length))
        sol.config = Configuration::straight(params.num_subsegments());

    std::optional<TensionProfile> frozen;
    int budget = settings.max_newton_iters;
    for (int pass = 1;; ++pass)
    {
        const FrameChain chain(sol.config, params);
        sol.tensions = propagate_tensions(forces, chain, params);
        sol.tip_pose = chain.tip();

        double change = 0.0;
        if (frozen)
        {
            change = sol.tensions.max_abs_difference(*frozen);
            sol.tension_changes.push_back(change);
        }

        // The residual is always re-evaluated with tensions recomputed on the current configuration.
        Eigen::VectorXd residual;
        sol.residual_norm = trial_norm(sol.config, sol.tensions, load, params, residual);
        if (sol.residual_norm < settings.residual_tol && change < settings.friction_loop_tol)
        {
            sol.converged = true;
            sol.status = SolveStatus::converged;
            break;
        }
        if (pass > settings.max_friction_iters)
        {
            sol.status = SolveStatus::iteration_limit;
            sol.message = "friction loop did not settle (last tension change " + std::to_string(change) + " N)";
            break;
        }

        ++sol.friction_iterations;
        auto newton = damped_newton(sol.config, sol.tensions, load, params, settings, budget);
        sol.newton_iterations += newton.iterations;
        budget -= newton.iterations;
        sol.config = std::move(newton.config);
        frozen = sol.tensions;
        if (newton.status != SolveStatus::converged)
        {
            const FrameChain last(sol.config, params);
            sol.tensions = propagate_tensions(forces, last, params);
            sol.tip_pose = last.tip();
            sol.residual_norm = trial_norm(sol.config, sol.tensions, load, params, residual);
            sol.status = newton.status;
            sol.message = newton.message;
            break;
        }
    }

    const auto& c = sol.tension_changes;
    for (std::size_t k = c.size() >= 3 ? c.size() - 3 : c.size(); k + 1 < c.size(); ++k)
        if (c[k + 1] > c[k] && c[k + 1] >= 1e-3 * settings.friction_loop_tol)
            sol.friction_monotone = false;
    return sol;
}

}  // namespace tdcr
