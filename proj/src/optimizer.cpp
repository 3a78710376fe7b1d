#include "tdcr/optimizer.hpp"

#include <cmath>
#include <string>

namespace tdcr {

void GAConfig::validate() const
{
    if (population_size < 2)
        throw std::invalid_argument("GA population_size must be >= 2");
    if (max_generations < 1)
        throw std::invalid_argument("GA max_generations must be >= 1");
    if (!(convergence_tol > 0.0))
        throw std::invalid_argument("GA convergence_tol must be > 0");
    if (stall_generations < 1)
        throw std::invalid_argument("GA stall_generations must be >= 1");
    if (elitism_count < 0 || elitism_count >= population_size)
        throw std::invalid_argument("GA elitism_count must be in [0, population_size)");
    if (tournament_size < 1)
        throw std::invalid_argument("GA tournament_size must be >= 1");
    for (double rate : {crossover_rate, mutation_rate})
        if (!(rate >= 0.0 && rate <= 1.0))
            throw std::invalid_argument("GA rates must lie in [0, 1]");
    if (!(mutation_sigma >= 0.0) || !std::isfinite(mutation_sigma))
        throw std::invalid_argument("GA mutation_sigma must be >= 0");
}

ForceBounds ForceBounds::uniform(const RobotParams& params, double lo, double hi)
{
    const auto n = static_cast<std::size_t>(params.num_tendons());
    return {std::vector<double>(n, lo), std::vector<double>(n, hi)};
}

void ForceBounds::validate(const RobotParams& params) const
{
    const auto n = static_cast<std::size_t>(params.num_tendons());
    if (lower.size() != n || upper.size() != n)
        throw std::invalid_argument("force bounds need " + std::to_string(n) + " lower and upper values");
    for (std::size_t t = 0; t < n; ++t)
        if (!(lower[t] >= 0.0) || !(lower[t] < upper[t]) || !std::isfinite(upper[t]))
            throw std::invalid_argument("force bounds of tendon " + std::to_string(t + 1) +
                                        " must satisfy 0 <= lower < upper");
}

double penalty_objective(const RobotParams& params)
{
    return 10.0 / params.total_length();
}

std::pair<double, EquilibriumSolution> fsw_objective(const TendonForceSet& forces, const LoadCase& load,
                                                     const RobotParams& params, const SolverSettings& settings,
                                                     const std::optional<Configuration>& warm_start)
{
    auto solution = solve_equilibrium(forces, load, params, settings, warm_start);
    if (!solution.converged && warm_start)
    {
        // A poor warm start should not condemn the force set.
        auto cold = solve_equilibrium(forces, load, params, settings);
        if (cold.converged)
            solution = std::move(cold);
    }
    const double norm = solution.tip_pose.translation.norm();
    if (!solution.converged || !(norm > 0.0))
        return {penalty_objective(params), std::move(solution)};
    return {1.0 / norm, std::move(solution)};
}

GAResult ga_optimize(const LoadCase& load, const ForceBounds& bounds, const GAConfig& ga, const RobotParams& params,
                     const SolverSettings& settings, int jobs)
{
    params.validate();
    bounds.validate(params);
    const double penalty = penalty_objective(params);

    auto evaluate = [&](const std::vector<double>& genes, const EquilibriumSolution* parent) {
        std::optional<Configuration> warm;
        if (parent && parent->converged)
            warm = parent->config;
        return fsw_objective(TendonForceSet{genes}, load, params, settings, warm);
    };
    auto outcome = run_genetic_algorithm<EquilibriumSolution>(bounds.lower, bounds.upper, ga, evaluate, jobs);
    if (!(outcome.best_objective < penalty))
        throw std::runtime_error("every fitness evaluation failed to reach equilibrium; check the force bounds and "
                                 "robot parameters");

    GAResult result;
    result.best_forces = TendonForceSet{outcome.best_genes};
    result.best_objective = outcome.best_objective;
    result.best_solution = std::move(outcome.best_payload);
    result.best_tip_norm = result.best_solution.tip_pose.translation.norm();
    result.history = std::move(outcome.history);
    result.generations_run = static_cast<int>(result.history.size());
    result.converged = outcome.converged;
    return result;
}

SelfTestResult ga_engine_selftest(const std::vector<double>& shift, const std::vector<double>& lower,
                                  const std::vector<double>& upper, const GAConfig& ga)
{
    if (shift.size() != lower.size())
        throw std::invalid_argument("shift and bounds differ in dimension");
    struct None
    {
    };
    auto sphere = [&](const std::vector<double>& x, const None*) {
        double sum = 0.0;
        for (std::size_t d = 0; d < x.size(); ++d)
            sum += (x[d] - shift[d]) * (x[d] - shift[d]);
        return std::pair<double, None>{sum, None{}};
    };
    auto outcome = run_genetic_algorithm<None>(lower, upper, ga, sphere);
    return {outcome.best_genes, outcome.best_objective, outcome.history,
            static_cast<int>(outcome.history.size())};
}

}  // namespace tdcr
