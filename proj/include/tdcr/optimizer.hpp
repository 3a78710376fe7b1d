#pragma once

#include "tdcr/parallel.hpp"
#include "tdcr/solver.hpp"

#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tdcr {

struct GAConfig
{
    int population_size = 50;
    int max_generations = 50;
    double convergence_tol = 1e-6;  // on the generation-to-generation improvement of the best objective
    int stall_generations = 1;      // consecutive sub-tolerance generations that stop the run
    int elitism_count = 1;
    int tournament_size = 3;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;     // per gene
    double mutation_sigma = 0.05;   // fraction of the bound range
    std::uint64_t rng_seed = 1;

    void validate() const;
    bool operator==(const GAConfig&) const = default;
};

struct ForceBounds
{
    std::vector<double> lower;  // [N]
    std::vector<double> upper;  // [N]

    static ForceBounds uniform(const RobotParams& params, double lo, double hi);
    void validate(const RobotParams& params) const;
    std::size_t size() const { return lower.size(); }

    bool operator==(const ForceBounds&) const = default;
};

struct GenerationStats
{
    double best = 0.0;
    double mean = 0.0;
};

// Outcome of the generic engine; Payload is whatever the fitness function attaches
// to an individual (the equilibrium solution, for the robot).
template <class Payload>
struct GAOutcome
{
    std::vector<double> best_genes;
    double best_objective = std::numeric_limits<double>::infinity();
    Payload best_payload{};
    std::vector<GenerationStats> history;
    std::vector<GenerationStats> initial_stats;
    bool converged = false;  // stopped on the improvement tolerance rather than the generation cap
    std::size_t evaluations = 0;
};

// Real-coded GA minimizing `evaluate` over the box [lower, upper].
// evaluate(genes, parent_payload_or_null) -> std::pair<double, Payload>.
// Tournament selection, uniform crossover, Gaussian mutation with clamping, elitism.
// All random draws of a generation happen before its evaluations are dispatched,
// so the result is independent of `jobs`.
template <class Payload, class Evaluate>
GAOutcome<Payload> run_genetic_algorithm(const std::vector<double>& lower, const std::vector<double>& upper,
                                         const GAConfig& cfg, Evaluate&& evaluate, int jobs = 1)
{
    cfg.validate();
    if (lower.size() != upper.size() || lower.empty())
        throw std::invalid_argument("GA bounds must be non-empty and of equal length");
    for (std::size_t d = 0; d < lower.size(); ++d)
        if (!(lower[d] < upper[d]))
            throw std::invalid_argument("GA bounds require lower < upper in every dimension");

    struct Individual
    {
        std::vector<double> genes;
        double objective = 0.0;
        Payload payload{};
        int parent = -1;  // index into the previous generation whose payload seeds the evaluation
        bool evaluated = false;
    };

    const auto dim = lower.size();
    const auto pop_size = static_cast<std::size_t>(cfg.population_size);
    std::mt19937_64 rng(cfg.rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    auto evaluate_all = [&](std::vector<Individual>& pop, const std::vector<Individual>* previous) {
        parallel_for(pop.size(), jobs, [&](std::size_t i) {
            Individual& ind = pop[i];
            if (ind.evaluated)
                return;
            const Payload* hint =
                (previous && ind.parent >= 0) ? &(*previous)[static_cast<std::size_t>(ind.parent)].payload : nullptr;
            auto [objective, payload] = evaluate(static_cast<const std::vector<double>&>(ind.genes), hint);
            ind.objective = objective;
            ind.payload = std::move(payload);
            ind.evaluated = true;
        });
    };

    GAOutcome<Payload> out;
    auto record = [&](const std::vector<Individual>& pop) {
        GenerationStats stats{std::numeric_limits<double>::infinity(), 0.0};
        std::size_t best_index = 0;
        for (std::size_t i = 0; i < pop.size(); ++i)
        {
            stats.mean += pop[i].objective;
            if (pop[i].objective < stats.best)
            {
                stats.best = pop[i].objective;
                best_index = i;
            }
        }
        stats.mean /= static_cast<double>(pop.size());
        if (pop[best_index].objective < out.best_objective)
        {
            out.best_objective = pop[best_index].objective;
            out.best_genes = pop[best_index].genes;
            out.best_payload = pop[best_index].payload;
        }
        out.history.push_back(stats);
    };

    std::vector<Individual> population(pop_size);
    for (auto& ind : population)
    {
        ind.genes.resize(dim);
        for (std::size_t d = 0; d < dim; ++d)
            ind.genes[d] = lower[d] + (upper[d] - lower[d]) * unit(rng);
    }
    evaluate_all(population, nullptr);
    out.evaluations += pop_size;
    record(population);
    out.initial_stats = out.history;

    auto tournament = [&](const std::vector<Individual>& pop) {
        std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
        std::size_t winner = pick(rng);
        for (int k = 1; k < cfg.tournament_size; ++k)
        {
            const std::size_t challenger = pick(rng);
            if (pop[challenger].objective < pop[winner].objective)
                winner = challenger;
        }
        return winner;
    };

    int stalled = 0;
    for (int generation = 2; generation <= cfg.max_generations; ++generation)
    {
        std::vector<std::size_t> order(pop_size);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return population[a].objective < population[b].objective;
        });

        std::vector<Individual> next;
        next.reserve(pop_size);
        for (int e = 0; e < cfg.elitism_count && next.size() < pop_size; ++e)
            next.push_back(population[order[static_cast<std::size_t>(e)]]);

        while (next.size() < pop_size)
        {
            const std::size_t first = tournament(population);
            const std::size_t second = tournament(population);
            Individual child;
            child.genes = population[first].genes;
            child.parent = static_cast<int>(first);
            if (unit(rng) < cfg.crossover_rate)
                for (std::size_t d = 0; d < dim; ++d)
                    if (unit(rng) < 0.5)
                        child.genes[d] = population[second].genes[d];
            for (std::size_t d = 0; d < dim; ++d)
                if (unit(rng) < cfg.mutation_rate)
                {
                    const double step = cfg.mutation_sigma * (upper[d] - lower[d]) * gauss(rng);
                    child.genes[d] = std::clamp(child.genes[d] + step, lower[d], upper[d]);
                }
            next.push_back(std::move(child));
        }

        evaluate_all(next, &population);
        out.evaluations += pop_size - std::min(pop_size, static_cast<std::size_t>(cfg.elitism_count));
        population = std::move(next);

        const double previous_best = out.history.back().best;
        record(population);
        stalled = previous_best - out.history.back().best < cfg.convergence_tol ? stalled + 1 : 0;
        if (stalled >= cfg.stall_generations)
        {
            out.converged = true;
            break;
        }
    }
    return out;
}

struct GAResult
{
    TendonForceSet best_forces;
    double best_objective = 0.0;  // [1/m]
    double best_tip_norm = 0.0;   // [m]
    std::vector<GenerationStats> history;
    int generations_run = 0;
    bool converged = false;
    EquilibriumSolution best_solution;
};

// Objective assigned to a force set whose equilibrium solve did not converge:
// ten times the objective of the fully extended robot.
double penalty_objective(const RobotParams& params);

// Reciprocal tip distance of the equilibrium reached with `forces`.
std::pair<double, EquilibriumSolution> fsw_objective(const TendonForceSet& forces, const LoadCase& load,
                                                     const RobotParams& params, const SolverSettings& settings,
                                                     const std::optional<Configuration>& warm_start = std::nullopt);

// Maximizes the feasible static workspace over the base tensions.
// Throws std::runtime_error if every evaluated force set was penalized.
GAResult ga_optimize(const LoadCase& load, const ForceBounds& bounds, const GAConfig& ga, const RobotParams& params,
                     const SolverSettings& settings, int jobs = 1);

struct SelfTestResult
{
    std::vector<double> best_genes;
    double best_objective = 0.0;
    std::vector<GenerationStats> history;
    int generations_run = 0;
};

// Runs the engine on the sphere function sum (x - shift)^2, independent of the robot model.
SelfTestResult ga_engine_selftest(const std::vector<double>& shift, const std::vector<double>& lower,
                                  const std::vector<double>& upper, const GAConfig& ga);

}  // namespace tdcr
