#include "tdcr/workspace.hpp"

#include "tdcr/parallel.hpp"

#include <random>
#include <stdexcept>

namespace tdcr {

std::vector<WorkspaceSample> sample_workspace(int count, const ForceBounds& bounds, const LoadCase& load,
                                              const RobotParams& params, const SolverSettings& settings,
                                              std::uint64_t seed, int jobs)
{
    if (count < 0)
        throw std::invalid_argument("sample count must be >= 0");
    params.validate();
    bounds.validate(params);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<WorkspaceSample> samples(static_cast<std::size_t>(count));
    for (int s = 0; s < count; ++s)
    {
        auto& sample = samples[static_cast<std::size_t>(s)];
        sample.sample_index = s;
        sample.forces.base_tensions.resize(bounds.size());
        for (std::size_t t = 0; t < bounds.size(); ++t)
            sample.forces.base_tensions[t] = bounds.lower[t] + (bounds.upper[t] - bounds.lower[t]) * unit(rng);
    }

    parallel_for(samples.size(), jobs, [&](std::size_t s) {
        auto& sample = samples[s];
        const auto solution = solve_equilibrium(sample.forces, load, params, settings);
        sample.tip_position = solution.tip_pose.translation;
        sample.tip_norm = sample.tip_position.norm();
        sample.converged = solution.converged;
        sample.residual_norm = solution.residual_norm;
        sample.config = solution.config;
    });
    return samples;
}

double converged_fraction(const std::vector<WorkspaceSample>& samples)
{
    if (samples.empty())
        return 1.0;
    std::size_t ok = 0;
    for (const auto& s : samples)
        ok += s.converged ? 1 : 0;
    return static_cast<double>(ok) / static_cast<double>(samples.size());
}

std::vector<Vec3> shape_polyline(const Configuration& config, const RobotParams& params)
{
    std::vector<Vec3> points{Vec3::Zero()};
    for (const auto& frame : chain_transforms(config, params))
        points.push_back(frame.translation);
    return points;
}

std::vector<Vec3> shape_polyline(const EquilibriumSolution& solution, const RobotParams& params)
{
    if (!solution.converged)
        throw std::invalid_argument("cannot draw a non-converged equilibrium");
    return shape_polyline(solution.config, params);
}

}  // namespace tdcr
