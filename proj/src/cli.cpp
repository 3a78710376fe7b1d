#include "tdcr/cli.hpp"

#include "tdcr/report.hpp"
#include "tdcr/workspace.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tdcr::cli {

namespace {

using Artifacts = std::vector<std::pair<std::string, std::string>>;

void setup_logging()
{
    static bool done = false;
    if (done)
        return;
    done = true;
    auto logger = spdlog::stderr_color_mt("tdcr");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::info);
    if (const char* env = std::getenv("TDCR_LOG"))
    {
        static const std::map<std::string, spdlog::level::level_enum> levels = {
            {"error", spdlog::level::err}, {"warn", spdlog::level::warn},
            {"info", spdlog::level::info}, {"debug", spdlog::level::debug}};
        if (auto it = levels.find(env); it != levels.end())
            spdlog::set_level(it->second);
        else
            spdlog::warn("ignoring TDCR_LOG='{}' (expected error|warn|info|debug)", env);
    }
}

// Everything is rendered before the first file is opened, so a failure leaves no partial output.
void write_artifacts(const std::filesystem::path& dir, const Artifacts& files)
{
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : files)
    {
        const auto path = dir / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out)
            throw std::runtime_error("cannot write " + path.string());
        spdlog::info("wrote {}", path.string());
    }
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int run_solve(const Scenario& scenario, const RunOptions& options)
{
    if (!scenario.forces)
    {
        spdlog::error("scenario has no 'forces' list; `solve` needs one tension per tendon");
        return kExitConfig;
    }
    const auto start = std::chrono::steady_clock::now();
    const auto solution = solve_equilibrium(*scenario.forces, scenario.load, scenario.robot, scenario.solver);
    spdlog::info("solve: {} after {} Newton / {} friction iterations, |r| = {:.3e} N m, {:.3f} s",
                 to_string(solution.status), solution.newton_iterations, solution.friction_iterations,
                 solution.residual_norm, seconds_since(start));
    if (!solution.converged)
    {
        spdlog::error("equilibrium not found: {}", solution.message);
        return kExitNotConverged;
    }
    if (!solution.friction_monotone)
        spdlog::warn("friction loop tension changes were not monotone over the last passes");

    const Vec3& tip = solution.tip_pose.translation;
    spdlog::info("tip = ({:.6f}, {:.6f}, {:.6f}) m, |tip| = {:.6f} m", tip.x(), tip.y(), tip.z(), tip.norm());
    const auto shape = shape_polyline(solution, scenario.robot);
    write_artifacts(options.out_dir,
                    {{"solution.csv", report::solution_csv(solution, *scenario.forces, scenario.robot)},
                     {"shape.svg", report::shape_svg({{shape, "equilibrium"}}, "Equilibrium shape")}});
    return kExitOk;
}

int run_sample(const Scenario& scenario, const RunOptions& options)
{
    if (!scenario.sample_count)
    {
        spdlog::error("scenario has no 'sample_count'; `sample` needs one");
        return kExitConfig;
    }
    const auto start = std::chrono::steady_clock::now();
    const auto samples = sample_workspace(*scenario.sample_count, scenario.bounds, scenario.load, scenario.robot,
                                          scenario.solver, scenario.seed, options.jobs);
    spdlog::info("sample: {} samples, converged fraction {:.3f}, {:.2f} s", samples.size(),
                 converged_fraction(samples), seconds_since(start));

    Artifacts files{{"workspace.csv", report::workspace_csv(samples)},
                    {"workspace.svg", report::workspace_svg(samples, scenario.robot.total_length())}};
    if (options.emit_shapes)
    {
        std::vector<report::Polyline> shapes;
        for (const auto& s : samples)
            if (s.converged)
                shapes.push_back({shape_polyline(s.config, scenario.robot), std::to_string(s.sample_index)});
        files.emplace_back("shapes.csv", report::shapes_csv(samples, scenario.robot));
        files.emplace_back("shapes.svg", report::shape_svg(shapes, "Equilibrium shapes of the sampled force sets"));
    }
    write_artifacts(options.out_dir, files);
    return kExitOk;
}

int run_optimize(const Scenario& scenario, const RunOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    const auto result =
        ga_optimize(scenario.load, scenario.bounds, scenario.ga, scenario.robot, scenario.solver, options.jobs);
    spdlog::info("optimize: {} generations, best |tip| = {:.6f} m, objective {:.9f} 1/m, {:.2f} s",
                 result.generations_run, result.best_tip_norm, result.best_objective, seconds_since(start));

    const auto shape = shape_polyline(result.best_solution, scenario.robot);
    write_artifacts(options.out_dir,
                    {{"ga_history.csv", report::history_csv(result)},
                     {"best.csv", report::best_csv(result)},
                     {"convergence.svg", report::convergence_svg(result, scenario.robot.total_length())},
                     {"best_shape.svg", report::shape_svg({{shape, "optimum"}}, "Maximum-reach equilibrium")}});
    if (!result.converged)
    {
        spdlog::warn("GA stopped at max_generations without meeting convergence_tol");
        return kExitNotConverged;
    }
    return kExitOk;
}

int run(int argc, const char* const* argv)
{
    setup_logging();

    CLI::App app{"Static equilibrium and feasible-workspace optimization of a tendon-driven continuum robot",
                 "tdcr-fsw"};
    app.require_subcommand(1);

    std::string config_path;
    RunOptions options;
    std::optional<std::uint64_t> seed;
    bool dump = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Scenario file (YAML)")->required();
        sub->add_option("--out", options.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--seed", seed, "Override the random seed (GA and sampler)");
        sub->add_option("--jobs", options.jobs, "Worker threads")->check(CLI::Range(1, 256))->capture_default_str();
        sub->add_flag("--dump-config", dump, "Print the fully resolved scenario and exit");
    };
    auto* solve = app.add_subcommand("solve", "Solve one static equilibrium");
    auto* sample = app.add_subcommand("sample", "Monte-Carlo sampling of the static workspace");
    auto* optimize = app.add_subcommand("optimize", "Maximize the tip distance over tendon tensions");
    for (auto* sub : {solve, sample, optimize})
        add_common(sub);
    sample->add_flag("--shapes", options.emit_shapes, "Also write the backbone shape of every sample");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp&)
    {
        std::cout << app.help();
        return kExitOk;
    }
    catch (const CLI::CallForAllHelp&)
    {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    }
    catch (const CLI::ParseError& e)
    {
        std::cerr << e.what() << "\n" << app.help();
        return kExitConfig;
    }

    try
    {
        Scenario scenario = load_scenario(config_path);
        if (seed)
        {
            scenario.seed = *seed;
            scenario.ga.rng_seed = *seed;
        }
        if (dump)
        {
            std::cout << dump_scenario(scenario);
            return kExitOk;
        }
        if (solve->parsed())
            return run_solve(scenario, options);
        if (sample->parsed())
            return run_sample(scenario, options);
        return run_optimize(scenario, options);
    }
    catch (const ScenarioError& e)
    {
        spdlog::error("{}", e.what());
        return kExitConfig;
    }
    catch (const std::exception& e)
    {
        spdlog::error("{}", e.what());
        return kExitConfig;
    }
}

}  // namespace tdcr::cli
