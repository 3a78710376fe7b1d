#pragma once

#include "tdcr/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>

namespace tdcr::cli {

// Process exit codes; nothing else is ever returned.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNotConverged = 2;

struct RunOptions
{
    std::filesystem::path out_dir = ".";
    int jobs = 1;
    bool emit_shapes = false;  // `sample`: also write shapes.csv / shapes.svg
};

int run_solve(const Scenario& scenario, const RunOptions& options);
int run_sample(const Scenario& scenario, const RunOptions& options);
int run_optimize(const Scenario& scenario, const RunOptions& options);

// Full command line: tdcr-fsw solve|sample|optimize --config <path> [--out <dir>]
// [--seed <u64>] [--jobs <n>] [--dump-config] [--shapes]
int run(int argc, const char* const* argv);

}  // namespace tdcr::cli
