#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmtsp/instance.hpp"
#include "mmtsp/params.hpp"
#include "mmtsp/solution.hpp"

namespace mmtsp {

struct StopCondition {
    double time_limit_s = 0.0; // wall-clock budget, must be positive
    long max_iterations = 0;   // 0 = unbounded
    std::optional<double> target; // stop once the incumbent reaches this value
};

enum class IterSolveStatus { Optimal = 0, TimedOut = 1, NoSelection = 2 };

struct IterationRecord {
    long iteration = 0;
    std::size_t pool_size = 0; // after merge
    IterSolveStatus solve_status = IterSolveStatus::NoSelection;
    double solve_objective = 0.0; // max selected route length, 0 if none
    double improved_z = 0.0;      // z after Improve, 0 if Improve was skipped
    double incumbent_z = 0.0;
    double proxy = 0.0;
    bool reset = false;
    double elapsed_s = 0.0; // timing only; excluded from determinism checks
};

struct RunLog {
    std::string instance_id;
    int n_cities = 0;
    int m = 0;
    std::uint64_t seed = 0;
    Params params;
    double time_limit_s = 0.0;
    long iterations = 0;
    double initial_z = 0.0; // best of the first construction round
    double best_value = 0.0;
    double time_to_best_s = 0.0;
    std::vector<IterationRecord> trace;
};

struct RunResult {
    Solution best;
    RunLog log;
};

/// Full solver loop: per iteration, construct n_solutions solutions from the
/// current q-values, merge their routes into the pool, solve the restricted
/// selection problem under the incumbent bound, improve any selection,
/// update the incumbent (strict improvement only), learn, and age the pool.
/// Infeasible selections keep the incumbent and skip Improve. Deterministic
/// for a fixed seed in single-threaded use.
RunResult run(const Instance& inst, int m, const Params& params, const StopCondition& stop,
              std::uint64_t seed);

} // namespace mmtsp
