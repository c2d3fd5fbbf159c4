#include "mmtsp/engine.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "mmtsp/construct.hpp"
#include "mmtsp/improve.hpp"
#include "mmtsp/learn.hpp"
#include "mmtsp/pool.hpp"
#include "mmtsp/qmatrix.hpp"
#include "mmtsp/subsolver.hpp"

namespace mmtsp {

namespace {
constexpr double kSolveCapS = 2.0;
constexpr double kSolveCapShare = 0.10;
}

RunResult run(const Instance& inst, int m, const Params& params, const StopCondition& stop,
              std::uint64_t seed) {
    if (m < 1 || m > inst.n_cities())
        throw std::invalid_argument("run: m must be in [1, n_cities]");
    if (!(stop.time_limit_s > 0.0))
        throw std::invalid_argument("run: time limit must be positive");
    params.validate();

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    auto in_budget = [&] { return elapsed() < stop.time_limit_s; };

    Rng rng(seed);
    QMatrix q(inst.n_cities());
    Pool pool;
    StagnationMonitor monitor;

    RunLog log;
    log.instance_id = inst.id();
    log.n_cities = inst.n_cities();
    log.m = m;
    log.seed = seed;
    log.params = params;
    log.time_limit_s = stop.time_limit_s;

    Solution incumbent;
    bool have_incumbent = false;
    auto target_met = [&] {
        return stop.target && have_incumbent && incumbent.z <= *stop.target;
    };

    std::vector<Solution> constructed;
    constructed.reserve(params.n_solutions);

    while (in_budget() && !target_met() &&
           (stop.max_iterations == 0 || log.iterations < stop.max_iterations)) {
        ++log.iterations;
        IterationRecord rec;
        rec.iteration = log.iterations;

        // Construct.
        constructed.clear();
        for (int s = 0; s < params.n_solutions; ++s)
            constructed.push_back(construct_solution(inst, q, m, params, rng));
        if (!have_incumbent) {
            std::size_t best = 0;
            for (std::size_t s = 1; s < constructed.size(); ++s)
                if (constructed[s].z < constructed[best].z) best = s;
            incumbent = constructed[best];
            have_incumbent = true;
            log.initial_z = incumbent.z;
            log.best_value = incumbent.z;
            log.time_to_best_s = elapsed();
        }

        // Merge.
        if (in_budget()) {
            std::vector<Route> fresh;
            fresh.reserve(static_cast<std::size_t>(params.n_solutions) * m);
            for (const auto& s : constructed)
                for (const auto& r : s.routes) fresh.push_back(r);
            pool.merge(fresh, incumbent.z);
        }
        rec.pool_size = pool.size();

        // Solve.
        SolveResult solved;
        solved.status = SolveStatus::Infeasible;
        if (in_budget() && pool.size() > 0) {
            RestrictedProblem problem;
            problem.n_cities = inst.n_cities();
            problem.m = m;
            problem.upper_bound = incumbent.z;
            problem.routes = pool.routes();
            double cap = std::min(kSolveCapS, kSolveCapShare * (stop.time_limit_s - elapsed()));
            solved = solve_restricted(problem, cap);
        }

        switch (solved.status) {
        case SolveStatus::Optimal: rec.solve_status = IterSolveStatus::Optimal; break;
        case SolveStatus::TimedOut: rec.solve_status = IterSolveStatus::TimedOut; break;
        case SolveStatus::Infeasible: rec.solve_status = IterSolveStatus::NoSelection; break;
        }

        // Improve; a selection-less solve keeps the incumbent and skips it.
        Solution iter_best = incumbent;
        if (solved.has_selection() && in_budget()) {
            rec.solve_objective = solved.objective;
            Solution picked;
            picked.routes.reserve(solved.selected.size());
            for (int idx : solved.selected) {
                Route r = pool.routes()[idx];
                r.age = 0;
                picked.routes.push_back(std::move(r));
            }
            picked.refresh_objective();
            improve(picked, inst, params.d_rate_improve, rng);
            rec.improved_z = picked.z;
            evaluate(picked, inst); // feasibility is asserted at every incumbent gate
            if (picked.z < incumbent.z - kImproveTol) {
                incumbent = picked;
                log.best_value = incumbent.z;
                log.time_to_best_s = elapsed();
            }
            iter_best = picked;
        }
        rec.incumbent_z = incumbent.z;

        // Learn.
        bool reset_fired = false;
        if (in_budget() && inst.n_cities() >= 2) {
            PairCounts cand = cooccurrence(pool.routes(), inst.n_cities());
            PairCounts best = cooccurrence(iter_best.routes, inst.n_cities());
            update(q, cand, best, params.l_rate);
            rec.proxy = convergence_proxy(q);
            reset_fired = maybe_reset(monitor, elapsed(), rec.proxy, q, pool);
            rec.reset = reset_fired;
        }

        // Adapt; skipped on a reset so the pool stays empty.
        if (in_budget() && !reset_fired) pool.adapt(iter_best.routes, params.age_max);

        rec.elapsed_s = elapsed();
        log.trace.push_back(rec);
    }

    if (!have_incumbent) {
        // The time budget expired before the first construction round; build
        // one solution anyway so callers always get a feasible answer.
        constructed.clear();
        incumbent = construct_solution(inst, q, m, params, rng);
        log.initial_z = incumbent.z;
        log.best_value = incumbent.z;
        log.time_to_best_s = elapsed();
    }
    // The moment of the last improvement is reported, but never past the
    // configured budget (construction rounds may overshoot it slightly).
    log.time_to_best_s = std::min(log.time_to_best_s, stop.time_limit_s);
    evaluate(incumbent, inst);
    return {std::move(incumbent), std::move(log)};
}

} // namespace mmtsp
