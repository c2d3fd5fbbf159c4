#include "mmtsp/runlog.hpp"

namespace mmtsp {

namespace {
const char* status_name(IterSolveStatus s) {
    switch (s) {
    case IterSolveStatus::Optimal: return "optimal";
    case IterSolveStatus::TimedOut: return "timed_out";
    case IterSolveStatus::NoSelection: return "none";
    }
    return "none";
}
} // namespace

nlohmann::ordered_json run_record(const RunResult& result, bool include_trace) {
    const RunLog& log = result.log;
    nlohmann::ordered_json j;
    j["instance_id"] = log.instance_id;
    j["n_cities"] = log.n_cities;
    j["m"] = log.m;
    j["seed"] = log.seed;
    j["params"] = {
        {"n_solutions", log.params.n_solutions},
        {"d_rate_construct", log.params.d_rate_construct},
        {"d_rate_improve", log.params.d_rate_improve},
        {"l_rate", log.params.l_rate},
        {"age_max", log.params.age_max},
        {"epsilon", log.params.epsilon},
    };
    j["time_limit_s"] = log.time_limit_s;
    j["iterations"] = log.iterations;
    j["initial_z"] = log.initial_z;
    j["best_value"] = log.best_value;
    j["time_to_best_s"] = log.time_to_best_s;
    auto routes = nlohmann::ordered_json::array();
    for (const auto& r : result.best.routes) routes.push_back(r.seq);
    j["routes"] = std::move(routes);
    if (include_trace) {
        auto trace = nlohmann::ordered_json::array();
        for (const auto& rec : log.trace) {
            trace.push_back({
                {"iteration", rec.iteration},
                {"pool_size", rec.pool_size},
                {"solve_status", status_name(rec.solve_status)},
                {"solve_objective", rec.solve_objective},
                {"improved_z", rec.improved_z},
                {"incumbent_z", rec.incumbent_z},
                {"proxy", rec.proxy},
                {"reset", rec.reset},
                {"elapsed_s", rec.elapsed_s},
            });
        }
        j["trace"] = std::move(trace);
    }
    return j;
}

std::string run_record_text(const RunResult& result, bool include_trace) {
    return run_record(result, include_trace).dump(2) + "\n";
}

} // namespace mmtsp
