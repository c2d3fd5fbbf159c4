#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <glob.h>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmtsp/engine.hpp"
#include "mmtsp/instance.hpp"
#include "mmtsp/params.hpp"
#include "mmtsp/runlog.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitBadM = 3;
constexpr int kExitInvariant = 4;

struct ExitWith {
    int code;
    std::string message;
};

mmtsp::Instance load_instance(const std::string& path, bool tsplib_round) {
    namespace fs = std::filesystem;
    std::string ext = fs::path(path).extension().string();
    try {
        if (ext == ".json") return mmtsp::parse_json_instance(path);
        if (ext == ".tsp") return mmtsp::parse_tsplib(path, tsplib_round);
        // Unknown extension: sniff the first printable byte.
        std::ifstream probe(path);
        char c = 0;
        probe >> c;
        if (c == '{') return mmtsp::parse_json_instance(path);
        return mmtsp::parse_tsplib(path, tsplib_round);
    } catch (const std::exception& e) {
        throw ExitWith{kExitParse, e.what()};
    }
}

int resolve_m(int m_flag, double m_percent, const mmtsp::Instance& inst) {
    int m = m_flag;
    if (m_percent > 0.0) {
        m = static_cast<int>(std::lround(m_percent / 100.0 * inst.n_nodes()));
        std::cerr << "note: --m-percent " << m_percent << "% of " << inst.n_nodes()
                  << " nodes rounds to m = " << m
                  << "; published benchmarks may use a different mapping\n";
    }
    if (m < 1 || m > inst.n_cities())
        throw ExitWith{kExitBadM, "m = " + std::to_string(m) + " is outside [1, " +
                                      std::to_string(inst.n_cities()) + "]"};
    return m;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ExitWith{kExitParse, "cannot write " + path};
    out << text;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct SolveArgs {
    std::string instance_path;
    int m = 0;
    double m_percent = 0.0;
    double time_limit = 0.0;
    std::uint64_t seed = 0;
    std::string params_file;
    std::string out;
    bool trace = false;
    long max_iters = 0;
    double target = 0.0;
    bool tsplib_round = false;
};

mmtsp::RunResult run_once(const mmtsp::Instance& inst, int m, const SolveArgs& args,
                          std::uint64_t seed) {
    mmtsp::Params params = mmtsp::default_params(m, inst.n_cities());
    if (!args.params_file.empty()) {
        try {
            params = mmtsp::load_params(args.params_file, params);
        } catch (const std::invalid_argument& e) {
            throw ExitWith{kExitParse, e.what()};
        } catch (const std::exception& e) {
            throw ExitWith{kExitParse, e.what()};
        }
    }
    mmtsp::StopCondition stop;
    stop.time_limit_s = args.time_limit > 0.0 ? args.time_limit : inst.n_nodes();
    stop.max_iterations = args.max_iters;
    if (args.target > 0.0) stop.target = args.target;
    try {
        return mmtsp::run(inst, m, params, stop, seed);
    } catch (const std::logic_error& e) {
        throw ExitWith{kExitInvariant, e.what()};
    } catch (const std::runtime_error& e) {
        throw ExitWith{kExitInvariant, e.what()};
    }
}

int cmd_solve(const SolveArgs& args) {
    mmtsp::Instance inst = load_instance(args.instance_path, args.tsplib_round);
    int m = resolve_m(args.m, args.m_percent, inst);
    mmtsp::RunResult result = run_once(inst, m, args, args.seed);
    std::string text = mmtsp::run_record_text(result, args.trace);
    if (args.out.empty())
        std::cout << text;
    else
        write_text(args.out, text);
    return 0;
}

int cmd_generate(int n, int count, std::uint64_t seed, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir))
        throw ExitWith{kExitParse, "cannot create output directory " + out_dir};
    for (int i = 0; i < count; ++i) {
        std::uint64_t file_seed = seed + static_cast<std::uint64_t>(i);
        mmtsp::Instance inst = mmtsp::generate_random(n, file_seed);
        std::string path = out_dir + "/rand_n" + std::to_string(n) + "_s" +
                           std::to_string(file_seed) + ".json";
        write_text(path, mmtsp::to_json_instance(inst));
        std::cout << path << "\n";
    }
    return 0;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
    glob_t g;
    std::vector<std::string> paths;
    int rc = glob(pattern.c_str(), GLOB_ERR, nullptr, &g);
    if (rc == 0) {
        for (std::size_t i = 0; i < g.gl_pathc; ++i) paths.emplace_back(g.gl_pathv[i]);
    }
    globfree(&g);
    if (rc != 0 && rc != GLOB_NOMATCH)
        throw ExitWith{kExitParse, "glob failed for pattern " + pattern};
    return paths;
}

std::vector<int> parse_m_list(const std::string& text) {
    std::vector<int> ms;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            std::size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            ms.push_back(v);
        } catch (const std::exception&) {
            throw ExitWith{kExitParse, "bad m-list entry \"" + tok + "\""};
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (ms.empty()) throw ExitWith{kExitParse, "empty m-list"};
    return ms;
}

int cmd_bench(const std::string& pattern, const std::string& m_list, int runs,
              double time_limit, std::uint64_t seed, const std::string& out_dir,
              bool tsplib_round) {
    namespace fs = std::filesystem;
    std::vector<std::string> paths = expand_glob(pattern);
    if (paths.empty()) throw ExitWith{kExitParse, "no instances match " + pattern};
    std::vector<int> ms = parse_m_list(m_list);
    if (runs < 1) throw ExitWith{kExitParse, "runs must be at least 1"};

    std::error_code ec;
    fs::create_directories(out_dir + "/records", ec);
    if (!fs::is_directory(out_dir + "/records"))
        throw ExitWith{kExitParse, "cannot create output directory " + out_dir};

    std::string csv = "instance,m,runs,mean,best,num_best,mean_time_to_best_s\n";
    auto rows = nlohmann::ordered_json::array();

    for (const auto& path : paths) {
        mmtsp::Instance inst = load_instance(path, tsplib_round);
        for (int m : ms) {
            if (m < 1 || m > inst.n_cities())
                throw ExitWith{kExitBadM, "m = " + std::to_string(m) +
                                              " is invalid for instance " + inst.id()};
            SolveArgs args;
            args.time_limit = time_limit;
            std::vector<double> bests, times;
            for (int r = 0; r < runs; ++r) {
                mmtsp::RunResult result = run_once(inst, m, args, seed + r);
                bests.push_back(result.log.best_value);
                times.push_back(result.log.time_to_best_s);
                std::string rec_path = out_dir + "/records/" + inst.id() + "_m" +
                                       std::to_string(m) + "_run" + std::to_string(r) +
                                       ".json";
                write_text(rec_path, mmtsp::run_record_text(result, false));
            }
            double best = bests[0], mean = 0.0, mean_time = 0.0;
            for (double b : bests) {
                mean += b;
                best = std::min(best, b);
            }
            for (double t : times) mean_time += t;
            mean /= runs;
            mean_time /= runs;
            int num_best = 0;
            for (double b : bests)
                if (b - best <= 1e-9) ++num_best;

            csv += inst.id() + "," + std::to_string(m) + "," + std::to_string(runs) + "," +
                   fmt(mean) + "," + fmt(best) + "," + std::to_string(num_best) + "," +
                   fmt(mean_time) + "\n";
            rows.push_back({{"instance", inst.id()},
                            {"m", m},
                            {"runs", runs},
                            {"mean", mean},
                            {"best", best},
                            {"num_best", num_best},
                            {"mean_time_to_best_s", mean_time}});
        }
    }
    write_text(out_dir + "/summary.csv", csv);
    write_text(out_dir + "/summary.json", nlohmann::ordered_json(rows).dump(2) + "\n");
    std::cout << csv;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"min-max multiple traveling salesman solver"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate random unit-disk instances");
    int gen_n = 50, gen_count = 1;
    std::uint64_t gen_seed = 0;
    std::string gen_out = ".";
    gen->add_option("--n", gen_n, "cities per instance")->required();
    gen->add_option("--count", gen_count, "number of instances");
    gen->add_option("--seed", gen_seed, "base seed; file i uses seed+i");
    gen->add_option("--out", gen_out, "output directory")->required();

    // solve
    auto* solve = app.add_subcommand("solve", "solve one instance");
    SolveArgs sa;
    solve->add_option("--instance", sa.instance_path, "instance file (.tsp or .json)")
        ->required();
    auto* m_opt = solve->add_option("--m", sa.m, "number of salesmen");
    solve->add_option("--m-percent", sa.m_percent, "m as a percentage of the node count")
        ->excludes(m_opt);
    solve->add_option("--time-limit", sa.time_limit,
                      "seconds (default: one per instance node)");
    solve->add_option("--seed", sa.seed, "rng seed");
    solve->add_option("--params-file", sa.params_file, "JSON parameter overrides");
    solve->add_option("--out", sa.out, "run record path (default: stdout)");
    solve->add_flag("--trace", sa.trace, "include the per-iteration trace");
    solve->add_option("--max-iters", sa.max_iters, "optional iteration cap");
    solve->add_option("--target", sa.target, "stop once the incumbent reaches this value");
    solve->add_flag("--tsplib-round", sa.tsplib_round,
                    "round distances to integers (TSPLIB convention)");

    // bench
    auto* bench = app.add_subcommand("bench", "batch benchmark over a glob of instances");
    std::string bench_glob, bench_mlist, bench_out = "bench_out";
    int bench_runs = 1;
    double bench_limit = 0.0;
    std::uint64_t bench_seed = 0;
    bool bench_round = false;
    bench->add_option("--instances", bench_glob, "instance glob pattern")->required();
    bench->add_option("--m-list", bench_mlist, "comma-separated m values")->required();
    bench->add_option("--runs", bench_runs, "runs per (instance, m) cell");
    bench->add_option("--time-limit", bench_limit,
                      "seconds per run (default: one per instance node)");
    bench->add_option("--seed", bench_seed, "base seed; run r uses seed+r");
    bench->add_option("--out", bench_out, "output directory")->required();
    bench->add_flag("--tsplib-round", bench_round, "round distances to integers");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e); // --help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (gen->parsed()) return cmd_generate(gen_n, gen_count, gen_seed, gen_out);
        if (solve->parsed()) return cmd_solve(sa);
        if (bench->parsed())
            return cmd_bench(bench_glob, bench_mlist, bench_runs, bench_limit, bench_seed,
                             bench_out, bench_round);
    } catch (const ExitWith& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    }
    return 0;
}
