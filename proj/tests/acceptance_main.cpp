// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Oracles mirror the unit suite's frozen reference implementations
// (full recomputation, exhaustive enumeration) rather than the library's
// incremental formulas.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmtsp/construct.hpp"
#include "mmtsp/engine.hpp"
#include "mmtsp/improve.hpp"
#include "mmtsp/instance.hpp"
#include "mmtsp/learn.hpp"
#include "mmtsp/params.hpp"
#include "mmtsp/qmatrix.hpp"
#include "mmtsp/random.hpp"
#include "mmtsp/runlog.hpp"
#include "mmtsp/solution.hpp"
#include "mmtsp/subsolver.hpp"

using namespace mmtsp;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", idx, name,
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

void info(const std::string& line) {
    std::printf("       %s\n", line.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

// ---------------------------------------------------------------------------
// Shared oracle helpers (full recomputation, exhaustive scans).
// ---------------------------------------------------------------------------

bool has_improving_two_opt(const std::vector<int>& seq, const Instance& inst) {
    const double base = tour_length(seq, inst);
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j) {
            std::vector<int> cand = seq;
            std::reverse(cand.begin() + i, cand.begin() + j + 1);
            if (tour_length(cand, inst) < base - kImproveTol) return true;
        }
    return false;
}

bool has_improving_or_opt(const std::vector<int>& seq, const Instance& inst) {
    const double base = tour_length(seq, inst);
    const std::size_t n = seq.size();
    for (std::size_t len = 1; len <= 2 && len <= n; ++len)
        for (std::size_t i = 0; i + len <= n; ++i) {
            std::vector<int> reduced;
            for (std::size_t k = 0; k < n; ++k)
                if (k < i || k >= i + len) reduced.push_back(seq[k]);
            for (int rev = 0; rev < 2; ++rev) {
                std::vector<int> seg(seq.begin() + i, seq.begin() + i + len);
                if (rev) std::reverse(seg.begin(), seg.end());
                for (std::size_t p = 0; p <= reduced.size(); ++p) {
                    std::vector<int> cand(reduced.begin(), reduced.begin() + p);
                    cand.insert(cand.end(), seg.begin(), seg.end());
                    cand.insert(cand.end(), reduced.begin() + p, reduced.end());
                    if (tour_length(cand, inst) < base - kImproveTol) return true;
                }
            }
        }
    return false;
}

bool admissible(double gain, double new_max, double z) {
    return (gain > kImproveTol && new_max <= z) || new_max < z - kImproveTol;
}

bool has_admissible_shift(const Solution& sol, const Instance& inst) {
    const std::size_t m = sol.routes.size();
    std::vector<double> len(m);
    double z = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        len[r] = tour_length(sol.routes[r].seq, inst);
        z = std::max(z, len[r]);
    }
    for (std::size_t src = 0; src < m; ++src)
        for (std::size_t i = 0; i < sol.routes[src].seq.size(); ++i) {
            std::vector<int> reduced = sol.routes[src].seq;
            int u = reduced[i];
            reduced.erase(reduced.begin() + std::ptrdiff_t(i));
            double ls = tour_length(reduced, inst);
            for (std::size_t tgt = 0; tgt < m; ++tgt) {
                if (tgt == src) continue;
                for (std::size_t p = 0; p <= sol.routes[tgt].seq.size(); ++p) {
                    std::vector<int> grown = sol.routes[tgt].seq;
                    grown.insert(grown.begin() + std::ptrdiff_t(p), u);
                    double lt = tour_length(grown, inst);
                    double gain = (len[src] + len[tgt]) - (ls + lt);
                    double new_max = std::max(ls, lt);
                    for (std::size_t r = 0; r < m; ++r)
                        if (r != src && r != tgt) new_max = std::max(new_max, len[r]);
                    if (admissible(gain, new_max, z)) return true;
                }
            }
        }
    return false;
}

bool has_admissible_swap(const Solution& sol, const Instance& inst) {
    const std::size_t m = sol.routes.size();
    std::vector<double> len(m);
    double z = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        len[r] = tour_length(sol.routes[r].seq, inst);
        z = std::max(z, len[r]);
    }
    for (std::size_t ra = 0; ra < m; ++ra)
        for (std::size_t rb = ra + 1; rb < m; ++rb)
            for (std::size_t i = 0; i < sol.routes[ra].seq.size(); ++i)
                for (std::size_t j = 0; j < sol.routes[rb].seq.size(); ++j) {
                    std::vector<int> sa = sol.routes[ra].seq;
                    std::vector<int> sb = sol.routes[rb].seq;
                    std::swap(sa[i], sb[j]);
                    double la = tour_length(sa, inst);
                    double lb = tour_length(sb, inst);
                    double gain = (len[ra] + len[rb]) - (la + lb);
                    double new_max = std::max(la, lb);
                    for (std::size_t r = 0; r < m; ++r)
                        if (r != ra && r != rb) new_max = std::max(new_max, len[r]);
                    if (admissible(gain, new_max, z)) return true;
                }
    return false;
}

Solution random_partition(const Instance& inst, int m, Rng& rng) {
    std::vector<int> cities;
    for (int c = 1; c <= inst.n_cities(); ++c) cities.push_back(c);
    rng.shuffle(cities);
    std::vector<std::vector<int>> seqs(static_cast<std::size_t>(m));
    for (std::size_t k = 0; k < cities.size(); ++k)
        seqs[k < std::size_t(m) ? k : rng.next_index(std::size_t(m))].push_back(cities[k]);
    Solution sol;
    for (const auto& s : seqs) sol.routes.push_back(make_route(s, inst));
    sol.recompute(inst);
    return sol;
}

// ---------------------------------------------------------------------------
// Criterion 1: benchmark reproduction on the bundled TSPLIB instances.
// ---------------------------------------------------------------------------

bool criterion_tsplib(std::string& detail) {
    struct Cell {
        const char* file;
        int m;
        double published;
    };
    const Cell cells[] = {
        {"eil51.tsp", 2, 222.73337},    {"eil51.tsp", 3, 159.57151},
        {"eil51.tsp", 5, 118.13375},    {"eil51.tsp", 7, 112.07141},
        {"berlin52.tsp", 5, 2440.92196},
    };
    bool ok = true;
    double worst_gap = -std::numeric_limits<double>::infinity();
    for (const Cell& cell : cells) {
        Instance inst = parse_tsplib(std::string(TEST_DATA_DIR) + "/" + cell.file);
        const double limit = double(inst.n_nodes()); // default budget: n seconds
        const double target = cell.published * 1.01;
        double best = std::numeric_limits<double>::infinity();
        int runs_used = 0;
        for (int r = 0; r < 10; ++r) {
            Params params = default_params(cell.m, inst.n_cities());
            StopCondition stop{limit, 0, target};
            RunResult res = run(inst, cell.m, params, stop, 1000 + std::uint64_t(r));
            best = std::min(best, res.log.best_value);
            ++runs_used;
            // The criterion is best-of-10; once a run is inside the band the
            // remaining runs cannot change the verdict.
            if (best <= target + 1e-9) break;
        }
        double gap = (best - cell.published) / cell.published * 100.0;
        worst_gap = std::max(worst_gap, gap);
        bool cell_ok = best <= target + 1e-9;
        ok = ok && cell_ok;
        info(std::string(cell.file) + " m=" + std::to_string(cell.m) +
             fmt(": best %.5f vs %.5f", best, cell.published) +
             fmt(" (gap %.3f%%, ", gap, 0, 0) + std::to_string(runs_used) +
             (runs_used == 1 ? " run)" : " runs)"));
    }
    detail = fmt("worst gap %.3f%% (limit 1.0%%)", worst_gap);
    return ok;
}

// ---------------------------------------------------------------------------
// Criterion 2: exact route-selection subsolver vs. brute-force enumeration.
// ---------------------------------------------------------------------------

bool criterion_subsolver(std::string& detail) {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> ulen(1.0, 100.0);
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    int optimal = 0, infeasible = 0;
    for (int t = 0; t < 200; ++t) {
        const int n_cities = 3 + int(gen() % 8);  // 3..10
        const int n_routes = 1 + int(gen() % 15); // 1..15
        RestrictedProblem prob;
        prob.n_cities = n_cities;
        prob.upper_bound =
            (t % 4 == 0) ? 60.0 : std::numeric_limits<double>::infinity();
        std::vector<int> cities(static_cast<std::size_t>(n_cities));
        for (int c = 1; c <= n_cities; ++c) cities[std::size_t(c - 1)] = c;
        for (int r = 0; r < n_routes; ++r) {
            std::shuffle(cities.begin(), cities.end(), gen);
            std::size_t take = 1 + gen() % cities.size();
            Route route;
            route.seq.assign(cities.begin(), cities.begin() + std::ptrdiff_t(take));
            route.length = ulen(gen);
            prob.routes.push_back(std::move(route));
        }
        prob.m = 1 + int(gen() % std::size_t(n_routes + (t % 7 == 0 ? 1 : 0)));
        SolveResult got = solve_restricted(prob, 10.0);
        SolveResult ref = brute_force_reference(prob);
        if (got.status != ref.status) ok = false;
        if (got.status == SolveStatus::Optimal) {
            ++optimal;
            if (got.objective != ref.objective) ok = false; // must match bitwise
        } else if (got.status == SolveStatus::Infeasible) {
            ++infeasible;
        } else {
            ok = false; // these sizes must never time out
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && secs < 5.0 && optimal >= 100 && infeasible >= 10;
    detail = std::to_string(optimal) + " optimal / " + std::to_string(infeasible) +
             " infeasible, " + fmt("%.2f s (budget 5 s)", secs);
    return ok;
}

// ---------------------------------------------------------------------------
// Criteria 3 and 4 share the same batch of full runs.
// ---------------------------------------------------------------------------

std::vector<RunLog> g_batch_logs;

bool criterion_feasibility(std::string& detail) {
    bool ok = true;
    double worst = 0.0;
    for (int r = 0; r < 50; ++r) {
        Instance inst = generate_random(50, 7000 + std::uint64_t(r));
        const int m = 2 + r % 6;
        Params params = default_params(m, inst.n_cities());
        StopCondition stop{1.2, 0, std::nullopt};
        RunResult res = run(inst, m, params, stop, 31 + std::uint64_t(r));
        g_batch_logs.push_back(res.log);

        std::vector<int> seen(std::size_t(inst.n_cities()) + 1, 0);
        double z = 0.0;
        for (const auto& route : res.best.routes) {
            for (int c : route.seq) {
                if (c < 1 || c > inst.n_cities()) ok = false;
                else ++seen[std::size_t(c)];
            }
            z = std::max(z, tour_length(route.seq, inst));
        }
        for (int c = 1; c <= inst.n_cities(); ++c)
            if (seen[std::size_t(c)] != 1) ok = false;
        worst = std::max(worst, std::fabs(z - res.log.best_value));
    }
    ok = ok && worst <= 1e-9;
    detail = fmt("50 runs, max |z - recomputed| = %.2e (limit 1e-9)", worst);
    return ok;
}

bool criterion_monotonicity(std::string& detail) {
    bool ok = true;
    // Incumbent sequences from the feasibility batch.
    std::size_t iters = 0;
    for (const RunLog& log : g_batch_logs) {
        for (std::size_t i = 0; i + 1 < log.trace.size(); ++i)
            if (log.trace[i + 1].incumbent_z > log.trace[i].incumbent_z) ok = false;
        iters += log.trace.size();
    }
    // Accepted-move traces: starting points are duplicate-free, so the trace
    // is comparable to the pre-improve state from the very first move.
    Rng rng(515);
    std::size_t moves = 0;
    for (int t = 0; t < 60; ++t) {
        Instance inst = generate_random(6 + t % 7, 8800 + std::uint64_t(t));
        const int m = 2 + t % 3;
        Solution sol = random_partition(inst, m, rng);
        MoveTrace trace;
        double prev_z = sol.z, prev_total = sol.total;
        double d_rate = (t % 3) * 0.5;
        improve(sol, inst, d_rate, rng, &trace);
        for (const auto& [z, total] : trace) {
            if (!(z <= prev_z + 1e-12)) ok = false;
            if (!(prev_z - z > kImproveTol || prev_total - total > kImproveTol))
                ok = false;
            prev_z = z;
            prev_total = total;
        }
        moves += trace.size();
    }
    ok = ok && iters > 0 && moves > 50;
    detail = std::to_string(iters) + " engine iterations, " + std::to_string(moves) +
             " accepted moves checked";
    return ok;
}

// ---------------------------------------------------------------------------
// Criterion 5: learning closed forms and bounds.
// ---------------------------------------------------------------------------

bool criterion_learn(std::string& detail) {
    bool ok = true;
    double worst = 0.0;
    const double rates[] = {0.20, 0.26, 0.31, 0.45};
    const double starts[] = {0.5, 0.25, 0.8};
    PairCounts cand(3), with_pair(3), without_pair(3);
    cand.add_route({1, 2});
    with_pair.add_route({1, 2});
    for (double l : rates)
        for (double q0 : starts) {
            QMatrix reinforced(3), discouraged(3);
            reinforced.set(1, 2, q0);
            discouraged.set(1, 2, q0);
            for (int k = 1; k <= 60; ++k) {
                update(reinforced, cand, with_pair, l);
                update(discouraged, cand, without_pair, l);
                double down = std::pow(1.0 - l, k) * q0;
                double up = 1.0 - std::pow(1.0 - l, k) * (1.0 - q0);
                worst = std::max(worst, std::fabs(reinforced.get(1, 2) - down));
                worst = std::max(worst, std::fabs(discouraged.get(1, 2) - up));
            }
        }
    ok = ok && worst <= 1e-12;

    // Bounds under 1e5 random update sequences.
    QMatrix q(9);
    std::mt19937_64 gen(5150);
    bool bounded = true;
    for (int t = 0; t < 100000; ++t) {
        auto random_counts = [&]() {
            PairCounts pc(9);
            int n_routes = 1 + int(gen() % 3);
            for (int r = 0; r < n_routes; ++r) {
                std::vector<int> seq;
                for (int c = 1; c <= 9; ++c)
                    if (gen() % 3 == 0) seq.push_back(c);
                pc.add_route(seq);
            }
            return pc;
        };
        PairCounts c2 = random_counts(), b2 = random_counts();
        update(q, c2, b2, rates[gen() % 4]);
        for (int i = 1; i <= 9 && bounded; ++i)
            for (int j = i + 1; j <= 9; ++j) {
                double v = q.get(i, j);
                if (!(v >= 0.0 && v <= 1.0)) {
                    bounded = false;
                    break;
                }
            }
        if (!bounded) break;
    }
    ok = ok && bounded;
    detail = fmt("max closed-form error %.2e (limit 1e-12); ", worst) +
             std::string(bounded ? "bounds held over 1e5 updates"
                                 : "BOUNDS VIOLATED");
    return ok;
}

// ---------------------------------------------------------------------------
// Criterion 6: desk-scale local-search optimality.
// ---------------------------------------------------------------------------

bool criterion_local_search(std::string& detail) {
    bool ok = true;
    Rng rng(616);
    for (int t = 0; t < 100; ++t) {
        Instance inst = generate_random(8, 9100 + std::uint64_t(t));
        std::vector<int> perm;
        for (int c = 1; c <= 8; ++c) perm.push_back(c);
        rng.shuffle(perm);
        Route route = make_route(perm, inst);
        // Alternate the two neighborhoods to a joint fixed point; each
        // applied move strictly shortens the tour, so this terminates.
        while (true) {
            const std::vector<int> before = route.seq;
            two_opt(route, inst, rng);
            or_opt(route, inst, rng);
            if (route.seq == before) break;
        }
        if (has_improving_two_opt(route.seq, inst)) ok = false;
        if (has_improving_or_opt(route.seq, inst)) ok = false;
    }
    bool intra_ok = ok;

    for (int t = 0; t < 50; ++t) {
        Instance inst = generate_random(8, 9400 + std::uint64_t(t));
        Solution sol = random_partition(inst, 2, rng);
        improve(sol, inst, (t % 3) * 0.5, rng);
        if (has_admissible_shift(sol, inst)) ok = false;
        if (has_admissible_swap(sol, inst)) ok = false;
    }
    detail = std::string("100 single-route cases ") +
             (intra_ok ? "clean" : "DIRTY") + ", 50 two-route cases " +
             (ok == intra_ok ? "clean" : "DIRTY");
    return ok;
}

// ---------------------------------------------------------------------------
// Criterion 7: one-city-per-salesman analytic optimum.
// ---------------------------------------------------------------------------

bool criterion_star(std::string& detail) {
    bool ok = true;
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        Instance inst = generate_random(2 + t % 8, 9900 + std::uint64_t(t));
        const int m = inst.n_cities();
        Params params = default_params(m, inst.n_cities());
        StopCondition stop{5.0, 1, std::nullopt};
        RunResult res = run(inst, m, params, stop, 77 + std::uint64_t(t));
        double expect = 0.0;
        for (int c = 1; c <= inst.n_cities(); ++c)
            expect = std::max(expect, 2.0 * inst.dist(0, c));
        worst = std::max(worst, std::fabs(res.log.best_value - expect));
    }
    ok = worst <= 1e-9;
    detail = fmt("max |z - 2*max depot distance| = %.2e over 20 instances", worst);
    return ok;
}

// ---------------------------------------------------------------------------
// Criterion 8: run-for-run determinism modulo timing.
// ---------------------------------------------------------------------------

bool criterion_determinism(std::string& detail) {
    auto strip = [](nlohmann::ordered_json j) {
        j.erase("time_to_best_s");
        for (auto& rec : j["trace"]) rec.erase("elapsed_s");
        return j.dump(2);
    };
    bool ok = true;
    for (int t = 0; t < 3; ++t) {
        Instance inst = generate_random(15, 4400 + std::uint64_t(t));
        const int m = 2 + t;
        Params params = default_params(m, inst.n_cities());
        StopCondition stop{600.0, 4, std::nullopt};
        RunResult a = run(inst, m, params, stop, 123 + std::uint64_t(t));
        RunResult b = run(inst, m, params, stop, 123 + std::uint64_t(t));
        if (strip(run_record(a, true)) != strip(run_record(b, true))) ok = false;
    }
    detail = "3 seed pairs, records byte-identical with timing stripped";
    return ok;
}

} // namespace

int main() {
    struct Entry {
        int idx;
        const char* name;
        bool (*fn)(std::string&);
    };
    const Entry entries[] = {
        {1, "benchmark reproduction within 1.0%", &criterion_tsplib},
        {2, "subsolver matches brute force exactly", &criterion_subsolver},
        {3, "incumbents are feasible and consistent", &criterion_feasibility},
        {4, "incumbents and accepted moves are monotone", &criterion_monotonicity},
        {5, "learning closed forms and bounds", &criterion_learn},
        {6, "local searches reach oracle-clean optima", &criterion_local_search},
        {7, "one-salesman-per-city analytic optimum", &criterion_star},
        {8, "byte-identical records for equal seeds", &criterion_determinism},
    };
    for (const Entry& e : entries) {
        std::string detail;
        bool ok = false;
        try {
            ok = e.fn(detail);
        } catch (const std::exception& ex) {
            detail = std::string("exception: ") + ex.what();
        }
        report(e.idx, e.name, ok, detail);
    }
    if (g_failures == 0) {
        std::printf("all 8 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
}
