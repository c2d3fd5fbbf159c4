#include "mmtsp/construct.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mmtsp/improve.hpp"

namespace mmtsp {

Clustering seed_centers(const Instance& inst, const QMatrix& q, int m, Rng& rng) {
    const int n = inst.n_cities();
    if (m < 1 || m > n)
        throw std::invalid_argument("seed_centers: m must be in [1, n_cities]");

    std::vector<int> cand;
    std::vector<double> weight;
    cand.reserve(n);
    weight.reserve(n);
    for (int i = 1; i <= n; ++i) {
        cand.push_back(i);
        weight.push_back(inst.dist(0, i) * inst.dist(0, i));
    }

    Clustering cl;
    cl.centers.reserve(m);
    cl.members.reserve(m);
    cl.approx_len.reserve(m);
    for (int j = 0; j < m; ++j) {
        std::size_t pick = roulette_index(weight, rng);
        int c = cand[pick];
        cand.erase(cand.begin() + pick);
        weight.erase(weight.begin() + pick);
        cl.centers.push_back(c);
        cl.members.push_back({0, c});
        cl.approx_len.push_back(2.0 * inst.dist(0, c));
        for (std::size_t k = 0; k < cand.size(); ++k) {
            int i = cand[k];
            double w = inst.dist(i, c) * q.get(i, c);
            weight[k] = std::min(weight[k], w * w);
        }
    }
    return cl;
}

std::pair<int, int> two_closest_points(int u, const std::vector<int>& members,
                                       const Instance& inst) {
    if (members.size() < 2)
        throw std::invalid_argument("two_closest_points: cluster needs at least two members");
    int a = -1, b = -1;
    double da = 0.0, db = 0.0;
    for (int v : members) {
        if (v == u) throw std::invalid_argument("two_closest_points: u already in cluster");
        double d = inst.dist(u, v);
        if (a < 0 || d < da || (d == da && v < a)) {
            b = a;
            db = da;
            a = v;
            da = d;
        } else if (b < 0 || d < db || (d == db && v < b)) {
            b = v;
            db = d;
        }
    }
    return {a, b};
}

void assign_cities(Clustering& cl, const Instance& inst, const QMatrix& q,
                   double d_rate_construct, double epsilon, Rng& rng,
                   std::vector<AssignStep>* audit) {
    const int n = inst.n_cities();
    const int m = static_cast<int>(cl.members.size());
    if (m < 1) throw std::invalid_argument("assign_cities: empty clustering");

    std::vector<char> assigned(n + 1, 0);
    for (const auto& mem : cl.members)
        for (int v : mem) assigned[v] = 1;

    std::vector<int> pending;
    std::vector<double> pull;
    for (int u = 1; u <= n; ++u) {
        if (assigned[u]) continue;
        double delta = angdist(inst.theta(u), inst.theta(cl.centers[0]));
        for (int j = 1; j < m; ++j)
            delta = std::min(delta, angdist(inst.theta(u), inst.theta(cl.centers[j])));
        pending.push_back(u);
        pull.push_back(1.0 / (delta + epsilon));
    }

    std::vector<double> scores(m), detours(m), inv(m);
    while (!pending.empty()) {
        std::size_t pi = roulette_index(pull, rng);
        int u = pending[pi];
        pending[pi] = pending.back();
        pending.pop_back();
        pull[pi] = pull.back();
        pull.pop_back();

        double lmax = cl.approx_len[0];
        for (int j = 1; j < m; ++j) lmax = std::max(lmax, cl.approx_len[j]);

        for (int j = 0; j < m; ++j) {
            auto [a, b] = two_closest_points(u, cl.members[j], inst);
            double d = inst.dist(u, a) + inst.dist(u, b) - inst.dist(a, b);
            double qsum = 0.0;
            int qcount = 0;
            for (int v : cl.members[j]) {
                if (v == 0) continue;
                qsum += q.get(u, v);
                ++qcount;
            }
            double qmean = qsum / qcount;
            double r = lmax > 0.0 ? std::max(lmax, cl.approx_len[j] + d) / lmax : 1.0;
            detours[j] = d;
            scores[j] = (d + epsilon) * r * qmean;
        }

        int chosen;
        if (rng.next_double() < d_rate_construct) {
            chosen = static_cast<int>(argmin_reservoir(scores, rng));
        } else {
            // A zero score means zero learned affinity everywhere in that
            // cluster; its inverse weight is infinite, so zero-score
            // clusters are drawn uniformly among themselves.
            std::vector<int> zero;
            for (int j = 0; j < m; ++j)
                if (!(scores[j] > 0.0)) zero.push_back(j);
            if (!zero.empty()) {
                chosen = zero[rng.next_index(zero.size())];
            } else {
                for (int j = 0; j < m; ++j) inv[j] = 1.0 / scores[j];
                chosen = static_cast<int>(roulette_index(inv, rng));
            }
        }

        cl.members[chosen].push_back(u);
        cl.approx_len[chosen] += detours[chosen];
        if (audit) audit->push_back({u, scores, chosen});
    }
}

Route build_route(const std::vector<int>& cities, const Instance& inst) {
    if (cities.empty()) throw std::invalid_argument("build_route: empty city set");
    std::vector<int> remaining;
    remaining.reserve(cities.size());
    for (int c : cities) {
        if (c < 1 || c > inst.n_cities())
            throw std::invalid_argument("build_route: invalid city " + std::to_string(c));
        remaining.push_back(c);
    }
    std::sort(remaining.begin(), remaining.end());

    int seed = remaining[0];
    for (int c : remaining)
        if (inst.dist(0, c) > inst.dist(0, seed)) seed = c;
    std::vector<int> seq{seed};
    remaining.erase(std::find(remaining.begin(), remaining.end(), seed));

    while (!remaining.empty()) {
        double best_cost = 0.0;
        std::size_t best_u = 0, best_pos = 0;
        bool first = true;
        for (std::size_t ui = 0; ui < remaining.size(); ++ui) {
            int u = remaining[ui];
            for (std::size_t pos = 0; pos <= seq.size(); ++pos) {
                int prev = pos > 0 ? seq[pos - 1] : 0;
                int next = pos < seq.size() ? seq[pos] : 0;
                double cost = inst.dist(prev, u) + inst.dist(u, next) - inst.dist(prev, next);
                if (first || cost < best_cost) {
                    first = false;
                    best_cost = cost;
                    best_u = ui;
                    best_pos = pos;
                }
            }
        }
        seq.insert(seq.begin() + best_pos, remaining[best_u]);
        remaining.erase(remaining.begin() + best_u);
    }
    return make_route(std::move(seq), inst);
}

void two_opt(Route& route, const Instance& inst, Rng& rng) {
    const int k = static_cast<int>(route.seq.size());
    if (k < 2) return;
    std::vector<std::pair<int, int>> moves;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) moves.emplace_back(i, j);

    bool improved = true;
    while (improved) {
        improved = false;
        rng.shuffle(moves);
        for (auto [i, j] : moves) {
            auto& s = route.seq;
            int prev = i > 0 ? s[i - 1] : 0;
            int next = j < k - 1 ? s[j + 1] : 0;
            double gain = inst.dist(prev, s[i]) + inst.dist(s[j], next) -
                          inst.dist(prev, s[j]) - inst.dist(s[i], next);
            if (gain > kImproveTol) {
                std::reverse(s.begin() + i, s.begin() + j + 1);
                route.length -= gain;
                improved = true;
            }
        }
    }
}

void or_opt(Route& route, const Instance& inst, Rng& rng) {
    const int k = static_cast<int>(route.seq.size());
    if (k < 2) return;
    struct Move {
        int len, i, p;
        bool reversed;
    };
    std::vector<Move> moves;
    for (int len = 1; len <= 2 && len < k; ++len)
        for (int i = 0; i + len <= k; ++i)
            for (int p = 0; p <= k - len; ++p) {
                if (p == i) {
                    // Re-inserting forward at the original slot is the
                    // identity; the reversed variant is still a real move.
                    moves.push_back({len, i, p, true});
                    continue;
                }
                moves.push_back({len, i, p, false});
                moves.push_back({len, i, p, true});
            }

    auto try_move = [&](const Move& mv) -> bool {
        auto& s = route.seq;
        int first = s[mv.i];
        int last = s[mv.i + mv.len - 1];
        int prev = mv.i > 0 ? s[mv.i - 1] : 0;
        int next = mv.i + mv.len < k ? s[mv.i + mv.len] : 0;
        double gain_remove = inst.dist(prev, first) + inst.dist(last, next) - inst.dist(prev, next);

        // Insertion neighbors in the tour with the segment removed: reduced
        // position p maps to original positions, skipping the segment.
        auto orig = [&](int idx) { return idx < mv.i ? idx : idx + mv.len; };
        int c = mv.p > 0 ? s[orig(mv.p - 1)] : 0;
        int d = mv.p < k - mv.len ? s[orig(mv.p)] : 0;
        int head = mv.reversed ? last : first;
        int tail = mv.reversed ? first : last;
        double cost_insert = inst.dist(c, head) + inst.dist(tail, d) - inst.dist(c, d);
        double gain = gain_remove - cost_insert;
        if (gain <= kImproveTol) return false;

        std::vector<int> segment(s.begin() + mv.i, s.begin() + mv.i + mv.len);
        if (mv.reversed) std::reverse(segment.begin(), segment.end());
        s.erase(s.begin() + mv.i, s.begin() + mv.i + mv.len);
        s.insert(s.begin() + mv.p, segment.begin(), segment.end());
        route.length -= gain;
        return true;
    };

    bool improved = true;
    while (improved) {
        improved = false;
        rng.shuffle(moves);
        for (const auto& mv : moves)
            if (try_move(mv)) improved = true;
    }
}

Solution construct_solution(const Instance& inst, const QMatrix& q, int m,
                            const Params& params, Rng& rng) {
    Clustering cl = seed_centers(inst, q, m, rng);
    assign_cities(cl, inst, q, params.d_rate_construct, params.epsilon, rng);

    Solution sol;
    sol.routes.reserve(m);
    for (int j = 0; j < m; ++j) {
        std::vector<int> cities(cl.members[j].begin() + 1, cl.members[j].end());
        Route r = build_route(cities, inst);
        two_opt(r, inst, rng);
        or_opt(r, inst, rng);
        sol.routes.push_back(std::move(r));
    }
    sol.recompute(inst);
    inter_route_pass(sol, inst, params.d_rate_improve, rng, /*restrict_to_longest=*/true);
    sol.recompute(inst);
    return sol;
}

} // namespace mmtsp
