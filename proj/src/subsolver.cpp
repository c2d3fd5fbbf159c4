#include "mmtsp/subsolver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace mmtsp {

namespace {

using Clock = std::chrono::steady_clock;

struct TimedOutError {};

struct MaskHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (std::uint64_t x : v) {
            h ^= static_cast<std::size_t>(x);
            h *= 1099511628211ull;
        }
        return h;
    }
};

/// Set-cover feasibility within a budget, over a fixed prefix of routes.
class CoverSearch {
public:
    CoverSearch(const std::vector<std::vector<std::uint64_t>>& masks, int n_cities,
                Clock::time_point deadline)
        : masks_(masks), words_((n_cities + 63) / 64), n_cities_(n_cities),
          deadline_(deadline) {}

    /// Routes usable are order[0..prefix]. Returns true and fills cover with
    /// route ids if at most `budget` of them cover all cities.
    bool covers(const std::vector<int>& order, int prefix, int budget,
                std::vector<int>& cover) {
        prefix_routes_.assign(order.begin(), order.begin() + prefix + 1);

        std::vector<std::uint64_t> uncovered(words_, 0);
        for (int c = 0; c < n_cities_; ++c) uncovered[c >> 6] |= 1ull << (c & 63);

        covering_.assign(n_cities_, {});
        int max_route = 0;
        for (int r : prefix_routes_) {
            int size = 0;
            for (std::size_t w = 0; w < words_; ++w) {
                std::uint64_t bits = masks_[r][w];
                size += __builtin_popcountll(bits);
                while (bits) {
                    int c = static_cast<int>(w * 64) + __builtin_ctzll(bits);
                    covering_[c].push_back(r);
                    bits &= bits - 1;
                }
            }
            max_route = std::max(max_route, size);
        }
        for (int c = 0; c < n_cities_; ++c)
            if (covering_[c].empty()) return false;
        max_route_ = max_route;
        memo_.clear();
        cover.clear();
        return dfs(uncovered, budget, cover);
    }

private:
    bool dfs(std::vector<std::uint64_t>& uncovered, int budget, std::vector<int>& chosen) {
        int remaining = 0;
        for (std::uint64_t w : uncovered) remaining += __builtin_popcountll(w);
        if (remaining == 0) return true;
        if (budget == 0) return false;
        if ((remaining + max_route_ - 1) / max_route_ > budget) return false;
        if (auto it = memo_.find(uncovered); it != memo_.end() && it->second >= budget)
            return false;
        if (++nodes_ % 1024 == 0 && Clock::now() > deadline_) throw TimedOutError{};

        // Branch on the uncovered city with the fewest covering routes.
        int city = -1;
        std::size_t fewest = SIZE_MAX;
        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t bits = uncovered[w];
            while (bits) {
                int c = static_cast<int>(w * 64) + __builtin_ctzll(bits);
                if (covering_[c].size() < fewest) {
                    fewest = covering_[c].size();
                    city = c;
                }
                bits &= bits - 1;
            }
        }

        // Explore routes over that city, most new coverage first.
        branch_buf_.clear();
        for (int r : covering_[city]) {
            int uncov = 0;
            for (std::size_t w = 0; w < words_; ++w)
                uncov += __builtin_popcountll(masks_[r][w] & uncovered[w]);
            branch_buf_.emplace_back(-uncov, r);
        }
        std::sort(branch_buf_.begin(), branch_buf_.end());
        auto branches = branch_buf_;

        for (auto [neg_gain, r] : branches) {
            std::vector<std::uint64_t> next(uncovered);
            for (std::size_t w = 0; w < words_; ++w) next[w] &= ~masks_[r][w];
            chosen.push_back(r);
            if (dfs(next, budget - 1, chosen)) return true;
            chosen.pop_back();
        }

        auto [it, fresh] = memo_.emplace(uncovered, budget);
        if (!fresh) it->second = std::max(it->second, budget);
        return false;
    }

    const std::vector<std::vector<std::uint64_t>>& masks_;
    std::size_t words_;
    int n_cities_;
    Clock::time_point deadline_;
    int max_route_ = 1;
    std::vector<int> prefix_routes_;
    std::vector<std::vector<int>> covering_;
    std::vector<std::pair<int, int>> branch_buf_;
    std::unordered_map<std::vector<std::uint64_t>, int, MaskHash> memo_;
    std::uint64_t nodes_ = 0;
};

std::vector<std::vector<std::uint64_t>> route_masks(const RestrictedProblem& p,
                                                    const std::vector<int>& usable) {
    const std::size_t words = (p.n_cities + 63) / 64;
    std::vector<std::vector<std::uint64_t>> masks(p.routes.size());
    for (int r : usable) {
        masks[r].assign(words, 0);
        for (int c : p.routes[r].seq) {
            if (c < 1 || c > p.n_cities)
                throw std::invalid_argument("subsolver: route references city " +
                                            std::to_string(c) + " outside the instance");
            masks[r][(c - 1) >> 6] |= 1ull << ((c - 1) & 63);
        }
    }
    return masks;
}

/// Pads a cover up to exactly m routes with the shortest unused prefix
/// routes, then sorts the selection for stable output.
std::vector<int> pad_selection(std::vector<int> cover, const std::vector<int>& order,
                               int prefix, int m, std::size_t n_routes) {
    std::vector<char> used(n_routes, 0);
    for (int r : cover) used[r] = 1;
    for (int i = 0; i <= prefix && static_cast<int>(cover.size()) < m; ++i) {
        int r = order[i];
        if (!used[r]) {
            used[r] = 1;
            cover.push_back(r);
        }
    }
    std::sort(cover.begin(), cover.end());
    return cover;
}

} // namespace

SolveResult solve_restricted(const RestrictedProblem& problem, double time_cap_s) {
    if (problem.m < 1) throw std::invalid_argument("solve_restricted: m must be positive");
    if (problem.n_cities < 1)
        throw std::invalid_argument("solve_restricted: n_cities must be positive");
    const auto deadline =
        Clock::now() + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(std::max(time_cap_s, 0.0)));

    std::vector<int> usable;
    for (int r = 0; r < static_cast<int>(problem.routes.size()); ++r)
        if (problem.routes[r].length < problem.upper_bound) usable.push_back(r);
    if (static_cast<int>(usable.size()) < problem.m) return {SolveStatus::Infeasible, {}, 0.0};

    std::vector<int> order = usable;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (problem.routes[a].length != problem.routes[b].length)
            return problem.routes[a].length < problem.routes[b].length;
        return a < b;
    });

    const auto masks = route_masks(problem, usable);
    CoverSearch search(masks, problem.n_cities, deadline);

    const int R = static_cast<int>(order.size());
    int best_prefix = -1;
    std::vector<int> best_cover;
    auto result_from = [&](SolveStatus status) -> SolveResult {
        std::vector<int> sel =
            pad_selection(best_cover, order, best_prefix, problem.m, problem.routes.size());
        double obj = 0.0;
        for (int r : sel) obj = std::max(obj, problem.routes[r].length);
        return {status, std::move(sel), obj};
    };

    std::vector<int> cover;
    try {
        int lo = problem.m - 1, hi = R - 1;
        if (!search.covers(order, hi, problem.m, cover))
            return {SolveStatus::Infeasible, {}, 0.0};
        best_prefix = hi;
        best_cover = cover;
        while (lo < hi) {
            int mid = lo + (hi - lo) / 2;
            if (search.covers(order, mid, problem.m, cover)) {
                hi = mid;
                best_prefix = mid;
                best_cover = cover;
            } else {
                lo = mid + 1;
            }
        }
        return result_from(SolveStatus::Optimal);
    } catch (const TimedOutError&) {
        if (best_prefix < 0) return {SolveStatus::TimedOut, {}, 0.0};
        return result_from(SolveStatus::TimedOut);
    }
}

SolveResult brute_force_reference(const RestrictedProblem& problem) {
    if (problem.m < 1) throw std::invalid_argument("brute_force_reference: m must be positive");
    std::vector<int> usable;
    for (int r = 0; r < static_cast<int>(problem.routes.size()); ++r)
        if (problem.routes[r].length < problem.upper_bound) usable.push_back(r);
    if (static_cast<int>(usable.size()) < problem.m) return {SolveStatus::Infeasible, {}, 0.0};

    const auto masks = route_masks(problem, usable);
    const std::size_t words = (problem.n_cities + 63) / 64;
    std::vector<std::uint64_t> full(words, 0);
    for (int c = 0; c < problem.n_cities; ++c) full[c >> 6] |= 1ull << (c & 63);

    std::vector<int> pick, best;
    double best_obj = 0.0;
    bool found = false;

    auto recurse = [&](auto&& self, std::size_t start, double cur_max) -> void {
        if (static_cast<int>(pick.size()) == problem.m) {
            std::vector<std::uint64_t> cov(words, 0);
            for (int r : pick)
                for (std::size_t w = 0; w < words; ++w) cov[w] |= masks[r][w];
            if (cov != full) return;
            if (!found || cur_max < best_obj) {
                found = true;
                best_obj = cur_max;
                best = pick;
            }
            return;
        }
        for (std::size_t i = start; i < usable.size(); ++i) {
            int r = usable[i];
            pick.push_back(r);
            self(self, i + 1, std::max(cur_max, problem.routes[r].length));
            pick.pop_back();
        }
    };
    recurse(recurse, 0, 0.0);
    if (!found) return {SolveStatus::Infeasible, {}, 0.0};
    return {SolveStatus::Optimal, std::move(best), best_obj};
}

void write_lp(const RestrictedProblem& problem, std::ostream& out) {
    const int R = static_cast<int>(problem.routes.size());
    double big_m = 0.0;
    for (const auto& r : problem.routes) big_m = std::max(big_m, r.length);

    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };

    out << "\\ route selection: minimize the maximum selected tour length\n";
    out << "Minimize\n obj: z\n";
    out << "Subject To\n";
    for (int r = 0; r < R; ++r) {
        // z >= l_r - M (1 - x_r), linearized as z - M x_r >= l_r - M.
        out << " sel_" << r << ": z - " << num(big_m) << " x_" << r
            << " >= " << num(problem.routes[r].length - big_m) << "\n";
    }
    out << " card:";
    for (int r = 0; r < R; ++r) out << " + x_" << r;
    out << " = " << problem.m << "\n";
    for (int c = 1; c <= problem.n_cities; ++c) {
        out << " cov_" << c << ":";
        bool seen = false;
        for (int r = 0; r < R; ++r) {
            const auto& seq = problem.routes[r].seq;
            if (std::find(seq.begin(), seq.end(), c) != seq.end()) {
                out << " + x_" << r;
                seen = true;
            }
        }
        if (!seen) out << " 0 x_0";
        out << " >= 1\n";
    }
    out << "Bounds\n z >= 0\n";
    out << "Binaries\n";
    for (int r = 0; r < R; ++r) out << " x_" << r << "\n";
    out << "End\n";
}

} // namespace mmtsp
