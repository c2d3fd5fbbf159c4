#pragma once

#include <utility>
#include <vector>

#include "mmtsp/instance.hpp"
#include "mmtsp/params.hpp"
#include "mmtsp/qmatrix.hpp"
#include "mmtsp/random.hpp"
#include "mmtsp/solution.hpp"

namespace mmtsp {

/// State of the cluster-first stage. members[j] lists cluster j's members
/// with the depot (0) first; approx_len[j] tracks the running tour-length
/// estimate used by the assignment scores.
struct Clustering {
    std::vector<int> centers;
    std::vector<std::vector<int>> members;
    std::vector<double> approx_len;
};

/// Seeds m cluster centers. Center sampling is a roulette over
/// w_i = D(0,i)^2, updated after each pick to
/// w_i = min(w_i, D(i,c)^2 * Q(i,c)^2) so cities near a chosen center (or
/// strongly co-learned with it) become unlikely later centers.
/// Requires 1 <= m <= n_cities.
Clustering seed_centers(const Instance& inst, const QMatrix& q, int m, Rng& rng);

/// The two cluster members closest to u (the depot counts as a member).
/// Ties prefer the smaller index; the pair is ordered by (distance, index).
/// Requires at least two members and u outside the cluster.
std::pair<int, int> two_closest_points(int u, const std::vector<int>& members,
                                       const Instance& inst);

/// Per-assignment record for score auditing: the candidate scores s_j for
/// the city processed at this step and the cluster chosen.
struct AssignStep {
    int city = 0;
    std::vector<double> scores;
    int chosen = 0;
};

/// Assigns every unclustered city. Cities are drawn with probability
/// proportional to 1/(delta_u + epsilon), where delta_u is the smallest
/// angular distance from u to any center (computed once up front). Candidate
/// cluster j is scored s_j = (d_uj + epsilon) * r_uj * qmean_uj with
///   d_uj   = D(u,a) + D(u,b) - D(a,b) over the two closest members,
///   r_uj   = max(Lmax, approx_len[j] + d_uj) / Lmax,
///   qmean  = mean Q(u,v) over non-depot members v.
/// With probability d_rate_construct the minimum score wins (ties uniform),
/// otherwise a roulette over 1/s_j decides; zero scores are infinitely
/// preferred and drawn uniformly among themselves.
void assign_cities(Clustering& clustering, const Instance& inst, const QMatrix& q,
                   double d_rate_construct, double epsilon, Rng& rng,
                   std::vector<AssignStep>* audit = nullptr);

/// Greedy best-insertion tour over a cluster. The route starts from the
/// member farthest from the depot; each step inserts the (city, position)
/// pair of minimum insertion cost. All ties prefer the smaller city index,
/// then the smaller position. Requires a non-empty city set.
Route build_route(const std::vector<int>& cities, const Instance& inst);

/// 2-opt to local optimality: candidate segment reversals are scanned in
/// random order, improvements applied first-found, passes repeat until one
/// full scan finds none.
void two_opt(Route& route, const Instance& inst, Rng& rng);

/// Or-opt to local optimality: segments of length 1 and 2 are relocated to
/// every other position in both orientations, scanned in random order,
/// first improvement, until a clean pass.
void or_opt(Route& route, const Instance& inst, Rng& rng);

/// Full construction: seed centers, assign cities, build and locally
/// optimize one route per cluster, then run the inter-route shift/swap pass
/// restricted to moves touching the current longest route.
Solution construct_solution(const Instance& inst, const QMatrix& q, int m,
                            const Params& params, Rng& rng);

} // namespace mmtsp
