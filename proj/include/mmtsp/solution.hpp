#pragma once

#include <vector>

#include "mmtsp/instance.hpp"

namespace mmtsp {

/// Shared comparison tolerance for "strictly improving" / "strictly below"
/// decisions in local search and incumbent updates. Test oracles use the
/// same constant so admissibility agrees bit-for-bit with the solver.
inline constexpr double kImproveTol = 1e-9;

/// One closed tour. seq holds the visited cities in order, without the
/// depot; the tour is depot -> seq[0] -> ... -> seq.back() -> depot.
/// signature() is the sorted city set, the pool identity of the route.
struct Route {
    std::vector<int> seq;
    double length = 0.0;
    int age = 0;

    std::vector<int> signature() const;
};

/// Exact tour length of a depot-anchored sequence. Empty sequences have
/// length 0.
double tour_length(const std::vector<int>& seq, const Instance& inst);

/// Builds a Route from a sequence, computing its length fresh.
Route make_route(std::vector<int> seq, const Instance& inst);

struct Solution {
    std::vector<Route> routes;
    double z = 0.0;     // max route length
    double total = 0.0; // sum of route lengths

    /// Recomputes every route length and the z/total cache from sequences.
    void recompute(const Instance& inst);

    /// Refreshes z/total from the cached route lengths.
    void refresh_objective();
};

/// Recomputes (z, total) from scratch and checks that every city appears in
/// exactly one route. Throws std::runtime_error naming duplicated or missing
/// cities, or if a cached value is off by more than kImproveTol.
std::pair<double, double> evaluate(const Solution& sol, const Instance& inst);

} // namespace mmtsp
