#pragma once

#include <iosfwd>
#include <vector>

#include "mmtsp/solution.hpp"

namespace mmtsp {

/// Route-selection subproblem: choose exactly m pool routes covering every
/// city (overlaps allowed; the improvement step resolves them) minimizing
/// the maximum selected route length. Only routes shorter than upper_bound
/// are usable.
struct RestrictedProblem {
    int n_cities = 0;
    int m = 0;
    double upper_bound = 0.0;
    std::vector<Route> routes;
};

enum class SolveStatus { Optimal, Infeasible, TimedOut };

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<int> selected; // indices into RestrictedProblem::routes
    double objective = 0.0;    // max selected length; meaningless when empty

    bool has_selection() const { return !selected.empty(); }
};

/// Exact solve. The optimal objective is always some route length, so the
/// search binary-searches the sorted lengths; a threshold is feasible when
/// the routes at or below it number at least m and admit a set cover of at
/// most m routes (any smaller cover is padded with unused routes, which is
/// always allowed because coverage is ">= 1"). Cover feasibility is decided
/// by branch and bound on the city with the fewest covering routes, with
/// memoized infeasibility cuts. Exceeding time_cap_s returns TimedOut with
/// the best selection found so far (possibly none).
SolveResult solve_restricted(const RestrictedProblem& problem, double time_cap_s);

/// Exhaustive reference: enumerates every m-subset. Test use only.
SolveResult brute_force_reference(const RestrictedProblem& problem);

/// Writes the equivalent MILP in LP text format, one constraint per
/// line: minimize z subject to z >= l_r - M(1 - x_r) for every route,
/// sum x_r = m, and coverage >= 1 per city, x binary, with M = max l_r.
void write_lp(const RestrictedProblem& problem, std::ostream& out);

} // namespace mmtsp
