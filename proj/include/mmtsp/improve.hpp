#pragma once

#include <utility>
#include <vector>

#include "mmtsp/instance.hpp"
#include "mmtsp/random.hpp"
#include "mmtsp/solution.hpp"

namespace mmtsp {

namespace detail {
/// When true, every accepted move cross-checks its incremental bookkeeping
/// (route lengths, z, total, cached removal gains) against a full
/// recomputation and throws std::logic_error on disagreement. Tests enable
/// it; it defaults off because the checks are O(n) per move.
extern bool audit_moves;
} // namespace detail

/// (z, total) after each accepted move, for monotonicity checks.
using MoveTrace = std::vector<std::pair<double, double>>;

/// Resolves duplicated cities left by overlapping route selections: while
/// any city sits in more than one route, one of its occurrences is removed.
/// Each occurrence is scored by its removal gain
///   delta = D(a,u) + D(u,b) - D(a,b)
/// scaled by the current length of the route it sits in; with probability
/// d_rate_improve the largest scaled score is removed (ties: first in route
/// order), otherwise a roulette proportional to the scaled scores decides.
/// Throws std::logic_error if a city occurs in no route.
void remove_duplicates(Solution& sol, const Instance& inst, double d_rate_improve,
                       Rng& rng);

/// One shift (relocation) descent: repeatedly enumerates all admissible
/// single-city relocations, picks one (greedy argmax of the total-length
/// gain with probability d_rate_improve, otherwise roulette over
/// exp(gain / z) with gain/z clamped to [-50, 50]), applies it, and stops
/// when no admissible move remains. A move is admissible when the new
/// maximum route length stays <= z and the move strictly improves the total,
/// or when it strictly lowers z itself. With restrict_to_longest only moves
/// whose source or target is a current longest route are considered.
/// Returns true if any move was applied.
bool shift_pass(Solution& sol, const Instance& inst, double d_rate_improve, Rng& rng,
                bool restrict_to_longest = false, MoveTrace* trace = nullptr);

/// One swap descent over exchanges of two cities from different routes;
/// selection and admissibility follow shift_pass.
bool swap_pass(Solution& sol, const Instance& inst, double d_rate_improve, Rng& rng,
               bool restrict_to_longest = false, MoveTrace* trace = nullptr);

/// Full improvement: remove_duplicates, shift to convergence, swap to
/// convergence, then one shift re-check. Route lengths and the objective
/// cache are recomputed exactly on exit.
void improve(Solution& sol, const Instance& inst, double d_rate_improve, Rng& rng,
             MoveTrace* trace = nullptr);

/// The shift/swap/shift sequence alone (no duplicate resolution), optionally
/// restricted to the longest route; used by the construction pipeline.
void inter_route_pass(Solution& sol, const Instance& inst, double d_rate_improve,
                      Rng& rng, bool restrict_to_longest, MoveTrace* trace = nullptr);

} // namespace mmtsp
