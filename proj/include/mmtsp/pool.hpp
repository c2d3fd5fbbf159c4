#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "mmtsp/solution.hpp"

namespace mmtsp {

/// Route pool indexed by signature (the sorted city set). Among routes
/// sharing a signature only the shortest is kept. Entries are stored in
/// insertion order so iteration is platform-independent; the hash map is an
/// acceleration structure only, with equality always decided by full
/// signature comparison.
class Pool {
public:
    /// Inserts candidate routes at age 0, keeping the shorter variant on
    /// signature collisions, then prunes every entry (new or old) whose
    /// length is >= incumbent_z.
    void merge(const std::vector<Route>& candidates, double incumbent_z);

    /// Ageing step: routes of the iteration-best solution are inserted (or
    /// have their age reset to 0, keeping the shorter variant); every other
    /// entry ages by one and is evicted once its age reaches age_max.
    void adapt(const std::vector<Route>& best_routes, int age_max);

    void clear();

    std::size_t size() const { return routes_.size(); }
    const std::vector<Route>& routes() const { return routes_; }

private:
    struct SignatureHash {
        std::size_t operator()(const std::vector<int>& v) const;
    };

    void insert_or_shorten(const Route& r);
    void rebuild_index();

    std::vector<Route> routes_;
    std::unordered_map<std::vector<int>, std::size_t, SignatureHash> index_;
};

} // namespace mmtsp
