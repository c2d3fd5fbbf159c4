#include "mmtsp/pool.hpp"

#include <algorithm>

namespace mmtsp {

std::size_t Pool::SignatureHash::operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) {
        h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

void Pool::insert_or_shorten(const Route& r) {
    std::vector<int> sig = r.signature();
    auto it = index_.find(sig);
    if (it == index_.end()) {
        index_.emplace(std::move(sig), routes_.size());
        routes_.push_back(r);
        routes_.back().age = 0;
        return;
    }
    Route& held = routes_[it->second];
    if (r.length < held.length) {
        held.seq = r.seq;
        held.length = r.length;
        held.age = 0;
    } else {
        held.age = 0;
    }
}

void Pool::rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < routes_.size(); ++i) index_.emplace(routes_[i].signature(), i);
}

void Pool::merge(const std::vector<Route>& candidates, double incumbent_z) {
    for (const auto& r : candidates) {
        if (r.length >= incumbent_z) continue;
        insert_or_shorten(r);
    }
    auto keep = std::remove_if(routes_.begin(), routes_.end(),
                               [&](const Route& r) { return r.length >= incumbent_z; });
    if (keep != routes_.end()) {
        routes_.erase(keep, routes_.end());
        rebuild_index();
    }
}

void Pool::adapt(const std::vector<Route>& best_routes, int age_max) {
    std::vector<char> is_best(routes_.size(), 0);
    for (const auto& r : best_routes) {
        std::vector<int> sig = r.signature();
        auto it = index_.find(sig);
        if (it == index_.end()) {
            index_.emplace(std::move(sig), routes_.size());
            routes_.push_back(r);
            routes_.back().age = 0;
            is_best.push_back(1);
        } else {
            insert_or_shorten(r);
            is_best[it->second] = 1;
        }
    }
    bool evicted = false;
    for (std::size_t i = 0; i < routes_.size(); ++i) {
        if (is_best[i]) continue;
        if (++routes_[i].age >= age_max) evicted = true;
    }
    if (evicted) {
        std::vector<Route> kept;
        kept.reserve(routes_.size());
        for (auto& r : routes_)
            if (r.age < age_max) kept.push_back(std::move(r));
        routes_ = std::move(kept);
        rebuild_index();
    }
}

void Pool::clear() {
    routes_.clear();
    index_.clear();
}

} // namespace mmtsp
