#pragma once

#include <deque>
#include <vector>

#include "mmtsp/pool.hpp"
#include "mmtsp/qmatrix.hpp"
#include "mmtsp/solution.hpp"

namespace mmtsp {

/// Symmetric co-occurrence counts over city pairs. A pair is counted once
/// per route both cities appear in, so multiplicities accumulate across
/// routes (the q update only consumes positivity).
class PairCounts {
public:
    explicit PairCounts(int n_cities);

    void add_route(const std::vector<int>& seq);
    int get(int i, int j) const;
    int n_cities() const { return n_; }

private:
    int n_;
    std::vector<int> counts_;
};

PairCounts cooccurrence(const std::vector<Route>& routes, int n_cities);

/// One learning sweep: every pair present in the candidate route set is
/// reinforced toward 0 (q -= l_rate * q) when it also appears in the best
/// solution, and discouraged toward 1 (q += l_rate * (1 - q)) otherwise.
/// Pairs absent from the candidate set are untouched.
void update(QMatrix& q, const PairCounts& cand, const PairCounts& best, double l_rate);

/// Mean |0.5 - q_ij| over all unordered city pairs: 0 at the neutral start,
/// approaching 0.5 as every value saturates. Requires at least two cities.
double convergence_proxy(const QMatrix& q);

/// Stagnation detector over the proxy series: fires once a full window has
/// been observed and the samples of the last window_s wall-clock seconds
/// (at least min_samples of them) span a range below threshold. Firing
/// clears its history, so another full flat window is needed to re-fire.
class StagnationMonitor {
public:
    explicit StagnationMonitor(double window_s = 10.0, std::size_t min_samples = 5,
                               double threshold = 1e-3)
        : window_s_(window_s), min_samples_(min_samples), threshold_(threshold) {}

    bool observe(double elapsed_s, double proxy);

private:
    double window_s_;
    std::size_t min_samples_;
    double threshold_;
    bool started_ = false;
    double window_start_ = 0.0;
    std::deque<std::pair<double, double>> samples_;
};

/// Records the sample; on a detected plateau resets q to neutral, clears the
/// pool, and returns true.
bool maybe_reset(StagnationMonitor& monitor, double elapsed_s, double proxy, QMatrix& q,
                 Pool& pool);

} // namespace mmtsp
