#include "mmtsp/learn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmtsp {

PairCounts::PairCounts(int n_cities) : n_(n_cities) {
    if (n_cities < 1) throw std::invalid_argument("PairCounts: n_cities must be positive");
    counts_.assign(static_cast<std::size_t>(n_ + 1) * (n_ + 1), 0);
}

void PairCounts::add_route(const std::vector<int>& seq) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
        for (std::size_t j = i + 1; j < seq.size(); ++j) {
            int a = std::min(seq[i], seq[j]);
            int b = std::max(seq[i], seq[j]);
            if (a < 1 || b > n_)
                throw std::out_of_range("PairCounts: city index out of range");
            ++counts_[static_cast<std::size_t>(a) * (n_ + 1) + b];
        }
    }
}

int PairCounts::get(int i, int j) const {
    if (i < 1 || i > n_ || j < 1 || j > n_ || i == j)
        throw std::out_of_range("PairCounts: bad pair");
    int a = std::min(i, j), b = std::max(i, j);
    return counts_[static_cast<std::size_t>(a) * (n_ + 1) + b];
}

PairCounts cooccurrence(const std::vector<Route>& routes, int n_cities) {
    PairCounts counts(n_cities);
    for (const auto& r : routes) counts.add_route(r.seq);
    return counts;
}

void update(QMatrix& q, const PairCounts& cand, const PairCounts& best, double l_rate) {
    const int n = q.n_cities();
    if (cand.n_cities() != n || best.n_cities() != n)
        throw std::invalid_argument("update: mismatched dimensions");
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            if (cand.get(i, j) == 0) continue;
            double v = q.get(i, j);
            if (best.get(i, j) > 0)
                v -= l_rate * v;
            else
                v += l_rate * (1.0 - v);
            q.set(i, j, v);
        }
    }
}

double convergence_proxy(const QMatrix& q) {
    const int n = q.n_cities();
    if (n < 2) throw std::invalid_argument("convergence_proxy: needs at least two cities");
    double sum = 0.0;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) sum += std::fabs(0.5 - q.get(i, j));
    return sum / (static_cast<double>(n) * (n - 1) / 2.0);
}

bool StagnationMonitor::observe(double elapsed_s, double proxy) {
    if (!started_) {
        started_ = true;
        window_start_ = elapsed_s;
    }
    samples_.emplace_back(elapsed_s, proxy);
    while (!samples_.empty() && samples_.front().first < elapsed_s - window_s_)
        samples_.pop_front();
    if (elapsed_s - window_start_ < window_s_) return false;
    if (samples_.size() < min_samples_) return false;
    double lo = samples_.front().second, hi = lo;
    for (const auto& [t, p] : samples_) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    if (hi - lo < threshold_) {
        samples_.clear();
        started_ = false;
        return true;
    }
    return false;
}

bool maybe_reset(StagnationMonitor& monitor, double elapsed_s, double proxy, QMatrix& q,
                 Pool& pool) {
    if (!monitor.observe(elapsed_s, proxy)) return false;
    q.reset();
    pool.clear();
    return true;
}

} // namespace mmtsp
