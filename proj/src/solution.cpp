#include "mmtsp/solution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mmtsp {

std::vector<int> Route::signature() const {
    std::vector<int> s = seq;
    std::sort(s.begin(), s.end());
    return s;
}

double tour_length(const std::vector<int>& seq, const Instance& inst) {
    if (seq.empty()) return 0.0;
    double len = inst.dist(0, seq.front());
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) len += inst.dist(seq[i], seq[i + 1]);
    len += inst.dist(seq.back(), 0);
    return len;
}

Route make_route(std::vector<int> seq, const Instance& inst) {
    Route r;
    r.length = tour_length(seq, inst);
    r.seq = std::move(seq);
    return r;
}

void Solution::recompute(const Instance& inst) {
    for (auto& r : routes) r.length = tour_length(r.seq, inst);
    refresh_objective();
}

void Solution::refresh_objective() {
    z = 0.0;
    total = 0.0;
    for (const auto& r : routes) {
        total += r.length;
        if (r.length > z) z = r.length;
    }
}

std::pair<double, double> evaluate(const Solution& sol, const Instance& inst) {
    std::vector<int> count(inst.n_cities() + 1, 0);
    double z = 0.0, total = 0.0;
    for (const auto& r : sol.routes) {
        double len = tour_length(r.seq, inst);
        total += len;
        z = std::max(z, len);
        if (std::fabs(len - r.length) > kImproveTol) {
            std::ostringstream os;
            os << "cached route length " << r.length << " differs from recomputed " << len;
            throw std::runtime_error(os.str());
        }
        for (int c : r.seq) {
            if (c < 1 || c > inst.n_cities())
                throw std::runtime_error("route contains unknown city " + std::to_string(c));
            ++count[c];
        }
    }
    std::ostringstream bad;
    for (int c = 1; c <= inst.n_cities(); ++c) {
        if (count[c] == 0) bad << " missing:" << c;
        else if (count[c] > 1) bad << " duplicated:" << c;
    }
    if (!bad.str().empty()) throw std::runtime_error("infeasible solution:" + bad.str());
    if (std::fabs(z - sol.z) > kImproveTol || std::fabs(total - sol.total) > kImproveTol) {
        std::ostringstream os;
        os << "cached objective (z=" << sol.z << ", total=" << sol.total
           << ") differs from recomputed (z=" << z << ", total=" << total << ")";
        throw std::runtime_error(os.str());
    }
    return {z, total};
}

} // namespace mmtsp
