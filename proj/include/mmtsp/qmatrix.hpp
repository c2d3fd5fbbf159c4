#pragma once

#include <stdexcept>
#include <vector>

namespace mmtsp {

/// Symmetric q-value matrix over city pairs (indices 1..n_cities).
/// Values live in [0, 1] and start at the neutral 0.5.
class QMatrix {
public:
    explicit QMatrix(int n_cities) : n_(n_cities) {
        if (n_cities < 1) throw std::invalid_argument("QMatrix: n_cities must be positive");
        q_.assign(static_cast<std::size_t>(n_ + 1) * (n_ + 1), 0.5);
    }

    int n_cities() const { return n_; }

    double get(int i, int j) const { return q_[index(i, j)]; }

    void set(int i, int j, double v) {
        q_[index(i, j)] = v;
        q_[index(j, i)] = v;
    }

    void reset() {
        for (auto& v : q_) v = 0.5;
    }

private:
    std::size_t index(int i, int j) const {
        if (i < 1 || i > n_ || j < 1 || j > n_)
            throw std::out_of_range("QMatrix: city index out of range");
        return static_cast<std::size_t>(i) * (n_ + 1) + j;
    }

    int n_;
    std::vector<double> q_;
};

} // namespace mmtsp
