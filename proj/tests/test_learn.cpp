#include <doctest.h>

#include <cmath>
#include <vector>

#include "mmtsp/instance.hpp"
#include "mmtsp/learn.hpp"
#include "mmtsp/pool.hpp"
#include "mmtsp/qmatrix.hpp"
#include "mmtsp/random.hpp"
#include "mmtsp/solution.hpp"

using namespace mmtsp;

namespace {

Route bare(std::vector<int> seq) {
    Route r;
    r.seq = std::move(seq);
    r.length = 1.0;
    return r;
}

} // namespace

TEST_CASE("q-values start neutral and stay symmetric") {
    QMatrix q(4);
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j)
            if (i != j) CHECK(q.get(i, j) == 0.5);
    q.set(2, 3, 0.125);
    CHECK(q.get(3, 2) == 0.125);
    CHECK_THROWS_AS(q.get(0, 1), std::out_of_range);
    CHECK_THROWS_AS(q.get(1, 5), std::out_of_range);
}

TEST_CASE("co-occurrence counts pairs per route") {
    SUBCASE("one route yields each of its pairs once") {
        PairCounts c = cooccurrence({bare({1, 2, 3})}, 4);
        CHECK(c.get(1, 2) == 1);
        CHECK(c.get(1, 3) == 1);
        CHECK(c.get(2, 3) == 1);
        CHECK(c.get(1, 4) == 0);
    }
    SUBCASE("disjoint routes share no pair") {
        PairCounts c = cooccurrence({bare({1, 2}), bare({3, 4})}, 4);
        CHECK(c.get(1, 2) == 1);
        CHECK(c.get(3, 4) == 1);
        CHECK(c.get(1, 3) == 0);
        CHECK(c.get(2, 4) == 0);
    }
    SUBCASE("multiplicity accumulates across routes") {
        PairCounts c =
            cooccurrence({bare({1, 2}), bare({2, 1, 3}), bare({4, 1, 2})}, 4);
        CHECK(c.get(1, 2) == 3);
        CHECK(c.get(2, 1) == 3);
        CHECK(c.get(1, 3) == 1);
        CHECK(c.get(3, 4) == 0);
    }
}

TEST_CASE("single-step updates match the displayed rule") {
    QMatrix q(3);
    PairCounts cand = cooccurrence({bare({1, 2}), bare({1, 3})}, 3);
    PairCounts best = cooccurrence({bare({1, 2})}, 3);
    update(q, cand, best, 0.31);
    // (1,2) in both: reinforced toward 0.
    CHECK(q.get(1, 2) == doctest::Approx(0.345).epsilon(1e-12));
    // (1,3) only in the candidate set: discouraged toward 1.
    CHECK(q.get(1, 3) == doctest::Approx(0.655).epsilon(1e-12));
    // (2,3) absent from the candidate set: untouched.
    CHECK(q.get(2, 3) == 0.5);
}

TEST_CASE("iterated updates follow the closed forms to 1e-12") {
    const std::vector<double> rates{0.20, 0.26, 0.31, 0.45};
    for (double l : rates) {
        QMatrix q(2);
        PairCounts cand = cooccurrence({bare({1, 2})}, 2);
        PairCounts best_has = cand;
        PairCounts best_not = cooccurrence({}, 2);
        const double q0 = 0.5;

        // k reinforcements: (1-l)^k * q0.
        for (int k = 1; k <= 60; ++k) {
            update(q, cand, best_has, l);
            double want = std::pow(1.0 - l, k) * q0;
            CHECK(q.get(1, 2) == doctest::Approx(want).epsilon(1e-12));
        }
        // From the drifted value, k discouragements: 1 - (1-l)^k (1 - v0).
        double v0 = q.get(1, 2);
        for (int k = 1; k <= 60; ++k) {
            update(q, cand, best_not, l);
            double want = 1.0 - std::pow(1.0 - l, k) * (1.0 - v0);
            CHECK(q.get(1, 2) == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("q stays within [0,1] under 100000 random updates") {
    QMatrix q(6);
    Rng rng(20260814);
    std::vector<Route> all;
    for (int i = 1; i <= 6; ++i)
        for (int j = i + 1; j <= 6; ++j) all.push_back(bare({i, j}));
    for (int t = 0; t < 100000; ++t) {
        PairCounts cand(6), best(6);
        for (const auto& r : all) {
            if (rng.next_double() < 0.4) cand.add_route(r.seq);
            if (rng.next_double() < 0.2) best.add_route(r.seq);
        }
        double l = 0.01 + 0.98 * rng.next_double();
        update(q, cand, best, l);
    }
    bool all_in_range = true, symmetric = true;
    for (int i = 1; i <= 6; ++i)
        for (int j = 1; j <= 6; ++j) {
            if (i == j) continue;
            double v = q.get(i, j);
            if (!(v >= 0.0 && v <= 1.0)) all_in_range = false;
            if (q.get(j, i) != v) symmetric = false;
        }
    CHECK(all_in_range);
    CHECK(symmetric);
}

TEST_CASE("the convergence proxy is the mean distance from neutral") {
    SUBCASE("neutral matrix scores zero") {
        QMatrix q(5);
        CHECK(convergence_proxy(q) == 0.0);
    }
    SUBCASE("fully saturated matrix scores one half") {
        QMatrix q(5);
        int flip = 0;
        for (int i = 1; i <= 5; ++i)
            for (int j = i + 1; j <= 5; ++j) q.set(i, j, (flip++ % 2) ? 0.0 : 1.0);
        CHECK(convergence_proxy(q) == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("half neutral, half saturated scores one quarter") {
        QMatrix q(4); // six pairs
        q.set(1, 2, 1.0);
        q.set(1, 3, 1.0);
        q.set(1, 4, 1.0);
        CHECK(convergence_proxy(q) == doctest::Approx(0.25).epsilon(1e-15));
    }
    SUBCASE("a single city has no pairs") {
        QMatrix q(1);
        CHECK_THROWS_AS(convergence_proxy(q), std::invalid_argument);
    }
}

TEST_CASE("reset returns the matrix to neutral") {
    QMatrix q(3);
    q.set(1, 2, 0.9);
    q.set(2, 3, 0.1);
    q.reset();
    CHECK(q.get(1, 2) == 0.5);
    CHECK(q.get(2, 3) == 0.5);
    CHECK(convergence_proxy(q) == 0.0);
}

TEST_CASE("a constant proxy fires only after a full window") {
    StagnationMonitor mon(10.0, 5, 1e-3);
    // Samples every second from t=0: flat from the start, but the window is
    // only complete at t=10.
    for (int t = 0; t <= 9; ++t) CHECK_FALSE(mon.observe(double(t), 0.2));
    CHECK(mon.observe(10.0, 0.2));
}

TEST_CASE("a strictly increasing proxy never fires") {
    StagnationMonitor mon(10.0, 5, 1e-3);
    for (int t = 0; t <= 40; ++t) CHECK_FALSE(mon.observe(double(t), 0.01 * t));
}

TEST_CASE("activity followed by a flat window fires exactly once at window end") {
    StagnationMonitor mon(10.0, 5, 1e-3);
    // Varying phase: range far above threshold.
    for (int t = 0; t <= 14; ++t)
        CHECK_FALSE(mon.observe(double(t), (t % 2) ? 0.3 : 0.1));
    // Flat phase starting at t=15; old varying samples age out of the window
    // by t=25, but the detector also needs the full 10 s of flat samples.
    bool fired = false;
    int fire_time = -1;
    for (int t = 15; t <= 40 && !fired; ++t) {
        fired = mon.observe(double(t), 0.2);
        if (fired) fire_time = t;
    }
    CHECK(fired);
    CHECK(fire_time == 25);
    // History was cleared by the firing: the next flat decade fires again.
    bool refired = false;
    int refire_time = -1;
    for (int t = 41; t <= 60 && !refired; ++t) {
        refired = mon.observe(double(t), 0.2);
        if (refired) refire_time = t;
    }
    CHECK(refired);
    CHECK(refire_time >= 51);
}

TEST_CASE("too few samples in the window hold the trigger") {
    StagnationMonitor mon(10.0, 5, 1e-3);
    // One sample every 4 seconds: a 10 s window holds only 3 samples.
    for (int t = 0; t <= 40; t += 4) CHECK_FALSE(mon.observe(double(t), 0.2));
}

TEST_CASE("maybe_reset clears the learned state and the pool") {
    Instance inst("line", {{0, 0}, {1, 0}, {2, 0}});
    QMatrix q(2);
    q.set(1, 2, 0.97);
    Pool pool;
    pool.merge({make_route({1}, inst), make_route({2}, inst)}, 1e9);
    StagnationMonitor mon(10.0, 5, 1e-3);
    bool fired = false;
    for (int t = 0; t <= 10; ++t) {
        fired = maybe_reset(mon, double(t), 0.47, q, pool);
        if (t < 10) {
            CHECK_FALSE(fired);
            CHECK(pool.size() == 2);
        }
    }
    CHECK(fired);
    CHECK(pool.size() == 0);
    CHECK(q.get(1, 2) == 0.5);
}
