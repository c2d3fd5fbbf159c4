#include "mmtsp/improve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmtsp {

namespace detail {
bool audit_moves = false;
}

namespace {

constexpr double kExpClamp = 50.0;

int neighbor_before(const std::vector<int>& seq, std::size_t pos) {
    return pos > 0 ? seq[pos - 1] : 0;
}

int neighbor_after(const std::vector<int>& seq, std::size_t pos) {
    return pos + 1 < seq.size() ? seq[pos + 1] : 0;
}

double removal_gain(const Instance& inst, const std::vector<int>& seq, std::size_t pos) {
    int a = neighbor_before(seq, pos);
    int u = seq[pos];
    int b = neighbor_after(seq, pos);
    return inst.dist(a, u) + inst.dist(u, b) - inst.dist(a, b);
}

double insertion_cost(const Instance& inst, const std::vector<int>& seq, std::size_t slot,
                      int u) {
    int c = slot > 0 ? seq[slot - 1] : 0;
    int d = slot < seq.size() ? seq[slot] : 0;
    return inst.dist(c, u) + inst.dist(u, d) - inst.dist(c, d);
}

void audit_solution(const Solution& sol, const Instance& inst, const char* where) {
    double z = 0.0, total = 0.0;
    for (const auto& r : sol.routes) {
        double len = tour_length(r.seq, inst);
        if (std::fabs(len - r.length) > 1e-7)
            throw std::logic_error(std::string(where) + ": incremental route length drifted");
        total += r.length;
        z = std::max(z, r.length);
    }
    if (std::fabs(z - sol.z) > 1e-7 || std::fabs(total - sol.total) > 1e-7)
        throw std::logic_error(std::string(where) + ": incremental objective drifted");
}

/// Removal-gain cache, updated only for cities whose neighborhoods a move
/// touched. The audit cross-checks it against a full recomputation.
class RemovalGains {
public:
    RemovalGains(const Solution& sol, const Instance& inst)
        : inst_(inst), gain_(inst.n_cities() + 1, 0.0) {
        for (const auto& r : sol.routes)
            for (std::size_t i = 0; i < r.seq.size(); ++i)
                gain_[r.seq[i]] = removal_gain(inst, r.seq, i);
    }

    double operator[](int city) const { return gain_[city]; }

    void refresh(const std::vector<int>& seq, std::size_t pos) {
        if (pos < seq.size()) gain_[seq[pos]] = removal_gain(inst_, seq, pos);
    }

    void audit(const Solution& sol) const {
        for (const auto& r : sol.routes)
            for (std::size_t i = 0; i < r.seq.size(); ++i)
                if (gain_[r.seq[i]] != removal_gain(inst_, r.seq, i))
                    throw std::logic_error("removal-gain cache diverged from full recomputation");
    }

private:
    const Instance& inst_;
    std::vector<double> gain_;
};

/// Largest route length outside routes {skip_a, skip_b}: the top three
/// lengths always contain it.
struct TopLengths {
    double len[3] = {-1.0, -1.0, -1.0};
    int idx[3] = {-1, -1, -1};

    explicit TopLengths(const Solution& sol) {
        for (int r = 0; r < static_cast<int>(sol.routes.size()); ++r) {
            double l = sol.routes[r].length;
            for (int s = 0; s < 3; ++s) {
                if (l > len[s]) {
                    for (int t = 2; t > s; --t) {
                        len[t] = len[t - 1];
                        idx[t] = idx[t - 1];
                    }
                    len[s] = l;
                    idx[s] = r;
                    break;
                }
            }
        }
    }

    double max_excluding(int skip_a, int skip_b) const {
        for (int s = 0; s < 3; ++s)
            if (idx[s] >= 0 && idx[s] != skip_a && idx[s] != skip_b) return len[s];
        return 0.0;
    }
};

bool is_admissible(double gain, double new_max, double z) {
    return (gain > kImproveTol && new_max <= z) || new_max < z - kImproveTol;
}

/// Greedy-or-roulette pick over collected moves; gains weight the roulette
/// as exp(gain / z) with the exponent clamped.
template <typename MoveT>
const MoveT& select_move(const std::vector<MoveT>& moves, double z, double d_rate, Rng& rng) {
    if (rng.next_double() < d_rate) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < moves.size(); ++i)
            if (moves[i].gain > moves[best].gain) best = i;
        return moves[best];
    }
    std::vector<double> w(moves.size());
    const double zz = z > 0.0 ? z : 1.0;
    for (std::size_t i = 0; i < moves.size(); ++i)
        w[i] = std::exp(std::clamp(moves[i].gain / zz, -kExpClamp, kExpClamp));
    return moves[roulette_index(w, rng)];
}

struct ShiftMove {
    int src, spos, tgt, slot;
    double gain, d_minus, d_plus;
};

struct SwapMove {
    int ra, pa, rb, pb;
    double gain, gain_a, gain_b;
};

} // namespace

void remove_duplicates(Solution& sol, const Instance& inst, double d_rate_improve,
                       Rng& rng) {
    std::vector<int> count(inst.n_cities() + 1, 0);
    for (const auto& r : sol.routes)
        for (int c : r.seq) ++count[c];
    for (int c = 1; c <= inst.n_cities(); ++c)
        if (count[c] == 0)
            throw std::logic_error("remove_duplicates: city " + std::to_string(c) +
                                   " is covered by no route");

    int duplicated = 0;
    for (int c = 1; c <= inst.n_cities(); ++c)
        if (count[c] > 1) ++duplicated;

    struct Occurrence {
        int route, pos;
        double delta, score;
    };
    std::vector<Occurrence> occ;
    while (duplicated > 0) {
        occ.clear();
        for (int r = 0; r < static_cast<int>(sol.routes.size()); ++r) {
            const auto& seq = sol.routes[r].seq;
            for (std::size_t i = 0; i < seq.size(); ++i) {
                if (count[seq[i]] < 2) continue;
                double delta = removal_gain(inst, seq, i);
                if (delta < -kImproveTol)
                    throw std::logic_error("remove_duplicates: negative removal gain");
                occ.push_back({r, static_cast<int>(i), delta, delta * sol.routes[r].length});
            }
        }

        std::size_t pick = 0;
        if (rng.next_double() < d_rate_improve) {
            for (std::size_t i = 1; i < occ.size(); ++i)
                if (occ[i].score > occ[pick].score) pick = i;
        } else {
            std::vector<double> w(occ.size());
            for (std::size_t i = 0; i < occ.size(); ++i) w[i] = occ[i].score;
            pick = roulette_index(w, rng);
        }

        const Occurrence chosen = occ[pick];
        auto& route = sol.routes[chosen.route];
        int city = route.seq[chosen.pos];
        route.seq.erase(route.seq.begin() + chosen.pos);
        route.length -= chosen.delta;
        if (--count[city] == 1) --duplicated;
        sol.refresh_objective();
        if (detail::audit_moves) audit_solution(sol, inst, "remove_duplicates");
    }
}

bool shift_pass(Solution& sol, const Instance& inst, double d_rate_improve, Rng& rng,
                bool restrict_to_longest, MoveTrace* trace) {
    const int m = static_cast<int>(sol.routes.size());
    if (m < 2) return false;

    RemovalGains rem(sol, inst);
    std::vector<std::pair<int, int>> slots; // (route, position), reshuffled per step
    std::vector<ShiftMove> moves;
    bool any = false;

    for (;;) {
        const double z = sol.z;
        TopLengths top(sol);

        slots.clear();
        for (int r = 0; r < m; ++r)
            for (int i = 0; i < static_cast<int>(sol.routes[r].seq.size()); ++i)
                slots.emplace_back(r, i);
        rng.shuffle(slots);

        moves.clear();
        for (auto [src, spos] : slots) {
            const auto& sseq = sol.routes[src].seq;
            const int u = sseq[spos];
            const double d_minus = rem[u];
            const double new_src = sol.routes[src].length - d_minus;
            const bool src_longest = sol.routes[src].length == z;
            for (int tgt = 0; tgt < m; ++tgt) {
                if (tgt == src) continue;
                if (restrict_to_longest && !src_longest && sol.routes[tgt].length != z)
                    continue;
                const auto& tseq = sol.routes[tgt].seq;
                const double max_other = top.max_excluding(src, tgt);
                for (int slot = 0; slot <= static_cast<int>(tseq.size()); ++slot) {
                    double d_plus = insertion_cost(inst, tseq, slot, u);
                    double new_tgt = sol.routes[tgt].length + d_plus;
                    double new_max = std::max({new_src, new_tgt, max_other});
                    double gain = d_minus - d_plus;
                    if (is_admissible(gain, new_max, z))
                        moves.push_back({src, spos, tgt, slot, gain, d_minus, d_plus});
                }
            }
        }
        if (moves.empty()) break;

        const ShiftMove mv = select_move(moves, z, d_rate_improve, rng);
        auto& srcr = sol.routes[mv.src];
        auto& tgtr = sol.routes[mv.tgt];
        const int u = srcr.seq[mv.spos];
        srcr.seq.erase(srcr.seq.begin() + mv.spos);
        tgtr.seq.insert(tgtr.seq.begin() + mv.slot, u);
        srcr.length -= mv.d_minus;
        tgtr.length += mv.d_plus;
        sol.refresh_objective();

        // Only the moved city and its old/new neighbors change removal gains.
        rem.refresh(srcr.seq, mv.spos == 0 ? 0 : mv.spos - 1);
        rem.refresh(srcr.seq, mv.spos);
        rem.refresh(tgtr.seq, mv.slot);
        if (mv.slot > 0) rem.refresh(tgtr.seq, mv.slot - 1);
        rem.refresh(tgtr.seq, mv.slot + 1);

        if (detail::audit_moves) {
            audit_solution(sol, inst, "shift_pass");
            rem.audit(sol);
        }
        if (trace) trace->emplace_back(sol.z, sol.total);
        any = true;
    }
    return any;
}

bool swap_pass(Solution& sol, const Instance& inst, double d_rate_improve, Rng& rng,
               bool restrict_to_longest, MoveTrace* trace) {
    const int m = static_cast<int>(sol.routes.size());
    if (m < 2) return false;

    std::vector<std::pair<int, int>> slots;
    std::vector<SwapMove> moves;
    bool any = false;

    for (;;) {
        const double z = sol.z;
        TopLengths top(sol);

        slots.clear();
        for (int r = 0; r < m; ++r)
            for (int i = 0; i < static_cast<int>(sol.routes[r].seq.size()); ++i)
                slots.emplace_back(r, i);
        rng.shuffle(slots);

        moves.clear();
        for (std::size_t si = 0; si < slots.size(); ++si) {
            auto [ra, pa] = slots[si];
            const auto& aseq = sol.routes[ra].seq;
            const int u = aseq[pa];
            const int a1 = neighbor_before(aseq, pa);
            const int a2 = neighbor_after(aseq, pa);
            const bool a_longest = sol.routes[ra].length == z;
            for (std::size_t sj = si + 1; sj < slots.size(); ++sj) {
                auto [rb, pb] = slots[sj];
                if (rb == ra) continue;
                if (restrict_to_longest && !a_longest && sol.routes[rb].length != z)
                    continue;
                const auto& bseq = sol.routes[rb].seq;
                const int v = bseq[pb];
                const int b1 = neighbor_before(bseq, pb);
                const int b2 = neighbor_after(bseq, pb);
                double gain_a = inst.dist(a1, u) + inst.dist(u, a2) -
                                inst.dist(a1, v) - inst.dist(v, a2);
                double gain_b = inst.dist(b1, v) + inst.dist(v, b2) -
                                inst.dist(b1, u) - inst.dist(u, b2);
                double gain = gain_a + gain_b;
                double new_a = sol.routes[ra].length - gain_a;
                double new_b = sol.routes[rb].length - gain_b;
                double new_max = std::max({new_a, new_b, top.max_excluding(ra, rb)});
                if (is_admissible(gain, new_max, z))
                    moves.push_back({ra, pa, rb, pb, gain, gain_a, gain_b});
            }
        }
        if (moves.empty()) break;

        const SwapMove mv = select_move(moves, z, d_rate_improve, rng);
        auto& ar = sol.routes[mv.ra];
        auto& br = sol.routes[mv.rb];
        std::swap(ar.seq[mv.pa], br.seq[mv.pb]);
        ar.length -= mv.gain_a;
        br.length -= mv.gain_b;
        sol.refresh_objective();

        if (detail::audit_moves) audit_solution(sol, inst, "swap_pass");
        if (trace) trace->emplace_back(sol.z, sol.total);
        any = true;
    }
    return any;
}

void inter_route_pass(Solution& sol, const Instance& inst, double d_rate_improve,
                      Rng& rng, bool restrict_to_longest, MoveTrace* trace) {
    shift_pass(sol, inst, d_rate_improve, rng, restrict_to_longest, trace);
    swap_pass(sol, inst, d_rate_improve, rng, restrict_to_longest, trace);
    // Re-check shifts; if any apply, the swap neighborhood may have
    // reopened, so alternate until one full round applies nothing. Each
    // accepted move strictly lowers (z, total), so this terminates.
    while (shift_pass(sol, inst, d_rate_improve, rng, restrict_to_longest, trace)) {
        if (!swap_pass(sol, inst, d_rate_improve, rng, restrict_to_longest, trace)) break;
    }
}

void improve(Solution& sol, const Instance& inst, double d_rate_improve, Rng& rng,
             MoveTrace* trace) {
    remove_duplicates(sol, inst, d_rate_improve, rng);
    inter_route_pass(sol, inst, d_rate_improve, rng, /*restrict_to_longest=*/false, trace);
    sol.recompute(inst);
}

} // namespace mmtsp
