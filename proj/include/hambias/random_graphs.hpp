#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hambias/constructions.hpp"
#include "hambias/graph.hpp"
#include "hambias/posa.hpp"
#include "hambias/rational.hpp"
#include "hambias/rng.hpp"

namespace hambias {

// Each vertex pair appears independently with probability p; the stream of
// coin flips is a pure function of the seed.
inline Graph sample_gnp(int n, double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("sample_gnp: p out of range");
    Graph g(n);
    CounterRng rng(seed);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.next_bernoulli(p)) g.add_edge(u, v);
    return g;
}

// Uniformly random edge ordering; prefix(m) is the m-edge snapshot.
struct GraphProcess {
    int n = 0;
    std::vector<Edge> edge_order;

    Graph prefix(long long m) const {
        if (m < 0 || m > static_cast<long long>(edge_order.size()))
            throw std::out_of_range("process: prefix index out of range");
        Graph g(n);
        for (long long i = 0; i < m; ++i) g.add_edge(edge_order[i]);
        return g;
    }
};

struct HittingTimes {
    long long tau_mindeg2 = -1;
    long long tau_conn = -1;
    long long tau_ham = -1;
    bool decider_flagged = false;  // Hamiltonicity probe ran out of budget twice
};

struct ProcessOptions {
    long long decider_budget = 1000000;
    int decider_restarts = 12;
};

namespace detail {

inline bool decide_hamiltonian(const Graph& g, long long budget, int restarts,
                               std::uint64_t seed, bool* flagged) {
    HamiltonSearchOptions opts;
    opts.rotation_budget = budget;
    opts.restarts = restarts;
    opts.seed = seed;
    opts.use_exact_fallback = g.vertex_count() <= 20;
    auto res = hamilton_with_matching(g, Matching(), opts);
    if (res.success()) return true;
    opts.rotation_budget = budget * 10;
    opts.restarts = restarts * 2;
    opts.seed = seed + 0x9E3779B9ULL;
    res = hamilton_with_matching(g, Matching(), opts);
    if (res.success()) return true;
    if (flagged) *flagged = true;
    return false;
}

}  // namespace detail

// Runs the full process: minimum-degree-2 and connectivity times fall out of
// incremental counters, the Hamiltonicity time out of a binary search with
// the rotation decider (valid because Hamiltonicity is monotone along the
// process).
inline std::pair<GraphProcess, HittingTimes> run_process(int n, std::uint64_t seed,
                                                         const ProcessOptions& opts = {}) {
    if (n < 3) throw std::invalid_argument("run_process: need n >= 3");
    GraphProcess proc;
    proc.n = n;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) proc.edge_order.emplace_back(u, v);
    CounterRng rng(seed);
    rng.shuffle(proc.edge_order);

    HittingTimes times;
    std::vector<int> degree(n, 0), parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    int below_two = n, components = n;
    for (std::size_t i = 0; i < proc.edge_order.size(); ++i) {
        const Edge& e = proc.edge_order[i];
        if (++degree[e.u] == 2) --below_two;
        if (++degree[e.v] == 2) --below_two;
        int ru = find(e.u), rv = find(e.v);
        if (ru != rv) {
            parent[ru] = rv;
            --components;
        }
        long long m = static_cast<long long>(i) + 1;
        if (below_two == 0 && times.tau_mindeg2 < 0) times.tau_mindeg2 = m;
        if (components == 1 && times.tau_conn < 0) times.tau_conn = m;
        if (times.tau_mindeg2 >= 0 && times.tau_conn >= 0) break;
    }

    long long lo = std::max({times.tau_mindeg2, times.tau_conn, static_cast<long long>(n)});
    long long hi = static_cast<long long>(proc.edge_order.size());
    if (detail::decide_hamiltonian(proc.prefix(lo), opts.decider_budget, opts.decider_restarts,
                                   seed ^ 0x5851F42DULL, &times.decider_flagged)) {
        times.tau_ham = lo;
    } else {
        // not Hamiltonian at lo, always Hamiltonian at the full prefix
        while (hi - lo > 1) {
            long long mid = lo + (hi - lo) / 2;
            if (detail::decide_hamiltonian(proc.prefix(mid), opts.decider_budget,
                                           opts.decider_restarts, seed ^ (0x9E37ULL * mid),
                                           &times.decider_flagged))
                hi = mid;
            else
                lo = mid;
        }
        times.tau_ham = hi;
    }
    if (times.tau_ham < times.tau_mindeg2 || times.tau_ham < times.tau_conn)
        throw std::logic_error("run_process: hitting-time ordering violated");
    return {std::move(proc), times};
}

// --- adversarial residual subgraphs ---------------------------------------------

struct ResidualStrategy {
    enum class Kind { construction, random_thinning, greedy_min_degree };
    Kind kind = Kind::greedy_min_degree;
    ConstructionSpec spec;          // construction kind
    double keep_probability = 0.5;  // random_thinning kind
    std::uint64_t seed = 1;
};

struct ResidualResult {
    Graph subgraph;
    Rational achieved{1};
    bool reached_target = false;
    std::optional<EdgeColouring> colouring;  // construction strategy only
};

namespace detail {

inline bool vertex_deficient(const Graph& g, const Graph& h, int v, const Rational& alpha) {
    // d_H(v) >= alpha d_G(v), exactly
    return Rational(h.degree(v)) < alpha * Rational(g.degree(v));
}

}  // namespace detail

// Spanning subgraph driven by the chosen adversary. The construction kind
// intersects the host with an extremal colouring and then repairs deficient
// vertices by re-adding removed edges, largest endpoint deficit first.
inline ResidualResult adversarial_residual(const Graph& g, const Rational& alpha,
                                           const ResidualStrategy& strategy) {
    if (alpha <= Rational(0) || alpha > Rational(1))
        throw std::invalid_argument("adversarial_residual: alpha out of range");
    const int n = g.vertex_count();
    ResidualResult out;

    switch (strategy.kind) {
        case ResidualStrategy::Kind::greedy_min_degree: {
            Graph h = g;
            for (const Edge& e : g.edges()) {
                if (Rational(h.degree(e.u) - 1) >= alpha * Rational(g.degree(e.u)) &&
                    Rational(h.degree(e.v) - 1) >= alpha * Rational(g.degree(e.v)))
                    h.remove_edge(e);
            }
            out.subgraph = std::move(h);
            break;
        }
        case ResidualStrategy::Kind::random_thinning: {
            CounterRng rng(strategy.seed);
            Graph h(n);
            for (const Edge& e : g.edges())
                if (rng.next_bernoulli(strategy.keep_probability)) h.add_edge(e);
            out.subgraph = std::move(h);
            break;
        }
        case ResidualStrategy::Kind::construction: {
            auto built = build_construction(strategy.spec);
            if (built.graph.vertex_count() != n)
                throw std::invalid_argument("adversarial_residual: construction size mismatch");
            auto inter = intersect_with_host(built.graph, built.colouring, g);
            Graph h = std::move(inter.graph);
            EdgeColouring colouring = std::move(inter.colouring);

            // removed host edges, candidates for repair
            std::vector<Edge> removed;
            for (const Edge& e : g.edges())
                if (!h.has_edge(e)) removed.push_back(e);

            auto deficit = [&](int v) {
                // numerator of alpha*d_G(v) - d_H(v), positive when deficient
                return alpha.num * static_cast<long long>(g.degree(v)) -
                       alpha.den * static_cast<long long>(h.degree(v));
            };
            for (;;) {
                // removed stays lexicographically sorted, so the first maximum
                // wins ties
                long long best_score = 0;
                std::size_t best_idx = removed.size();
                for (std::size_t i = 0; i < removed.size(); ++i) {
                    long long score = std::max(deficit(removed[i].u), deficit(removed[i].v));
                    if (score > best_score) {
                        best_score = score;
                        best_idx = i;
                    }
                }
                if (best_score <= 0 || best_idx >= removed.size()) break;
                const Edge e = removed[best_idx];
                h.add_edge(e);
                colouring.set(e, construction_colour(built.variant, strategy.spec.r,
                                                     built.part_of[e.u], built.part_of[e.v]));
                removed.erase(removed.begin() + static_cast<long long>(best_idx));
            }
            out.subgraph = std::move(h);
            out.colouring = std::move(colouring);
            break;
        }
    }

    out.achieved = residual_ratio(g, out.subgraph);
    out.reached_target = out.achieved >= alpha;
    return out;
}

// --- degree profile --------------------------------------------------------------

struct DegreeProfile {
    int min_degree = 0;
    int max_degree = 0;
    bool max_degree_bounded = false;  // max <= 10 n p
    std::vector<int> low_degree_set;  // degree <= n p / divisor
    bool separated = true;            // no two low-degree vertices within distance 5
    std::optional<std::pair<int, int>> close_pair;
};

inline DegreeProfile degree_profile(const Graph& g, double p, double low_degree_divisor = 2500.0) {
    DegreeProfile out;
    int n = g.vertex_count();
    out.min_degree = g.min_degree();
    out.max_degree = g.max_degree();
    out.max_degree_bounded = out.max_degree <= 10.0 * n * p;
    for (int v = 0; v < n; ++v)
        if (g.degree(v) <= n * p / low_degree_divisor) out.low_degree_set.push_back(v);
    out.close_pair = find_close_pair(g, out.low_degree_set, 5);
    out.separated = !out.close_pair.has_value();
    return out;
}

}  // namespace hambias
