#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "hambias/graph.hpp"
#include "hambias/rational.hpp"

namespace hambias {

namespace detail {

// Edmonds' blossom algorithm over adjacency lists. Augmenting-path search
// with blossom contraction through base[] relabelling; O(V^3) overall.
class BlossomMatcher {
public:
    explicit BlossomMatcher(const Graph& g)
        : n_(g.vertex_count()), match_(n_, -1), parent_(n_), base_(n_), outer_(n_), blossom_(n_) {
        adj_.reserve(n_);
        for (int v = 0; v < n_; ++v) adj_.push_back(g.neighbours(v));
    }

    void solve() {
        greedy_init();
        for (int v = 0; v < n_; ++v) {
            if (match_[v] != -1) continue;
            int leaf = find_augmenting_path({v});
            if (leaf != -1) augment(leaf);
        }
    }

    const std::vector<int>& mates() const { return match_; }

    // Vertices missed by some maximum matching: the outer vertices of a final
    // multi-source search phase from every exposed vertex. Requires solve().
    std::vector<int> exposed_reachable() {
        std::vector<int> roots;
        for (int v = 0; v < n_; ++v)
            if (match_[v] == -1) roots.push_back(v);
        if (!roots.empty()) {
            int leaf = find_augmenting_path(roots);
            if (leaf != -1) throw std::logic_error("blossom: matching was not maximum");
        }
        std::vector<int> out;
        for (int v = 0; v < n_; ++v)
            if (!roots.empty() && outer_[v]) out.push_back(v);
        return out;
    }

private:
    void greedy_init() {
        for (int v = 0; v < n_; ++v) {
            if (match_[v] != -1) continue;
            for (int u : adj_[v]) {
                if (match_[u] == -1) {
                    match_[v] = u;
                    match_[u] = v;
                    break;
                }
            }
        }
    }

    int lowest_common_base(int a, int b) {
        std::vector<char> mark(n_, 0);
        int x = a;
        for (int guard = 0; guard <= n_; ++guard) {
            x = base_[x];
            mark[x] = 1;
            if (match_[x] == -1) break;
            x = parent_[match_[x]];
        }
        int y = b;
        for (int guard = 0; guard <= n_; ++guard) {
            y = base_[y];
            if (mark[y]) return y;
            if (match_[y] == -1 || parent_[match_[y]] == -1) break;
            y = parent_[match_[y]];
        }
        throw std::logic_error("blossom: no common base");
    }

    void mark_blossom_path(int v, int stop, int child) {
        while (base_[v] != stop) {
            blossom_[base_[v]] = 1;
            blossom_[base_[match_[v]]] = 1;
            parent_[v] = child;
            child = match_[v];
            v = parent_[match_[v]];
        }
    }

    // Returns an exposed leaf completing an augmenting path, or -1.
    int find_augmenting_path(const std::vector<int>& roots) {
        std::fill(parent_.begin(), parent_.end(), -1);
        std::fill(outer_.begin(), outer_.end(), 0);
        for (int v = 0; v < n_; ++v) base_[v] = v;
        std::vector<char> is_root(n_, 0);
        std::queue<int> q;
        for (int r : roots) {
            is_root[r] = 1;
            outer_[r] = 1;
            q.push(r);
        }
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int to : adj_[v]) {
                if (base_[v] == base_[to] || match_[v] == to) continue;
                if (is_root[to] || (match_[to] != -1 && parent_[match_[to]] != -1)) {
                    int stop = lowest_common_base(v, to);
                    std::fill(blossom_.begin(), blossom_.end(), 0);
                    mark_blossom_path(v, stop, to);
                    mark_blossom_path(to, stop, v);
                    for (int i = 0; i < n_; ++i) {
                        if (blossom_[base_[i]]) {
                            base_[i] = stop;
                            if (!outer_[i]) {
                                outer_[i] = 1;
                                q.push(i);
                            }
                        }
                    }
                } else if (parent_[to] == -1) {
                    parent_[to] = v;
                    if (match_[to] == -1) return to;
                    outer_[match_[to]] = 1;
                    q.push(match_[to]);
                }
            }
        }
        return -1;
    }

    void augment(int leaf) {
        int v = leaf;
        while (v != -1) {
            int pv = parent_[v];
            int next = match_[pv];
            match_[v] = pv;
            match_[pv] = v;
            v = next;
        }
    }

    int n_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> match_, parent_, base_;
    std::vector<char> outer_, blossom_;
};

}  // namespace detail

inline Matching max_matching(const Graph& g) {
    detail::BlossomMatcher solver(g);
    solver.solve();
    Matching m;
    const auto& mate = solver.mates();
    for (int v = 0; v < g.vertex_count(); ++v)
        if (mate[v] > v) m.add(Edge(v, mate[v]));
    return m;
}

// Component counts of the graph induced on V minus `removed`.
struct ComponentCounts {
    int components = 0;
    int odd_components = 0;
};

inline ComponentCounts component_counts_without(const Graph& g, const std::vector<int>& removed) {
    int n = g.vertex_count();
    std::vector<char> gone(n, 0), seen(n, 0);
    for (int v : removed) gone[v] = 1;
    ComponentCounts out;
    for (int s = 0; s < n; ++s) {
        if (gone[s] || seen[s]) continue;
        int size = 0;
        std::vector<int> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            ++size;
            for (int w : g.neighbours(v))
                if (!gone[w] && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        ++out.components;
        if (size % 2 == 1) ++out.odd_components;
    }
    return out;
}

struct TutteBergeWitness {
    std::vector<int> separator;  // the set U
    int odd_components = 0;      // odd(G - U)
    int deficiency = 0;          // odd(G - U) - |U|
};

namespace detail {

inline bool next_combination(std::vector<int>& idx, int n) {
    int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace detail

// A set U attaining the maximum of odd(G-U) - |U|, which certifies the
// matching number via mu = (n - deficiency)/2. Exhaustive over subsets of
// size up to mu for small graphs, otherwise read off the exposed-reachable
// vertex set of a maximum matching.
inline TutteBergeWitness tutte_berge_witness(const Graph& g, int exhaustive_threshold = 20) {
    int n = g.vertex_count();
    detail::BlossomMatcher solver(g);
    solver.solve();
    int mu = 0;
    for (int v = 0; v < n; ++v)
        if (solver.mates()[v] != -1) ++mu;
    mu /= 2;
    int target = n - 2 * mu;

    auto finish = [&](std::vector<int> sep) {
        auto counts = component_counts_without(g, sep);
        TutteBergeWitness w;
        w.odd_components = counts.odd_components;
        w.deficiency = counts.odd_components - static_cast<int>(sep.size());
        w.separator = std::move(sep);
        if (w.deficiency != target) throw std::logic_error("tutte_berge_witness: certificate mismatch");
        return w;
    };

    if (n <= exhaustive_threshold) {
        for (int size = 0; size <= n; ++size) {
            std::vector<int> idx(size);
            for (int i = 0; i < size; ++i) idx[i] = i;
            bool more = true;
            while (more) {
                auto counts = component_counts_without(g, idx);
                if (counts.odd_components - size == target) return finish(idx);
                more = size > 0 && detail::next_combination(idx, n);
            }
        }
        throw std::logic_error("tutte_berge_witness: exhaustive search failed");
    }

    // Gallai-Edmonds: D = vertices missed by some maximum matching,
    // A = N(D) \ D is a maximizer.
    std::vector<int> d_set = solver.exposed_reachable();
    std::vector<char> in_d(n, 0);
    for (int v : d_set) in_d[v] = 1;
    std::vector<int> separator;
    for (int v : d_set)
        for (int w : g.neighbours(v))
            if (!in_d[w]) {
                in_d[w] = 1;  // reuse as dedup mark
                separator.push_back(w);
            }
    std::sort(separator.begin(), separator.end());
    return finish(std::move(separator));
}

// Exact value min{d/r, (n-1)/(r+1)}.
inline Rational mono_matching_bound(long long n, int r, long long d) {
    if (r < 1) throw std::invalid_argument("mono_matching_bound: r must be positive");
    if (d < 0 || d > n - 1) throw std::invalid_argument("mono_matching_bound: d out of range");
    return rational_min(Rational(d, r), Rational(n - 1, r + 1));
}

// Best colour class by matching number, ties broken by smallest colour.
// With a total colouring and minimum degree >= 1 the guaranteed lower bound
// ceil(min{delta/r, (n-1)/(r+1)}) always holds and is checked.
inline std::pair<int, Matching> max_mono_matching(const Graph& g, const EdgeColouring& c) {
    if (!c.total_on(g)) throw std::invalid_argument("max_mono_matching: colouring not total on E(G)");
    int best_colour = 0;
    Matching best;
    for (int i = 1; i <= c.colour_count(); ++i) {
        Matching m = max_matching(colour_class(g, c, i));
        if (best_colour == 0 || m.size() > best.size()) {
            best_colour = i;
            best = std::move(m);
        }
    }
    if (best_colour == 0) {
        best_colour = 1;
        best = Matching();
    }
    int delta = g.min_degree();
    if (delta >= 1) {
        long long guaranteed =
            mono_matching_bound(g.vertex_count(), c.colour_count(), delta).ceil();
        if (static_cast<long long>(best.size()) < guaranteed)
            throw std::logic_error("max_mono_matching: guaranteed bound violated");
    }
    return {best_colour, std::move(best)};
}

// Checks c(G) <= sum_v 1/(d(v)+1) and e(G) <= binom(n - c(G) + 1, 2).
// The first inequality is certified exactly through d(v)+1 <= |component(v)|;
// the floating point sum is reported for display only.
struct ComponentBoundsReport {
    int components = 0;
    double inverse_degree_sum = 0.0;
    long long edge_bound = 0;
    bool inverse_degree_ok = false;
    bool edge_bound_ok = false;
};

inline ComponentBoundsReport component_bounds_check(const Graph& g) {
    int n = g.vertex_count();
    ComponentBoundsReport rep;
    std::vector<int> comp_size(n, 0);
    std::vector<char> seen(n, 0);
    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        auto comp = g.component_of(s);
        ++rep.components;
        for (int v : comp) {
            seen[v] = 1;
            comp_size[v] = static_cast<int>(comp.size());
        }
    }
    rep.inverse_degree_ok = true;
    for (int v = 0; v < n; ++v) {
        rep.inverse_degree_sum += 1.0 / (g.degree(v) + 1);
        if (g.degree(v) + 1 > comp_size[v]) rep.inverse_degree_ok = false;
    }
    long long slots = n - rep.components + 1;
    rep.edge_bound = slots * (slots - 1) / 2;
    rep.edge_bound_ok = g.edge_count() <= rep.edge_bound;
    return rep;
}

}  // namespace hambias
