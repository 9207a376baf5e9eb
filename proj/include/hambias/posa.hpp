#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "hambias/graph.hpp"
#include "hambias/rational.hpp"
#include "hambias/rng.hpp"

namespace hambias {

// A path in H + M that either uses each matching edge or avoids both of its
// ends. The first vertex stays fixed under rotations.
struct PathState {
    std::vector<int> path;
    Matching matching;

    int fixed_end() const { return path.front(); }
    int free_end() const { return path.back(); }
};

namespace detail {

inline std::vector<int> mate_array(const Graph& h, const Matching& m) {
    std::vector<int> mate(h.vertex_count(), -1);
    for (const auto& e : m.edges()) {
        if (e.v >= h.vertex_count())
            throw std::invalid_argument("matching vertex outside the host graph");
        mate[e.u] = e.v;
        mate[e.v] = e.u;
    }
    return mate;
}

inline bool path_respects_matching(const Graph& h, const std::vector<int>& mate,
                                   const std::vector<int>& path) {
    std::vector<char> on(h.vertex_count(), 0);
    for (int v : path) {
        if (v < 0 || v >= h.vertex_count() || on[v]) return false;
        on[v] = 1;
    }
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        bool matching_edge = mate[path[i]] == path[i + 1];
        if (!matching_edge && !h.has_edge(path[i], path[i + 1])) return false;
    }
    std::vector<char> consecutive(h.vertex_count(), 0);
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        if (mate[path[i]] == path[i + 1]) {
            consecutive[path[i]] = 1;
            consecutive[path[i + 1]] = 1;
        }
    for (int v : path)
        if (mate[v] >= 0 && !consecutive[v]) return false;
    return true;
}

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t edge_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return mix64((static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v));
}

inline std::uint64_t path_hash(const std::vector<int>& path) {
    std::uint64_t h = 0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) h ^= edge_key(path[i], path[i + 1]);
    return h;
}

}  // namespace detail

inline PathState make_path_state(const Graph& h, std::vector<int> path, Matching m) {
    if (path.empty()) throw std::invalid_argument("path state: empty path");
    auto mate = detail::mate_array(h, m);
    if (!detail::path_respects_matching(h, mate, path))
        throw std::invalid_argument("path state: path does not respect the matching");
    return PathState{std::move(path), std::move(m)};
}

// Breaks the edge between path[i] and path[i+1]; needs the chord from path[i]
// to the free end in E(H) and a broken edge outside the matching. The result
// keeps the vertex set, the fixed end, and the matching discipline.
inline PathState rotate(const Graph& h, const PathState& s, int break_index) {
    const auto& p = s.path;
    int k = static_cast<int>(p.size());
    if (break_index < 0 || break_index >= k - 1)
        throw std::out_of_range("rotate: break index out of range");
    if (s.matching.contains(Edge(p[break_index], p[break_index + 1])))
        throw std::invalid_argument("rotate: broken edge lies in the matching");
    if (!h.has_edge(p[break_index], p.back()))
        throw std::invalid_argument("rotate: closing chord absent from H");
    std::vector<int> out(p.begin(), p.begin() + break_index + 1);
    out.insert(out.end(), p.rbegin(), p.rend() - (break_index + 1));
    return PathState{std::move(out), s.matching};
}

// All free endpoints reachable by iterated rotations with the fixed end
// pinned, each with one witnessing path. Full state closure deduplicated by
// path edge-set hash; `exhausted` reports whether the budget cut it short.
struct EndpointClosure {
    std::vector<int> endpoints;
    std::vector<std::vector<int>> paths;
    bool exhausted = true;
};

inline EndpointClosure rotation_endpoint_set(const Graph& h, const Matching& m,
                                             const PathState& s,
                                             std::size_t state_budget = 200000) {
    auto mate = detail::mate_array(h, m);
    if (!detail::path_respects_matching(h, mate, s.path))
        throw std::invalid_argument("rotation_endpoint_set: invalid path state");

    EndpointClosure out;
    std::vector<int> pos(h.vertex_count(), -1);
    std::vector<char> endpoint_seen(h.vertex_count(), 0);
    std::unordered_set<std::uint64_t> seen;
    std::vector<std::vector<int>> queue;

    auto note_endpoint = [&](const std::vector<int>& path) {
        int e = path.back();
        if (!endpoint_seen[e]) {
            endpoint_seen[e] = 1;
            out.endpoints.push_back(e);
            out.paths.push_back(path);
        }
    };

    seen.insert(detail::path_hash(s.path));
    queue.push_back(s.path);
    note_endpoint(s.path);

    for (std::size_t head = 0; head < queue.size(); ++head) {
        if (queue.size() >= state_budget) {
            out.exhausted = false;
            break;
        }
        std::vector<int> p = queue[head];
        int k = static_cast<int>(p.size());
        for (int i = 0; i < k; ++i) pos[p[i]] = i;
        std::uint64_t base_hash = detail::path_hash(p);
        for (int y : h.neighbours(p.back())) {
            int i = pos[y];
            if (i < 0 || i >= k - 2) continue;
            if (mate[p[i]] == p[i + 1]) continue;
            std::uint64_t nh = base_hash ^ detail::edge_key(p[i], p[i + 1]) ^
                               detail::edge_key(p[i], p.back());
            if (!seen.insert(nh).second) continue;
            std::vector<int> np(p.begin(), p.begin() + i + 1);
            np.insert(np.end(), p.rbegin(), p.rend() - (i + 1));
            note_endpoint(np);
            queue.push_back(std::move(np));
        }
        for (int i = 0; i < k; ++i) pos[p[i]] = -1;
    }
    return out;
}

// --- M-respecting 2-expander check -------------------------------------------

struct ExpanderCheckOptions {
    int exhaustive_threshold = 24;
    long long sample_budget = 100000;
    std::uint64_t seed = 1;
};

struct ExpanderReport {
    bool connected = false;
    enum class Method { exhaustive, sampled } verified = Method::exhaustive;
    std::optional<std::vector<int>> violating_set;

    bool is_expander() const { return connected && !violating_set; }
};

namespace detail {

// |N_H(U) \ V(M)| for U given as a sorted vertex list.
inline long long outside_expansion(const Graph& h, const std::vector<int>& mate,
                                   const std::vector<int>& set) {
    std::vector<char> in(h.vertex_count(), 0);
    for (int v : set) in[v] = 1;
    std::vector<char> counted(h.vertex_count(), 0);
    long long total = 0;
    for (int v : set)
        for (int w : h.neighbours(v))
            if (!in[w] && !counted[w]) {
                counted[w] = 1;
                if (mate[w] < 0) ++total;
            }
    return total;
}

}  // namespace detail

// Connectivity plus the subset condition |N_H(U) \ V(M)| >= 2|U| for all U
// with 8|U| <= |V|. Exhaustive for small graphs; otherwise randomized descent
// biased toward sets that expand poorly, with a sampled verdict.
inline ExpanderReport is_m_respecting_expander(const Graph& h, const Matching& m,
                                               const ExpanderCheckOptions& opts = {}) {
    ExpanderReport rep;
    rep.connected = h.is_connected();
    auto mate = detail::mate_array(h, m);
    int n = h.vertex_count();
    int max_size = n / 8;
    if (!rep.connected || max_size == 0) {
        rep.verified = ExpanderReport::Method::exhaustive;
        return rep;
    }

    auto violates = [&](const std::vector<int>& set) {
        return detail::outside_expansion(h, mate, set) < 2 * static_cast<long long>(set.size());
    };

    if (n <= opts.exhaustive_threshold) {
        rep.verified = ExpanderReport::Method::exhaustive;
        std::vector<int> idx;
        std::function<bool(int, int)> rec = [&](int next, int remaining) -> bool {
            if (!idx.empty() && violates(idx)) {
                rep.violating_set = idx;
                return true;
            }
            if (remaining == 0) return false;
            for (int v = next; v < n; ++v) {
                idx.push_back(v);
                if (rec(v + 1, remaining - 1)) return true;
                idx.pop_back();
            }
            return false;
        };
        rec(0, max_size);
        return rep;
    }

    rep.verified = ExpanderReport::Method::sampled;
    CounterRng rng(opts.seed);
    long long evals = 0;
    while (evals < opts.sample_budget) {
        // grow a set greedily from a random seed, preferring low expansion
        std::vector<int> set{static_cast<int>(rng.next_below(n))};
        while (evals < opts.sample_budget) {
            ++evals;
            if (violates(set)) {
                rep.violating_set = set;
                std::sort(rep.violating_set->begin(), rep.violating_set->end());
                return rep;
            }
            if (static_cast<int>(set.size()) >= max_size) break;
            // candidate vertices: neighbours of the set plus a random probe
            int best = -1;
            long long best_score = -1;
            for (int probe = 0; probe < 6; ++probe) {
                int cand = static_cast<int>(rng.next_below(n));
                if (std::find(set.begin(), set.end(), cand) != set.end()) continue;
                set.push_back(cand);
                long long score = detail::outside_expansion(h, mate, set);
                set.pop_back();
                ++evals;
                if (best < 0 || score < best_score) {
                    best = cand;
                    best_score = score;
                }
            }
            for (int v : set)
                for (int w : h.neighbours(v)) {
                    if (std::find(set.begin(), set.end(), w) != set.end()) continue;
                    set.push_back(w);
                    long long score = detail::outside_expansion(h, mate, set);
                    set.pop_back();
                    ++evals;
                    if (best < 0 || score < best_score) {
                        best = w;
                        best_score = score;
                    }
                    if (evals >= opts.sample_budget) break;
                }
            if (best < 0) break;
            set.push_back(best);
        }
    }
    return rep;
}

// --- Hamilton search ----------------------------------------------------------

struct HamiltonSearchOptions {
    long long rotation_budget = 1000000;
    std::uint64_t seed = 1;
    int restarts = 8;
    bool use_exact_fallback = false;  // subset DP for small instances
    int exact_threshold = 20;
};

struct HamiltonSearchResult {
    std::optional<HamiltonCycle> cycle;
    long long rotations_used = 0;
    long long best_path_edges = 0;
    std::string note;

    bool success() const { return cycle.has_value(); }
};

namespace detail {

// Exact M-respecting Hamilton cycle by subset DP. Matching pairs enter the
// path together, so reachable vertex sets are automatically pair-closed.
inline std::optional<HamiltonCycle> hamilton_with_matching_exact(const Graph& h,
                                                                 const Matching& m) {
    int n = h.vertex_count();
    if (n < 3 || n > 22) return std::nullopt;
    auto mate = mate_array(h, m);
    std::vector<std::uint32_t> adj(n, 0);
    for (int v = 0; v < n; ++v)
        for (int w : h.neighbours(v)) adj[v] |= 1u << w;

    int anchor = m.empty() ? 0 : m.edges().front().u;
    std::uint32_t start_set;
    int start_end;
    if (mate[anchor] >= 0) {
        start_set = (1u << anchor) | (1u << mate[anchor]);
        start_end = mate[anchor];
    } else {
        start_set = 1u << anchor;
        start_end = anchor;
    }

    std::vector<std::uint32_t> ends(std::size_t(1) << n, 0);
    ends[start_set] = 1u << start_end;
    std::uint32_t full = (1u << n) - 1;

    for (std::uint32_t s = start_set; s <= full; ++s) {
        std::uint32_t em = ends[s];
        if (!em || (s & start_set) != start_set) continue;
        while (em) {
            int v = __builtin_ctz(em);
            em &= em - 1;
            std::uint32_t cand = adj[v] & ~s;
            while (cand) {
                int u = __builtin_ctz(cand);
                cand &= cand - 1;
                if (mate[u] < 0)
                    ends[s | (1u << u)] |= 1u << u;
                else if (!((s >> mate[u]) & 1))
                    ends[s | (1u << u) | (1u << mate[u])] |= 1u << mate[u];
            }
        }
    }

    std::uint32_t closers = ends[full] & adj[anchor];
    if (!closers) return std::nullopt;

    // walk predecessors back to the anchor
    std::vector<int> rev;
    std::uint32_t s = full;
    int v = __builtin_ctz(closers);
    while (true) {
        rev.push_back(v);
        if (s == start_set) {
            if (mate[anchor] >= 0 && rev.back() != anchor) rev.push_back(anchor);
            break;
        }
        if (mate[v] >= 0) {
            int w = mate[v];
            rev.push_back(w);
            std::uint32_t prev = s & ~(1u << v) & ~(1u << w);
            std::uint32_t cand = adj[w] & prev;
            bool found = false;
            while (cand) {
                int x = __builtin_ctz(cand);
                cand &= cand - 1;
                if ((ends[prev] >> x) & 1) {
                    s = prev;
                    v = x;
                    found = true;
                    break;
                }
            }
            if (!found) return std::nullopt;
        } else {
            std::uint32_t prev = s & ~(1u << v);
            std::uint32_t cand = adj[v] & prev;
            bool found = false;
            while (cand) {
                int x = __builtin_ctz(cand);
                cand &= cand - 1;
                if ((ends[prev] >> x) & 1) {
                    s = prev;
                    v = x;
                    found = true;
                    break;
                }
            }
            if (!found) return std::nullopt;
        }
    }
    std::reverse(rev.begin(), rev.end());
    return HamiltonCycle{std::move(rev)};
}

class PosaEngine {
public:
    PosaEngine(const Graph& h, const Matching& m, std::uint64_t seed, long long budget)
        : h_(h), n_(h.vertex_count()), mate_(mate_array(h, m)), rng_(seed), budget_(budget) {}

    long long used() const { return used_; }
    const std::vector<int>& best_path() const { return best_; }

    bool exhausted() const { return used_ >= budget_; }

    // Restarts until a spanning M-respecting cycle closes or the rotation
    // budget runs out; the restart count only floors the number of attempts.
    std::optional<std::vector<int>> search_cycle(int restarts, int preferred_start = -1) {
        for (int attempt = 0; (attempt < restarts || !exhausted()) && attempt < 1000000; ++attempt) {
            spend();
            if (exhausted() && attempt >= restarts) break;
            int start = pick_start(attempt, preferred_start);
            auto cycle = run_from(start);
            if (cycle) return cycle;
        }
        return std::nullopt;
    }

    // Longest path flavour of the same machinery.
    std::vector<int> search_longest(int restarts) {
        for (int attempt = 0; attempt < restarts && !exhausted(); ++attempt)
            run_from(pick_start(attempt, -1));
        return best_;
    }

private:
    int pick_start(int attempt, int preferred) {
        if (preferred >= 0 && attempt == 0) return preferred;
        if (attempt == 0) {
            int best = 0;
            for (int v = 1; v < n_; ++v)
                if (h_.degree(v) > h_.degree(best)) best = v;
            return best;
        }
        return static_cast<int>(rng_.next_below(n_));
    }

    bool spend(long long c = 1) {
        used_ += c;
        return used_ <= budget_;
    }

    void note_best(const std::vector<int>& path) {
        if (path.size() > best_.size()) best_ = path;
    }

    bool can_enter(int v, const std::vector<char>& used_v) const {
        if (used_v[v]) return false;
        int w = mate_[v];
        return w < 0 || !used_v[w];
    }

    void push_vertex(std::vector<int>& path, std::vector<char>& used_v, int v) {
        path.push_back(v);
        used_v[v] = 1;
        if (mate_[v] >= 0) {
            path.push_back(mate_[v]);
            used_v[mate_[v]] = 1;
        }
    }

    bool extend_back(std::vector<int>& path, std::vector<char>& used_v) {
        int u = path.back();
        scratch_.clear();
        for (int v : h_.neighbours(u))
            if (can_enter(v, used_v)) scratch_.push_back(v);
        if (scratch_.empty()) return false;
        int v = scratch_[rng_.next_below(scratch_.size())];
        push_vertex(path, used_v, v);
        spend();
        return true;
    }

    void greedy_extend(std::vector<int>& path, std::vector<char>& used_v) {
        bool progress = true;
        while (progress && !exhausted()) {
            progress = false;
            while (extend_back(path, used_v))
                if (exhausted()) break;
            std::reverse(path.begin(), path.end());
            if (extend_back(path, used_v)) progress = true;
        }
        note_best(path);
    }

    // One-representative-per-endpoint rotation scan fixing path.front().
    // visit(path) may adopt the path; returning true stops the scan.
    bool closure_scan(const std::vector<int>& path,
                      const std::function<bool(const std::vector<int>&)>& visit) {
        std::vector<char> endpoint_seen(n_, 0);
        std::vector<std::vector<int>> frontier{path};
        endpoint_seen[path.back()] = 1;
        if (visit(path)) return true;
        std::vector<int> pos(n_, -1);
        for (std::size_t head = 0; head < frontier.size(); ++head) {
            std::vector<int> p = frontier[head];
            int k = static_cast<int>(p.size());
            for (int i = 0; i < k; ++i) pos[p[i]] = i;
            for (int y : h_.neighbours(p.back())) {
                int i = pos[y];
                if (i < 0 || i >= k - 2) continue;
                int new_end = p[i + 1];
                if (endpoint_seen[new_end]) continue;
                if (mate_[p[i]] == new_end) continue;
                if (!spend()) break;
                endpoint_seen[new_end] = 1;
                std::vector<int> np(p.begin(), p.begin() + i + 1);
                np.insert(np.end(), p.rbegin(), p.rend() - (i + 1));
                if (visit(np)) {
                    for (int j = 0; j < k; ++j) pos[p[j]] = -1;
                    return true;
                }
                frontier.push_back(std::move(np));
            }
            for (int i = 0; i < k; ++i) pos[p[i]] = -1;
            if (exhausted()) break;
        }
        return false;
    }

    // Rotation-assisted extension at the free end; adopts a longer path.
    bool rotation_extend(std::vector<int>& path, std::vector<char>& used_v) {
        bool adopted = false;
        std::vector<int> adopted_path;
        closure_scan(path, [&](const std::vector<int>& p) {
            int u = p.back();
            for (int v : h_.neighbours(u)) {
                if (can_enter(v, used_v)) {
                    adopted_path = p;
                    adopted = true;
                    return true;
                }
            }
            return false;
        });
        if (!adopted) return false;
        path = std::move(adopted_path);
        greedy_extend(path, used_v);
        return true;
    }

    // Close a spanning path to a cycle through rotations at either end.
    std::optional<std::vector<int>> close_spanning(std::vector<int>& path) {
        for (int side = 0; side < 2; ++side) {
            int anchor = path.front();
            std::vector<int> found;
            closure_scan(path, [&](const std::vector<int>& p) {
                if (h_.has_edge(anchor, p.back())) {
                    found = p;
                    return true;
                }
                return false;
            });
            if (!found.empty()) return found;
            std::reverse(path.begin(), path.end());
        }
        return std::nullopt;
    }

    // Turn a non-spanning cycle into a longer path by leaving the cycle.
    bool open_cycle(std::vector<int>& path, std::vector<char>& used_v,
                    const std::vector<int>& cycle) {
        int k = static_cast<int>(cycle.size());
        for (int j = 0; j < k; ++j) {
            int x = cycle[j];
            for (int w : h_.neighbours(x)) {
                if (!can_enter(w, used_v)) continue;
                // break a non-matching cycle edge at x
                int succ = cycle[(j + 1) % k];
                int pred = cycle[(j - 1 + k) % k];
                std::vector<int> np;
                np.reserve(k + 2);
                if (mate_[x] != succ) {
                    for (int step = 1; step <= k; ++step) np.push_back(cycle[(j + step) % k]);
                } else if (mate_[x] != pred) {
                    for (int step = 1; step <= k; ++step) np.push_back(cycle[(j - step + 2 * k) % k]);
                } else {
                    continue;
                }
                path = std::move(np);
                push_vertex(path, used_v, w);
                spend();
                note_best(path);
                return true;
            }
        }
        return false;
    }

    // Try to form any cycle on the current path's vertex set, then leave it.
    bool cycle_then_open(std::vector<int>& path, std::vector<char>& used_v) {
        int anchor = path.front();
        std::vector<int> closed;
        closure_scan(path, [&](const std::vector<int>& p) {
            if (h_.has_edge(anchor, p.back())) {
                closed = p;
                return true;
            }
            return false;
        });
        if (closed.empty()) return false;
        return open_cycle(path, used_v, closed);
    }

    std::optional<std::vector<int>> run_from(int start) {
        std::vector<char> used_v(n_, 0);
        std::vector<int> path;
        push_vertex(path, used_v, start);
        greedy_extend(path, used_v);

        int spanning_kicks = 0;
        while (!exhausted()) {
            if (static_cast<int>(path.size()) == n_) {
                auto cycle = close_spanning(path);
                if (cycle) return cycle;
                if (++spanning_kicks > 12) return std::nullopt;
                // adopt a random rotated representative to reshuffle endpoints
                std::vector<std::vector<int>> reprs;
                closure_scan(path, [&](const std::vector<int>& p) {
                    reprs.push_back(p);
                    return reprs.size() >= 32;
                });
                if (reprs.size() <= 1) return std::nullopt;
                path = reprs[1 + rng_.next_below(reprs.size() - 1)];
                std::reverse(path.begin(), path.end());
                continue;
            }
            if (rotation_extend(path, used_v)) continue;
            std::reverse(path.begin(), path.end());
            if (rotation_extend(path, used_v)) continue;
            if (cycle_then_open(path, used_v)) {
                greedy_extend(path, used_v);
                continue;
            }
            return std::nullopt;
        }
        return std::nullopt;
    }

    const Graph& h_;
    int n_;
    std::vector<int> mate_;
    CounterRng rng_;
    long long budget_;
    long long used_ = 0;
    std::vector<int> best_;
    std::vector<int> scratch_;
};

}  // namespace detail

// Searches for a Hamilton cycle of H + M containing every matching edge.
// Greedy growth plus rotation closures, bounded by the rotation budget; a
// failure reports the longest path reached.
inline HamiltonSearchResult hamilton_with_matching(const Graph& h, const Matching& m,
                                                   const HamiltonSearchOptions& opts = {}) {
    HamiltonSearchResult out;
    int n = h.vertex_count();
    auto mate = detail::mate_array(h, m);  // validates vertex range
    if (n < 3) {
        out.note = "no cycle exists below three vertices";
        return out;
    }

    detail::PosaEngine engine(h, m, opts.seed, opts.rotation_budget);
    auto cycle_path = engine.search_cycle(opts.restarts);
    out.rotations_used = engine.used();
    out.best_path_edges =
        engine.best_path().empty() ? 0 : static_cast<long long>(engine.best_path().size()) - 1;

    std::optional<HamiltonCycle> cycle;
    if (cycle_path) cycle = HamiltonCycle{std::move(*cycle_path)};
    if (!cycle && opts.use_exact_fallback && n <= opts.exact_threshold)
        cycle = detail::hamilton_with_matching_exact(h, m);

    if (!cycle) {
        out.note = "rotation budget exhausted";
        return out;
    }

    // verify before returning: spanning, edges in H + M, all matching edges used
    const auto& order = cycle->order;
    std::vector<char> seen(n, 0);
    for (int v : order) {
        if (seen[v]) throw std::logic_error("hamilton_with_matching: repeated vertex");
        seen[v] = 1;
    }
    if (static_cast<int>(order.size()) != n)
        throw std::logic_error("hamilton_with_matching: cycle not spanning");
    std::size_t matched_edges = 0;
    for (int i = 0; i < n; ++i) {
        int u = order[i], v = order[(i + 1) % n];
        if (mate[u] == v)
            ++matched_edges;
        else if (!h.has_edge(u, v))
            throw std::logic_error("hamilton_with_matching: edge outside H + M");
    }
    if (matched_edges != m.size())
        throw std::logic_error("hamilton_with_matching: matching edge missing from cycle");
    out.cycle = std::move(cycle);
    return out;
}

// --- boosters -----------------------------------------------------------------

// At most two vertex pairs whose addition lengthens a longest M-respecting
// path or completes an M-respecting Hamilton cycle.
struct Booster {
    std::vector<Edge> pairs;
};

struct BoosterOptions {
    int exact_threshold = 18;      // exact longest path below this size
    std::size_t closure_states = 200000;
    long long search_budget = 200000;
    std::uint64_t seed = 1;
    bool check_expander = true;
};

struct BoosterSearchResult {
    enum class Status { already_hamiltonian, booster_found, failed };
    Status status = Status::failed;
    std::optional<HamiltonCycle> cycle;
    std::optional<Booster> booster;
    bool longest_path_exact = false;
    long long pairs_scanned = 0;  // endpoint pairs examined, diagnostic only
    std::string note;
};

namespace detail {

// Exact longest M-respecting path via the same subset DP as the cycle solver.
inline std::vector<int> longest_m_respecting_path_exact(const Graph& h, const Matching& m) {
    int n = h.vertex_count();
    auto mate = mate_array(h, m);
    std::vector<std::uint32_t> adj(n, 0);
    for (int v = 0; v < n; ++v)
        for (int w : h.neighbours(v)) adj[v] |= 1u << w;

    std::vector<std::uint32_t> ends(std::size_t(1) << n, 0);
    for (int v = 0; v < n; ++v)
        if (mate[v] < 0) ends[1u << v] |= 1u << v;
    for (const auto& e : m.edges()) {
        std::uint32_t s = (1u << e.u) | (1u << e.v);
        ends[s] |= s;
    }
    std::uint32_t best_set = 0;
    int best_count = 0;
    for (std::uint32_t s = 1; s < (std::uint32_t(1) << n); ++s) {
        std::uint32_t em = ends[s];
        if (!em) continue;
        int cnt = __builtin_popcount(s);
        if (cnt > best_count) {
            best_count = cnt;
            best_set = s;
        }
        while (em) {
            int v = __builtin_ctz(em);
            em &= em - 1;
            std::uint32_t cand = adj[v] & ~s;
            while (cand) {
                int u = __builtin_ctz(cand);
                cand &= cand - 1;
                if (mate[u] < 0)
                    ends[s | (1u << u)] |= 1u << u;
                else if (!((s >> mate[u]) & 1))
                    ends[s | (1u << u) | (1u << mate[u])] |= 1u << mate[u];
            }
        }
    }

    std::uint32_t s = best_set;
    int v = __builtin_ctz(ends[s]);
    std::vector<int> rev;
    while (true) {
        rev.push_back(v);
        std::uint32_t prev;
        int hops = 1;
        if (mate[v] >= 0) {
            rev.push_back(mate[v]);
            prev = s & ~(1u << v) & ~(1u << mate[v]);
            hops = 2;
        } else {
            prev = s & ~(1u << v);
        }
        if (!prev) break;
        int from = hops == 2 ? mate[v] : v;
        std::uint32_t cand = adj[from] & prev;
        bool found = false;
        while (cand) {
            int x = __builtin_ctz(cand);
            cand &= cand - 1;
            if ((ends[prev] >> x) & 1) {
                s = prev;
                v = x;
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("longest path reconstruction failed");
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

}  // namespace detail

// Rotation-driven booster search: take a longest M-respecting path, close the
// rotation endpoint sets from both ends, and scan endpoint pairs. A missing
// pair between co-reachable endpoints boosts (connectivity turns the closed
// cycle into a longer path); an existing pair either certifies a Hamilton
// cycle or hands back a longer path to continue from.
inline BoosterSearchResult find_booster(const Graph& h0, const Matching& m,
                                        const BoosterOptions& opts = {}) {
    BoosterSearchResult out;
    int n = h0.vertex_count();
    auto mate = detail::mate_array(h0, m);
    if (n < 3) {
        out.note = "host too small";
        return out;
    }
    if (opts.check_expander) {
        auto rep = is_m_respecting_expander(h0, m);
        if (!rep.is_expander()) {
            out.note = "host is not an M-respecting 2-expander";
            return out;
        }
    }

    std::vector<int> path;
    if (n <= opts.exact_threshold) {
        path = detail::longest_m_respecting_path_exact(h0, m);
        out.longest_path_exact = true;
    } else {
        detail::PosaEngine engine(h0, m, opts.seed, opts.search_budget);
        auto cycle = engine.search_cycle(8);
        if (cycle) {
            out.status = BoosterSearchResult::Status::already_hamiltonian;
            out.cycle = HamiltonCycle{std::move(*cycle)};
            return out;
        }
        path = engine.best_path();
    }
    if (path.empty()) {
        out.note = "no path found";
        return out;
    }

    for (int round = 0; round < n; ++round) {
        PathState state{path, m};
        auto closure = rotation_endpoint_set(h0, m, state, opts.closure_states);
        bool advanced = false;
        for (std::size_t i = 0; i < closure.endpoints.size() && !advanced; ++i) {
            const auto& p_u = closure.paths[i];
            std::vector<int> reversed(p_u.rbegin(), p_u.rend());
            PathState rev_state{reversed, m};
            auto second = rotation_endpoint_set(h0, m, rev_state, opts.closure_states);
            for (std::size_t j = 0; j < second.endpoints.size(); ++j) {
                int u = reversed.front();  // fixed end of the second closure
                int v = second.endpoints[j];
                if (u == v) continue;
                ++out.pairs_scanned;
                if (!h0.has_edge(u, v)) {
                    if (mate[u] == v) continue;
                    out.status = BoosterSearchResult::Status::booster_found;
                    out.booster = Booster{{Edge(u, v)}};
                    return out;
                }
                // edge exists: the closed cycle spans or yields a longer path
                const auto& q = second.paths[j];
                if (static_cast<int>(q.size()) == n) {
                    std::vector<int> order = q;
                    out.status = BoosterSearchResult::Status::already_hamiltonian;
                    out.cycle = HamiltonCycle{std::move(order)};
                    return out;
                }
                std::vector<char> on(n, 0);
                for (int x : q) on[x] = 1;
                for (std::size_t idx = 0; idx < q.size() && !advanced; ++idx) {
                    int x = q[idx];
                    for (int w : h0.neighbours(x)) {
                        if (on[w]) continue;
                        if (mate[w] >= 0 && on[mate[w]]) continue;
                        // open the cycle q + uv at x and walk out to w
                        int kq = static_cast<int>(q.size());
                        int succ = idx + 1 < q.size() ? q[idx + 1] : q.front();
                        int pred = idx > 0 ? q[idx - 1] : q.back();
                        std::vector<int> np;
                        np.reserve(kq + 2);
                        if (mate[x] != succ) {
                            for (int step = 1; step <= kq; ++step)
                                np.push_back(q[(idx + step) % kq]);
                        } else if (mate[x] != pred) {
                            for (int step = 1; step <= kq; ++step)
                                np.push_back(q[(idx - step + 2 * kq) % kq]);
                        } else {
                            continue;
                        }
                        np.push_back(w);
                        if (mate[w] >= 0) np.push_back(mate[w]);
                        path = std::move(np);
                        advanced = true;
                        break;
                    }
                }
                if (advanced) break;
            }
        }
        if (!advanced) {
            out.note = "no booster found; expander precondition likely violated";
            return out;
        }
    }
    out.note = "booster search did not converge";
    return out;
}

// --- forced Hamilton cycle through a linear forest ------------------------------

// Needs min degree >= n/2 + t and a prescribed linear forest of at most 2t
// edges inside the host; contracts every forest path to a virtual matching
// edge and closes the contracted instance, then expands back.
inline HamiltonCycle posa_force(const Graph& g, const LinearForest& forest, const Rational& t,
                                const HamiltonSearchOptions& opts = {}) {
    int n = g.vertex_count();
    if (t < Rational(0)) throw std::invalid_argument("posa_force: negative slack");
    if (!forest.valid_in(g))
        throw std::invalid_argument("posa_force: forest not contained in the host");
    if (Rational(forest.size()) > Rational(2) * t)
        throw std::invalid_argument("posa_force: forest larger than 2t");
    if (Rational(g.min_degree()) < Rational(n, 2) + t)
        throw std::invalid_argument("posa_force: minimum degree below n/2 + t");

    // contract paths: drop interiors, pair the endpoints
    std::vector<char> interior(n, 0);
    for (const auto& p : forest.paths())
        for (std::size_t i = 1; i + 1 < p.size(); ++i) interior[p[i]] = 1;
    std::vector<int> keep, position(n, -1);
    for (int v = 0; v < n; ++v)
        if (!interior[v]) {
            position[v] = static_cast<int>(keep.size());
            keep.push_back(v);
        }
    Graph contracted = g.induced(keep);
    Matching virtual_edges;
    for (const auto& p : forest.paths())
        if (p.size() >= 2) virtual_edges.add(Edge(position[p.front()], position[p.back()]));

    HamiltonSearchOptions search = opts;
    search.use_exact_fallback = true;
    auto result = hamilton_with_matching(contracted, virtual_edges, search);
    if (!result.success()) {
        search.rotation_budget = opts.rotation_budget * 10;
        result = hamilton_with_matching(contracted, virtual_edges, search);
    }
    if (!result.success())
        throw std::logic_error("posa_force: search failed although the hypothesis holds");

    // expand the virtual pairs back into their paths
    std::vector<std::vector<int>> expansion(keep.size());
    for (const auto& p : forest.paths()) {
        if (p.size() < 2) continue;
        int a = position[p.front()];
        expansion[a] = p;
    }
    std::vector<int> order;
    const auto& contracted_order = result.cycle->order;
    int k = static_cast<int>(contracted_order.size());
    for (int i = 0; i < k; ++i) {
        int cu = contracted_order[i];
        int cv = contracted_order[(i + 1) % k];
        int u = keep[cu];
        order.push_back(u);
        if (virtual_edges.contains(Edge(cu, cv))) {
            // interior vertices in traversal direction
            const std::vector<int>* p = nullptr;
            bool forward = true;
            if (!expansion[cu].empty() && position[expansion[cu].front()] == cu &&
                position[expansion[cu].back()] == cv) {
                p = &expansion[cu];
            } else if (!expansion[cv].empty() && position[expansion[cv].front()] == cv &&
                       position[expansion[cv].back()] == cu) {
                p = &expansion[cv];
                forward = false;
            }
            if (p) {
                if (forward)
                    for (std::size_t j = 1; j + 1 < p->size(); ++j) order.push_back((*p)[j]);
                else
                    for (std::size_t j = p->size() - 2; j >= 1; --j) order.push_back((*p)[j]);
            }
        }
    }

    HamiltonCycle cycle{std::move(order)};
    if (!is_hamilton_cycle(g, cycle)) throw std::logic_error("posa_force: expansion invalid");
    std::vector<char> edge_on_cycle(n, 0);
    std::vector<std::pair<int, int>> cyc_edges;
    for (int i = 0; i < n; ++i) {
        int u = cycle.order[i], v = cycle.order[(i + 1) % n];
        cyc_edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(cyc_edges.begin(), cyc_edges.end());
    for (const auto& e : forest.edge_list())
        if (!std::binary_search(cyc_edges.begin(), cyc_edges.end(), std::make_pair(e.u, e.v)))
            throw std::logic_error("posa_force: forest edge missing from the cycle");
    return cycle;
}

}  // namespace hambias
