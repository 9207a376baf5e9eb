#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "hambias/rational.hpp"

namespace hambias {

// Undirected edge, stored with u < v.
struct Edge {
    int u = 0;
    int v = 0;

    Edge() = default;
    Edge(int a, int b) : u(std::min(a, b)), v(std::max(a, b)) {
        if (a == b) throw std::invalid_argument("edge: self-loop");
        if (a < 0 || b < 0) throw std::invalid_argument("edge: negative vertex id");
    }

    std::uint64_t key() const {
        return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
    }

    friend bool operator==(const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }
    friend bool operator!=(const Edge& a, const Edge& b) { return !(a == b); }
    friend bool operator<(const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    }
};

// Simple undirected graph on vertex ids 0..n-1 with sorted adjacency lists.
// No self-loops; adjacency is kept symmetric by construction.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n) : adj_(static_cast<std::size_t>(std::max(n, 0))) {
        if (n < 0) throw std::invalid_argument("graph: negative vertex count");
    }

    int vertex_count() const { return static_cast<int>(adj_.size()); }

    bool has_edge(int u, int v) const {
        check_vertex(u);
        check_vertex(v);
        if (u == v) return false;
        const auto& a = adj_[u];
        return std::binary_search(a.begin(), a.end(), v);
    }

    bool has_edge(const Edge& e) const { return has_edge(e.u, e.v); }

    // Idempotent; throws on self-loops and out-of-range ids.
    void add_edge(int u, int v) {
        check_vertex(u);
        check_vertex(v);
        if (u == v) throw std::invalid_argument("graph: self-loop");
        insert_sorted(adj_[u], v);
        insert_sorted(adj_[v], u);
    }
    void add_edge(const Edge& e) { add_edge(e.u, e.v); }

    void remove_edge(int u, int v) {
        check_vertex(u);
        check_vertex(v);
        erase_sorted(adj_[u], v);
        erase_sorted(adj_[v], u);
    }
    void remove_edge(const Edge& e) { remove_edge(e.u, e.v); }

    const std::vector<int>& neighbours(int v) const {
        check_vertex(v);
        return adj_[v];
    }

    int degree(int v) const { return static_cast<int>(neighbours(v).size()); }

    int min_degree() const {
        int d = vertex_count() == 0 ? 0 : degree(0);
        for (int v = 1; v < vertex_count(); ++v) d = std::min(d, degree(v));
        return d;
    }
    int max_degree() const {
        int d = 0;
        for (int v = 0; v < vertex_count(); ++v) d = std::max(d, degree(v));
        return d;
    }

    long long edge_count() const {
        long long s = 0;
        for (const auto& a : adj_) s += static_cast<long long>(a.size());
        return s / 2;
    }

    // Lexicographically sorted edge list.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(static_cast<std::size_t>(edge_count()));
        for (int u = 0; u < vertex_count(); ++u)
            for (int v : adj_[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    bool is_spanning_subgraph_of(const Graph& g) const {
        if (vertex_count() != g.vertex_count()) return false;
        for (int u = 0; u < vertex_count(); ++u)
            for (int v : adj_[u])
                if (u < v && !g.has_edge(u, v)) return false;
        return true;
    }

    // Induced subgraph on `keep` (ids relabelled by position in `keep`).
    Graph induced(const std::vector<int>& keep) const {
        std::vector<int> pos(adj_.size(), -1);
        for (std::size_t i = 0; i < keep.size(); ++i) {
            check_vertex(keep[i]);
            pos[keep[i]] = static_cast<int>(i);
        }
        Graph out(static_cast<int>(keep.size()));
        for (int u : keep)
            for (int v : adj_[u])
                if (pos[v] >= 0 && u < v) out.add_edge(pos[u], pos[v]);
        return out;
    }

    std::vector<int> component_of(int start) const {
        check_vertex(start);
        std::vector<char> seen(adj_.size(), 0);
        std::vector<int> stack{start}, comp;
        seen[start] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (int w : adj_[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        std::sort(comp.begin(), comp.end());
        return comp;
    }

    bool is_connected() const {
        if (vertex_count() <= 1) return true;
        return static_cast<int>(component_of(0).size()) == vertex_count();
    }

    static Graph complete(int n) {
        Graph g(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
        return g;
    }

private:
    void check_vertex(int v) const {
        if (v < 0 || v >= vertex_count()) throw std::out_of_range("graph: vertex id out of range");
    }
    static void insert_sorted(std::vector<int>& a, int v) {
        auto it = std::lower_bound(a.begin(), a.end(), v);
        if (it == a.end() || *it != v) a.insert(it, v);
    }
    static void erase_sorted(std::vector<int>& a, int v) {
        auto it = std::lower_bound(a.begin(), a.end(), v);
        if (it != a.end() && *it == v) a.erase(it);
    }

    std::vector<std::vector<int>> adj_;
};

// Bit-row adjacency for the subset-heavy checks (expander verification,
// rotation scans). Built on demand from a Graph.
class AdjacencyMatrix {
public:
    explicit AdjacencyMatrix(const Graph& g)
        : n_(g.vertex_count()), words_((n_ + 63) / 64), rows_(static_cast<std::size_t>(n_) * words_, 0) {
        for (int u = 0; u < n_; ++u)
            for (int v : g.neighbours(u)) set_bit(row(u), v);
    }

    int vertex_count() const { return n_; }
    int words() const { return words_; }
    const std::uint64_t* row(int v) const { return rows_.data() + static_cast<std::size_t>(v) * words_; }
    std::uint64_t* row(int v) { return rows_.data() + static_cast<std::size_t>(v) * words_; }

    bool has_edge(int u, int v) const { return (row(u)[v >> 6] >> (v & 63)) & 1; }

    static void set_bit(std::uint64_t* w, int v) { w[v >> 6] |= 1ULL << (v & 63); }

private:
    int n_ = 0;
    int words_ = 0;
    std::vector<std::uint64_t> rows_;
};

// Total colouring of a host graph's edges with colours 1..r.
class EdgeColouring {
public:
    explicit EdgeColouring(int colours) : colours_(colours) {
        if (colours < 1) throw std::invalid_argument("colouring: need at least one colour");
    }

    int colour_count() const { return colours_; }

    void set(const Edge& e, int colour) {
        if (colour < 1 || colour > colours_) throw std::out_of_range("colouring: colour out of range");
        map_[e.key()] = colour;
    }

    bool contains(const Edge& e) const { return map_.count(e.key()) > 0; }

    int colour_of(const Edge& e) const {
        auto it = map_.find(e.key());
        if (it == map_.end()) throw std::out_of_range("colouring: edge not coloured");
        return it->second;
    }

    std::size_t size() const { return map_.size(); }

    bool total_on(const Graph& g) const {
        for (const Edge& e : g.edges())
            if (!contains(e)) return false;
        return true;
    }

private:
    int colours_;
    std::unordered_map<std::uint64_t, int> map_;
};

// Set of vertex-disjoint edges. Disjointness enforced on insertion.
class Matching {
public:
    Matching() = default;

    void add(const Edge& e) {
        if (mate_.count(e.u) || mate_.count(e.v))
            throw std::invalid_argument("matching: vertex already covered");
        mate_[e.u] = e.v;
        mate_[e.v] = e.u;
        edges_.push_back(e);
    }

    bool covers(int v) const { return mate_.count(v) > 0; }

    std::optional<int> mate(int v) const {
        auto it = mate_.find(v);
        if (it == mate_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }

    const std::vector<Edge>& edges() const { return edges_; }

    std::vector<int> covered_vertices() const {
        std::vector<int> out;
        out.reserve(mate_.size());
        for (const auto& [v, _] : mate_) out.push_back(v);
        std::sort(out.begin(), out.end());
        return out;
    }

    bool contains(const Edge& e) const {
        auto it = mate_.find(e.u);
        return it != mate_.end() && it->second == e.v;
    }

private:
    std::vector<Edge> edges_;
    std::unordered_map<int, int> mate_;
};

// Vertex-disjoint paths; every path has at least one vertex.
class LinearForest {
public:
    LinearForest() = default;

    // Throws if the path reuses a vertex already spanned.
    void add_path(std::vector<int> path) {
        if (path.empty()) throw std::invalid_argument("forest: empty path");
        for (int v : path) {
            if (used_.count(v)) throw std::invalid_argument("forest: vertex reused across paths");
        }
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            if (path[i] == path[i + 1]) throw std::invalid_argument("forest: repeated vertex");
        for (int v : path) used_.insert({v, true}).first->second = true;
        paths_.push_back(std::move(path));
    }

    const std::vector<std::vector<int>>& paths() const { return paths_; }
    std::size_t path_count() const { return paths_.size(); }

    // Total edge count.
    long long size() const {
        long long s = 0;
        for (const auto& p : paths_) s += static_cast<long long>(p.size()) - 1;
        return s;
    }

    std::vector<int> spanned_vertices() const {
        std::vector<int> out;
        for (const auto& p : paths_) out.insert(out.end(), p.begin(), p.end());
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<Edge> edge_list() const {
        std::vector<Edge> out;
        for (const auto& p : paths_)
            for (std::size_t i = 0; i + 1 < p.size(); ++i) out.emplace_back(p[i], p[i + 1]);
        return out;
    }

    bool spans(int v) const { return used_.count(v) > 0; }

    // Every consecutive pair must be an edge of the host.
    bool valid_in(const Graph& g) const {
        for (const auto& p : paths_) {
            for (int v : p)
                if (v < 0 || v >= g.vertex_count()) return false;
            for (std::size_t i = 0; i + 1 < p.size(); ++i)
                if (!g.has_edge(p[i], p[i + 1])) return false;
        }
        return true;
    }

private:
    std::vector<std::vector<int>> paths_;
    std::unordered_map<int, bool> used_;
};

// Cyclic vertex order of length n.
struct HamiltonCycle {
    std::vector<int> order;
};

inline bool is_hamilton_cycle(const Graph& g, const HamiltonCycle& cyc) {
    int n = g.vertex_count();
    if (static_cast<int>(cyc.order.size()) != n || n < 3) return false;
    std::vector<char> seen(n, 0);
    for (int v : cyc.order) {
        if (v < 0 || v >= n || seen[v]) return false;
        seen[v] = 1;
    }
    for (int i = 0; i < n; ++i)
        if (!g.has_edge(cyc.order[i], cyc.order[(i + 1) % n])) return false;
    return true;
}

// First pair from `vertices` within the given hop distance of each other.
inline std::optional<std::pair<int, int>> find_close_pair(const Graph& g,
                                                          const std::vector<int>& vertices,
                                                          int max_distance) {
    std::vector<char> flagged(g.vertex_count(), 0);
    for (int v : vertices) flagged[v] = 1;
    std::vector<int> dist(g.vertex_count());
    for (int v : vertices) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[v] = 0;
        std::vector<int> frontier{v};
        while (!frontier.empty()) {
            std::vector<int> next;
            for (int x : frontier) {
                if (x != v && flagged[x]) return std::make_pair(std::min(v, x), std::max(v, x));
                if (dist[x] == max_distance) continue;
                for (int w : g.neighbours(x))
                    if (dist[w] < 0) {
                        dist[w] = dist[x] + 1;
                        next.push_back(w);
                    }
            }
            frontier = std::move(next);
        }
    }
    return std::nullopt;
}

// Spanning subgraph made of the colour-i edges.
inline Graph colour_class(const Graph& g, const EdgeColouring& c, int colour) {
    if (colour < 1 || colour > c.colour_count())
        throw std::out_of_range("colour_class: colour out of range");
    Graph out(g.vertex_count());
    for (const Edge& e : g.edges())
        if (c.colour_of(e) == colour) out.add_edge(e);
    return out;
}

// min over vertices with positive host degree of deg_H(v)/deg_G(v); 1 when
// every host degree is zero. H must be a spanning subgraph of G.
inline Rational residual_ratio(const Graph& g, const Graph& h) {
    if (!h.is_spanning_subgraph_of(g))
        throw std::invalid_argument("residual_ratio: H is not a spanning subgraph of G");
    std::optional<Rational> best;
    for (int v = 0; v < g.vertex_count(); ++v) {
        int dg = g.degree(v);
        if (dg == 0) continue;
        Rational r(h.degree(v), dg);
        if (!best || r < *best) best = r;
    }
    return best.value_or(Rational(1));
}

// Per-colour edge counts along the cycle; includes zero entries for every
// colour 1..r so the values always sum to n.
inline std::map<int, long long> colour_count_in_cycle(const HamiltonCycle& cyc,
                                                      const EdgeColouring& c) {
    std::map<int, long long> counts;
    for (int i = 1; i <= c.colour_count(); ++i) counts[i] = 0;
    int n = static_cast<int>(cyc.order.size());
    for (int i = 0; i < n; ++i) {
        Edge e(cyc.order[i], cyc.order[(i + 1) % n]);
        ++counts[c.colour_of(e)];
    }
    return counts;
}

// --- edge-list serialization ------------------------------------------------
//
// Format: header "n m", then one "u v" or "u v colour" line per edge in
// lexicographic order.

inline void write_edge_list(std::ostream& os, const Graph& g,
                            const EdgeColouring* colouring = nullptr) {
    auto es = g.edges();
    os << g.vertex_count() << ' ' << es.size() << '\n';
    for (const Edge& e : es) {
        os << e.u << ' ' << e.v;
        if (colouring) os << ' ' << colouring->colour_of(e);
        os << '\n';
    }
}

struct EdgeListFile {
    Graph graph;
    std::optional<EdgeColouring> colouring;
};

inline EdgeListFile read_edge_list(std::istream& is) {
    long long n = 0, m = 0;
    if (!(is >> n >> m)) throw std::runtime_error("edge list: bad header");
    if (n < 0 || m < 0) throw std::runtime_error("edge list: bad header");
    Graph g(static_cast<int>(n));
    std::vector<std::pair<Edge, int>> coloured;
    bool any_colour = false, any_plain = false;
    std::string line;
    std::getline(is, line);
    for (long long i = 0; i < m; ++i) {
        if (!std::getline(is, line)) throw std::runtime_error("edge list: truncated");
        std::istringstream ls(line);
        int u, v;
        if (!(ls >> u >> v)) throw std::runtime_error("edge list: bad edge line");
        int colour;
        if (ls >> colour) {
            any_colour = true;
            coloured.emplace_back(Edge(u, v), colour);
        } else {
            any_plain = true;
            coloured.emplace_back(Edge(u, v), 0);
        }
        g.add_edge(u, v);
    }
    if (any_colour && any_plain) throw std::runtime_error("edge list: mixed coloured and plain lines");
    EdgeListFile out{std::move(g), std::nullopt};
    if (any_colour) {
        int r = 1;
        for (const auto& [e, col] : coloured) r = std::max(r, col);
        EdgeColouring c(r);
        for (const auto& [e, col] : coloured) {
            if (col < 1) throw std::runtime_error("edge list: colour must be positive");
            c.set(e, col);
        }
        out.colouring = std::move(c);
    }
    return out;
}

}  // namespace hambias
