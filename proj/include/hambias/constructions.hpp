#pragma once

#include <stdexcept>
#include <vector>

#include "hambias/graph.hpp"
#include "hambias/rational.hpp"

namespace hambias {

// The three extremal colourings. small_alpha: parts V_1..V_r with
// |V_r| = alpha*n and every edge meeting V_r. med_alpha: parts V_1..V_{r+1}
// with |V_{r+1}| = (1-alpha)*n and every edge meeting the first r parts.
// large_alpha: the complete graph split into r+1 near-equal parts.
enum class ConstructionVariant { small_alpha, med_alpha, large_alpha };

struct ConstructionSpec {
    int n = 0;
    int r = 2;
    Rational alpha{1, 2};  // ignored by large_alpha
    ConstructionVariant variant = ConstructionVariant::large_alpha;
};

struct BuiltConstruction {
    Graph graph;
    EdgeColouring colouring;
    std::vector<std::vector<int>> parts;  // parts[i] holds V_{i+1}
    std::vector<int> part_of;             // 1-based part index per vertex
    ConstructionVariant variant = ConstructionVariant::large_alpha;
};

struct ColourBiasTarget {
    Rational k;
};

// Colour assigned to a pair by part indices (1-based); also defined for pairs
// the built graph omits, which the residual-repair path uses to stay total.
inline int construction_colour(ConstructionVariant variant, int r, int pu, int pv) {
    switch (variant) {
        case ConstructionVariant::small_alpha: {
            if (pu == r && pv == r) return r;
            if (pu == r) return pv;
            if (pv == r) return pu;
            return std::min(pu, pv);
        }
        case ConstructionVariant::med_alpha: {
            int cu = pu == r + 1 ? r : pu;
            int cv = pv == r + 1 ? r : pv;
            return std::min(cu, cv);
        }
        case ConstructionVariant::large_alpha: {
            if (pu == pv) return pu == r + 1 ? r : pu;
            return std::min(pu, pv);
        }
    }
    throw std::logic_error("construction_colour: unknown variant");
}

namespace detail {

// Near-equal split with the larger parts first.
inline std::vector<int> split_sizes(int total, int parts) {
    std::vector<int> sizes(parts, total / parts);
    for (int i = 0; i < total % parts; ++i) ++sizes[i];
    return sizes;
}

inline std::vector<std::vector<int>> assign_contiguous(const std::vector<int>& sizes) {
    std::vector<std::vector<int>> parts(sizes.size());
    int next = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i)
        for (int j = 0; j < sizes[i]; ++j) parts[i].push_back(next++);
    return parts;
}

inline int integral_fraction_of(const Rational& alpha, int n, const char* what) {
    Rational an = alpha * Rational(n);
    if (!an.is_integer()) throw std::invalid_argument(std::string(what) + ": alpha*n is not integral");
    return static_cast<int>(an.num);
}

}  // namespace detail

inline BuiltConstruction build_construction(const ConstructionSpec& spec) {
    const int n = spec.n;
    const int r = spec.r;
    if (r < 2) throw std::invalid_argument("construction: need at least two colours");
    if (n < r + 1) throw std::invalid_argument("construction: need n >= r + 1");

    std::vector<int> part_of(n, -1);
    std::vector<std::vector<int>> parts;

    auto fill_part_of = [&]() {
        for (std::size_t i = 0; i < parts.size(); ++i)
            for (int v : parts[i]) part_of[v] = static_cast<int>(i) + 1;
    };

    Graph g(n);
    EdgeColouring colouring(r);

    switch (spec.variant) {
        case ConstructionVariant::small_alpha: {
            if (spec.alpha < Rational(1, 2) || spec.alpha >= Rational(1))
                throw std::invalid_argument("construction: alpha outside [1/2, 1)");
            int an = detail::integral_fraction_of(spec.alpha, n, "construction");
            if (an >= n) throw std::invalid_argument("construction: alpha*n must be below n");
            std::vector<int> sizes = detail::split_sizes(n - an, r - 1);
            sizes.push_back(an);  // V_r last
            parts = detail::assign_contiguous(sizes);
            fill_part_of();
            for (int u = 0; u < n; ++u) {
                for (int v = u + 1; v < n; ++v) {
                    int pu = part_of[u], pv = part_of[v];
                    if (pu != r && pv != r) continue;
                    Edge e(u, v);
                    g.add_edge(e);
                    colouring.set(e, construction_colour(spec.variant, r, pu, pv));
                }
            }
            break;
        }
        case ConstructionVariant::med_alpha: {
            if (spec.alpha < Rational(1, 2) || spec.alpha >= Rational(1))
                throw std::invalid_argument("construction: alpha outside [1/2, 1)");
            int an = detail::integral_fraction_of(spec.alpha, n, "construction");
            if (an >= n) throw std::invalid_argument("construction: alpha*n must be below n");
            std::vector<int> sizes = detail::split_sizes(an, r);
            sizes.push_back(n - an);  // V_{r+1} last
            parts = detail::assign_contiguous(sizes);
            fill_part_of();
            for (int u = 0; u < n; ++u) {
                for (int v = u + 1; v < n; ++v) {
                    int pu = part_of[u], pv = part_of[v];
                    if (pu == r + 1 && pv == r + 1) continue;
                    Edge e(u, v);
                    g.add_edge(e);
                    colouring.set(e, construction_colour(spec.variant, r, pu, pv));
                }
            }
            break;
        }
        case ConstructionVariant::large_alpha: {
            // |V_{r+1}| is the ceiling part; the rest split near-equally.
            int last = (n + r) / (r + 1);
            std::vector<int> sizes = detail::split_sizes(n - last, r);
            for (int s : sizes)
                if (s < last - 1 || s > last)
                    throw std::invalid_argument("construction: part sizes cannot satisfy constraints");
            sizes.push_back(last);
            parts = detail::assign_contiguous(sizes);
            fill_part_of();
            for (int u = 0; u < n; ++u) {
                for (int v = u + 1; v < n; ++v) {
                    int pu = part_of[u], pv = part_of[v];
                    Edge e(u, v);
                    g.add_edge(e);
                    colouring.set(e, construction_colour(spec.variant, r, pu, pv));
                }
            }
            break;
        }
    }

    return BuiltConstruction{std::move(g), std::move(colouring), std::move(parts), std::move(part_of),
                             spec.variant};
}

// k = min{(2*alpha - 1)n, 2*alpha*n/r, 2n/(r+1)}.
inline ColourBiasTarget colour_bias_target(int n, int r, const Rational& alpha) {
    if (r < 2) throw std::invalid_argument("colour_bias_target: need r >= 2");
    Rational lo = Rational(1, 2) + Rational(1, 2 * static_cast<std::int64_t>(r));
    if (alpha < lo || alpha > Rational(1))
        throw std::invalid_argument("colour_bias_target: alpha out of range");
    Rational nn(n);
    return ColourBiasTarget{rational_min((Rational(2) * alpha - Rational(1)) * nn,
                                         Rational(2) * alpha * nn / Rational(r),
                                         Rational(2) * nn / Rational(r + 1))};
}

// Max colour multiplicity along the cycle is at most 2*ceil(k/2).
inline bool verify_cycle_bias_upper(const Graph& host, const EdgeColouring& colouring,
                                    const HamiltonCycle& cyc, const Rational& k) {
    if (colouring.colour_count() < 2)
        throw std::invalid_argument("verify_cycle_bias_upper: need r >= 2");
    if (!is_hamilton_cycle(host, cyc))
        throw std::invalid_argument("verify_cycle_bias_upper: not a Hamilton cycle of the host");
    long long cap = 2 * (k / Rational(2)).ceil();
    for (auto [colour, count] : colour_count_in_cycle(cyc, colouring))
        if (count > cap) return false;
    return true;
}

// Max colour multiplicity in a perfect matching is at most ceil(k/2).
inline bool verify_matching_bias_upper(const Graph& host, const EdgeColouring& colouring,
                                       const Matching& pm, const Rational& k) {
    int n = host.vertex_count();
    if (n % 2 != 0 || static_cast<int>(pm.size()) * 2 != n)
        throw std::invalid_argument("verify_matching_bias_upper: matching is not perfect");
    for (const auto& e : pm.edges())
        if (!host.has_edge(e))
            throw std::invalid_argument("verify_matching_bias_upper: matching edge outside host");
    long long cap = (k / Rational(2)).ceil();
    std::vector<long long> counts(colouring.colour_count() + 1, 0);
    for (const auto& e : pm.edges()) ++counts[colouring.colour_of(e)];
    for (long long c : counts)
        if (c > cap) return false;
    return true;
}

// Degree fraction for a residual-tight construction: nudges alpha up by a
// margin delta = min{(1-a)/4a, (2a-1)e/8a} and returns the smallest alpha'
// with (1+delta)a <= alpha' <= (1+2delta)a and alpha'*n integral.
inline Rational residual_construction_alpha(const Rational& alpha, const Rational& epsilon, int n) {
    if (alpha <= Rational(1, 2) || alpha >= Rational(1))
        throw std::invalid_argument("residual_construction_alpha: alpha outside (1/2, 1)");
    if (epsilon <= Rational(0)) throw std::invalid_argument("residual_construction_alpha: epsilon <= 0");
    Rational four_a = Rational(4) * alpha;
    Rational delta = rational_min((Rational(1) - alpha) / four_a,
                                  (Rational(2) * alpha - Rational(1)) * epsilon / (Rational(8) * alpha));
    Rational lo = (Rational(1) + delta) * alpha * Rational(n);
    Rational hi = (Rational(1) + Rational(2) * delta) * alpha * Rational(n);
    std::int64_t first = lo.ceil();
    if (Rational(first) > hi)
        throw std::invalid_argument("residual_construction_alpha: no integral multiple in range");
    return Rational(first, n);
}

struct HostIntersection {
    Graph graph;
    EdgeColouring colouring;
    Rational residual;
};

// Restriction of an extremal colouring to the host: keeps E(G) ∩ E(F) with
// inherited colours and reports how residual the intersection is inside G.
inline HostIntersection intersect_with_host(const Graph& f, const EdgeColouring& colouring,
                                            const Graph& g) {
    if (f.vertex_count() != g.vertex_count())
        throw std::invalid_argument("intersect_with_host: vertex sets differ");
    Graph out(g.vertex_count());
    EdgeColouring restricted(colouring.colour_count());
    for (const Edge& e : g.edges()) {
        if (f.has_edge(e)) {
            out.add_edge(e);
            restricted.set(e, colouring.colour_of(e));
        }
    }
    Rational ratio = residual_ratio(g, out);
    return HostIntersection{std::move(out), std::move(restricted), ratio};
}

}  // namespace hambias
