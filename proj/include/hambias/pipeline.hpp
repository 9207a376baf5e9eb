#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hambias/constructions.hpp"
#include "hambias/forest.hpp"
#include "hambias/graph.hpp"
#include "hambias/matching.hpp"
#include "hambias/posa.hpp"
#include "hambias/random_graphs.hpp"

namespace hambias {

struct ExperimentConfig {
    enum class Host { complete, gnp, process_prefix };
    Host host = Host::complete;
    int n = 30;
    double gnp_p = 0.5;
    long long process_edges = 0;

    bool use_adversary = false;
    ResidualStrategy adversary;
    Rational alpha{1};  // minimum-degree fraction driving the bias target

    enum class ColouringSource { construction, random_colours, file };
    ColouringSource colouring = ColouringSource::construction;
    ConstructionSpec construction;
    int colours = 2;  // r for random colourings
    std::optional<EdgeColouring> file_colouring;

    Rational epsilon{1, 4};
    std::vector<std::uint64_t> seeds{1};
    long long rotation_budget = 1000000;
    int forest_max_paths = 8;
    double cleanup_delta = 0.0;  // <= 0 picks epsilon / (8 r)
};

struct ExperimentRecord {
    std::uint64_t seed = 0;
    bool found = false;
    std::string route;  // "dense" or "sparse"
    std::map<int, long long> cycle_colour_counts;
    Rational target_k{0};
    long long target_edges = 0;
    long long achieved_bias = 0;
    long long upper_bound = -1;  // 2 ceil(k/2) under a construction colouring
    double seconds = 0.0;
    std::string failure;
    HamiltonCycle cycle;
};

// Validation route kept separate from the search: rebuilds its own edge set
// and recounts colours directly.
inline bool independent_cycle_check(const Graph& host, const EdgeColouring& colouring,
                                    const HamiltonCycle& cyc,
                                    std::map<int, long long>* counts_out = nullptr) {
    const int n = host.vertex_count();
    if (static_cast<int>(cyc.order.size()) != n || n < 3) return false;
    std::vector<char> seen(n, 0);
    for (int v : cyc.order) {
        if (v < 0 || v >= n || seen[v]) return false;
        seen[v] = 1;
    }
    std::vector<std::pair<int, int>> edge_set;
    for (const Edge& e : host.edges()) edge_set.emplace_back(e.u, e.v);
    std::map<int, long long> counts;
    for (int i = 1; i <= colouring.colour_count(); ++i) counts[i] = 0;
    for (int i = 0; i < n; ++i) {
        int a = cyc.order[i], b = cyc.order[(i + 1) % n];
        auto key = std::make_pair(std::min(a, b), std::max(a, b));
        if (!std::binary_search(edge_set.begin(), edge_set.end(), key)) return false;
        ++counts[colouring.colour_of(Edge(a, b))];
    }
    if (counts_out) *counts_out = std::move(counts);
    return true;
}

// The two alternate-edge perfect matchings of an even cycle, returning the
// one carrying more edges of the cycle's majority colour.
inline std::tuple<Matching, int, long long> perfect_matching_bias(const HamiltonCycle& cyc,
                                                                  const EdgeColouring& c) {
    const int n = static_cast<int>(cyc.order.size());
    if (n % 2 != 0) throw std::invalid_argument("perfect_matching_bias: odd cycle");
    if (n < 4) throw std::invalid_argument("perfect_matching_bias: cycle too short");

    auto counts = colour_count_in_cycle(cyc, c);
    int majority = 1;
    for (auto [colour, count] : counts)
        if (count > counts[majority]) majority = colour;

    long long tally[2] = {0, 0};
    for (int i = 0; i < n; ++i)
        if (c.colour_of(Edge(cyc.order[i], cyc.order[(i + 1) % n])) == majority) ++tally[i % 2];
    int pick = tally[1] > tally[0] ? 1 : 0;
    Matching m;
    for (int i = pick; i < n; i += 2) m.add(Edge(cyc.order[i], cyc.order[(i + 1) % n]));

    long long majority_count = counts[majority];
    long long got = tally[pick];
    if (2 * got < majority_count)
        throw std::logic_error("perfect_matching_bias: pigeonhole failed");
    return {std::move(m), majority, got};
}

namespace detail {

inline Graph build_host(const ExperimentConfig& cfg, std::uint64_t seed) {
    switch (cfg.host) {
        case ExperimentConfig::Host::complete:
            return Graph::complete(cfg.n);
        case ExperimentConfig::Host::gnp:
            return sample_gnp(cfg.n, cfg.gnp_p, seed);
        case ExperimentConfig::Host::process_prefix: {
            GraphProcess proc;
            proc.n = cfg.n;
            for (int u = 0; u < cfg.n; ++u)
                for (int v = u + 1; v < cfg.n; ++v) proc.edge_order.emplace_back(u, v);
            CounterRng rng(seed);
            rng.shuffle(proc.edge_order);
            return proc.prefix(cfg.process_edges);
        }
    }
    throw std::logic_error("build_host: unknown host kind");
}

inline double host_density(const ExperimentConfig& cfg) {
    switch (cfg.host) {
        case ExperimentConfig::Host::complete:
            return 1.0;
        case ExperimentConfig::Host::gnp:
            return cfg.gnp_p;
        case ExperimentConfig::Host::process_prefix: {
            double pairs = 0.5 * cfg.n * (cfg.n - 1);
            return pairs > 0 ? static_cast<double>(cfg.process_edges) / pairs : 0.0;
        }
    }
    return 0.0;
}

}  // namespace detail

// Host -> adversary -> colouring -> monochromatic forest -> Hamilton cycle
// with the forest inside, measured per seed. Dense hosts go through the
// forced-cycle route, everything else through clean-up plus the
// matching-respecting closure on the unused set.
inline std::vector<ExperimentRecord> run_discrepancy_experiment(
    const ExperimentConfig& cfg,
    const std::function<void(const ExperimentRecord&)>& on_record = {}) {
    if (cfg.epsilon <= Rational(0) || cfg.epsilon > Rational(1))
        throw std::invalid_argument("experiment: epsilon out of (0, 1]");
    if (cfg.n < 3) throw std::invalid_argument("experiment: need n >= 3");
    if (cfg.colouring == ExperimentConfig::ColouringSource::file && !cfg.file_colouring)
        throw std::invalid_argument("experiment: file colouring missing");

    std::vector<ExperimentRecord> records;
    for (std::uint64_t seed : cfg.seeds) {
        ExperimentRecord rec;
        rec.seed = seed;
        auto t0 = std::chrono::steady_clock::now();
        try {
            Graph host = detail::build_host(cfg, seed);

            Graph h = host;
            if (cfg.use_adversary) {
                ResidualStrategy strat = cfg.adversary;
                strat.seed = seed ^ 0xADA97ULL;
                h = adversarial_residual(host, cfg.alpha, strat).subgraph;
            }

            int r = cfg.colours;
            EdgeColouring colouring(1);
            bool construction_colouring =
                cfg.colouring == ExperimentConfig::ColouringSource::construction;
            if (construction_colouring) {
                auto built = build_construction(cfg.construction);
                if (built.graph.vertex_count() != cfg.n)
                    throw std::invalid_argument("experiment: construction size mismatch");
                auto inter = intersect_with_host(built.graph, built.colouring, h);
                h = std::move(inter.graph);
                colouring = std::move(inter.colouring);
                r = cfg.construction.r;
            } else if (cfg.colouring == ExperimentConfig::ColouringSource::random_colours) {
                CounterRng rng(seed ^ 0xC0102ULL);
                colouring = EdgeColouring(r);
                for (const Edge& e : h.edges())
                    colouring.set(e, 1 + static_cast<int>(rng.next_below(r)));
            } else {
                colouring = *cfg.file_colouring;
                r = colouring.colour_count();
                for (const Edge& e : h.edges())
                    if (!colouring.contains(e))
                        throw std::invalid_argument("experiment: colouring not total on host");
            }

            // a single colour makes every Hamilton cycle fully biased
            rec.target_k = r == 1 ? Rational(cfg.n) : colour_bias_target(cfg.n, r, cfg.alpha).k;
            rec.target_edges = ((Rational(1) - cfg.epsilon) * rec.target_k).ceil();
            if (construction_colouring)
                rec.upper_bound = 2 * (rec.target_k / Rational(2)).ceil();

            ForestGrowOptions grow;
            grow.seed = seed ^ 0xF09E57ULL;
            auto plan = grow_mono_forest(h, colouring, rec.target_edges, cfg.forest_max_paths, grow);

            HamiltonCycle cycle;
            Rational t = Rational(plan.forest.size()) / Rational(2);
            if (Rational(h.min_degree()) >= Rational(cfg.n, 2) + t) {
                rec.route = "dense";
                HamiltonSearchOptions opts;
                opts.rotation_budget = cfg.rotation_budget;
                opts.seed = seed ^ 0x9057AULL;
                cycle = posa_force(h, plan.forest, t, opts);
            } else {
                rec.route = "sparse";
                double delta = cfg.cleanup_delta > 0
                                   ? cfg.cleanup_delta
                                   : cfg.epsilon.to_double() / (8.0 * r);
                CleanupOptions copts;
                copts.seed = seed ^ 0x5EEDULL;
                auto cleaned = cleanup(host, h, plan, detail::host_density(cfg), delta, copts);
                if (!cleaned.success()) throw std::runtime_error("cleanup failed");
                Matching pairing = endpoints_matching(cleaned);

                // solve on the unused set plus the virtual pairs
                std::vector<int> position(cfg.n, -1);
                for (std::size_t i = 0; i < cleaned.unused.size(); ++i)
                    position[cleaned.unused[i]] = static_cast<int>(i);
                Graph inner = h.induced(cleaned.unused);
                Matching inner_pairs;
                for (const Edge& e : pairing.edges())
                    inner_pairs.add(Edge(position[e.u], position[e.v]));
                HamiltonSearchOptions opts;
                opts.rotation_budget = cfg.rotation_budget;
                opts.seed = seed ^ 0x90B57ULL;
                opts.use_exact_fallback = inner.vertex_count() <= 20;
                auto inner_res = hamilton_with_matching(inner, inner_pairs, opts);
                if (!inner_res.success()) throw std::runtime_error("inner search failed");

                // expand the virtual pairs back into their covered paths
                std::vector<std::vector<int>> path_of(cfg.n);
                for (const auto& p : cleaned.forest_star.paths()) path_of[p.front()] = p;
                const auto& order = inner_res.cycle->order;
                int k = static_cast<int>(order.size());
                std::vector<int> full;
                for (int i = 0; i < k; ++i) {
                    int u = cleaned.unused[order[i]];
                    int v = cleaned.unused[order[(i + 1) % k]];
                    full.push_back(u);
                    if (inner_pairs.contains(Edge(order[i], order[(i + 1) % k]))) {
                        const std::vector<int>* p = nullptr;
                        bool forward = true;
                        if (!path_of[u].empty() && path_of[u].back() == v) {
                            p = &path_of[u];
                        } else if (!path_of[v].empty() && path_of[v].back() == u) {
                            p = &path_of[v];
                            forward = false;
                        }
                        if (!p) throw std::logic_error("experiment: pairing expansion failed");
                        if (forward)
                            for (std::size_t j = 1; j + 1 < p->size(); ++j) full.push_back((*p)[j]);
                        else
                            for (std::size_t j = p->size() - 2; j >= 1; --j) full.push_back((*p)[j]);
                    }
                }
                cycle = HamiltonCycle{std::move(full)};
            }

            std::map<int, long long> counts;
            if (!independent_cycle_check(h, colouring, cycle, &counts))
                throw std::logic_error("experiment: cycle failed independent validation");
            rec.cycle_colour_counts = counts;
            for (auto [colour, count] : counts) rec.achieved_bias = std::max(rec.achieved_bias, count);
            if (construction_colouring && rec.achieved_bias > rec.upper_bound)
                throw std::logic_error("experiment: construction bound exceeded");
            rec.found = true;
            rec.cycle = std::move(cycle);
        } catch (const std::logic_error&) {
            throw;  // internal invariant broke; do not swallow
        } catch (const std::exception& ex) {
            rec.failure = ex.what();
        }
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (on_record) on_record(rec);
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace hambias
