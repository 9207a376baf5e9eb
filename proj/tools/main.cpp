// Command-line front end: extremal colouring builders, monochromatic matching
// reports, forest growth, matching-constrained Hamilton search, random-graph
// process runs, and batched discrepancy experiments.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hambias/hambias.hpp"
#include "json.hpp"

using json = nlohmann::json;
using namespace hambias;

namespace {

struct SeedRange {
    std::uint64_t first = 1;
    std::uint64_t last = 1;
};

// parses "a..b" or a single seed
SeedRange parse_seed_range(const std::string& text) {
    SeedRange range;
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        range.first = range.last = std::stoull(text);
    } else {
        range.first = std::stoull(text.substr(0, dots));
        range.last = std::stoull(text.substr(dots + 2));
    }
    if (range.last < range.first) throw CLI::ValidationError("seeds", "range end before start");
    return range;
}

ConstructionVariant parse_variant(const std::string& name) {
    if (name == "small") return ConstructionVariant::small_alpha;
    if (name == "med") return ConstructionVariant::med_alpha;
    if (name == "large") return ConstructionVariant::large_alpha;
    throw CLI::ValidationError("variant", "expected small, med, or large");
}

EdgeListFile load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--in", "cannot open " + path);
    return read_edge_list(in);
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw CLI::ValidationError("--out", "cannot open " + path);
    return file;
}

json witness_to_json(const TutteBergeWitness& w) {
    return json{{"separator", w.separator},
                {"odd_components", w.odd_components},
                {"deficiency", w.deficiency}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"colour-biased Hamilton cycle toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML configuration file (sections per subcommand)");

    // ---- construct ----
    auto* construct = app.add_subcommand("construct", "build an extremal colouring");
    std::string variant_name = "large", alpha_text = "1/2", construct_out;
    int cn = 12, cr = 2;
    construct->add_option("--variant", variant_name, "small, med, or large")->required();
    construct->add_option("--n", cn, "vertex count")->required();
    construct->add_option("--r", cr, "colour count")->required();
    construct->add_option("--alpha", alpha_text, "degree fraction p/q (small/med only)");
    construct->add_option("--out", construct_out, "output edge list ('-' for stdout)");

    // ---- monomatch ----
    auto* monomatch = app.add_subcommand("monomatch", "per-colour maximum matchings and witness");
    std::string mm_in, mm_report;
    monomatch->add_option("--in", mm_in, "coloured edge list")->required();
    monomatch->add_option("--report", mm_report, "JSON report path ('-' for stdout)");

    // ---- forest ----
    auto* forest_cmd = app.add_subcommand("forest", "grow a monochromatic linear forest");
    std::string f_in, f_json;
    long long f_target = 0;
    int f_max_paths = 8;
    std::uint64_t f_seed = 1;
    forest_cmd->add_option("--in", f_in, "coloured edge list")->required();
    forest_cmd->add_option("--target", f_target, "edge target")->required();
    forest_cmd->add_option("--max-paths", f_max_paths, "path cap");
    forest_cmd->add_option("--seed", f_seed, "random seed");
    forest_cmd->add_option("--json", f_json, "JSON output path ('-' for stdout)");

    // ---- hamilton ----
    auto* hamilton = app.add_subcommand("hamilton", "Hamilton cycle through a prescribed matching");
    std::string h_in, h_matching;
    long long h_budget = 1000000;
    std::uint64_t h_seed = 1;
    hamilton->add_option("--in", h_in, "host edge list")->required();
    hamilton->add_option("--matching", h_matching, "edge list of prescribed pairs");
    hamilton->add_option("--budget", h_budget, "rotation budget");
    hamilton->add_option("--seed", h_seed, "random seed");

    // ---- process ----
    auto* process = app.add_subcommand("process", "random graph process hitting times");
    int p_n = 100;
    std::string p_seeds = "1..10", p_json;
    process->add_option("--n", p_n, "vertex count")->required();
    process->add_option("--seeds", p_seeds, "seed range a..b")->required();
    process->add_option("--json", p_json, "JSON-lines output path ('-' for stdout)");

    // ---- experiment ----
    auto* experiment = app.add_subcommand("experiment", "batched discrepancy experiments");
    experiment->fallthrough();
    std::string e_host = "complete", e_colouring = "construction", e_variant = "large";
    std::string e_alpha = "1", e_construction_alpha = "1/2", e_epsilon = "1/4";
    std::string e_adversary = "none", e_seeds = "1..10", e_out = "records.jsonl";
    int e_n = 30, e_r = 2, e_max_paths = 8;
    double e_p = 0.5, e_keep = 0.5, e_delta = 0.0;
    long long e_process_edges = 0, e_budget = 1000000;
    experiment->add_option("--host", e_host, "complete, gnp, or process");
    experiment->add_option("--n", e_n, "vertex count");
    experiment->add_option("--p", e_p, "edge probability for gnp hosts");
    experiment->add_option("--process-edges", e_process_edges, "prefix length for process hosts");
    experiment->add_option("--colouring", e_colouring, "construction or random");
    experiment->add_option("--variant", e_variant, "construction variant");
    experiment->add_option("--construction-alpha", e_construction_alpha, "construction alpha p/q");
    experiment->add_option("--r", e_r, "colour count");
    experiment->add_option("--alpha", e_alpha, "bias-target alpha p/q");
    experiment->add_option("--epsilon", e_epsilon, "slack p/q in (0,1]");
    experiment->add_option("--adversary", e_adversary, "none, construction, thinning, or greedy");
    experiment->add_option("--keep-probability", e_keep, "thinning keep rate");
    experiment->add_option("--seeds", e_seeds, "seed range a..b");
    experiment->add_option("--budget", e_budget, "rotation budget");
    experiment->add_option("--max-paths", e_max_paths, "forest path cap");
    experiment->add_option("--delta", e_delta, "clean-up margin (0 = epsilon/(8r))");
    experiment->add_option("--out", e_out, "JSON-lines output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*construct) {
            ConstructionSpec spec;
            spec.n = cn;
            spec.r = cr;
            spec.alpha = parse_rational(alpha_text);
            spec.variant = parse_variant(variant_name);
            auto built = build_construction(spec);
            std::ofstream file;
            write_edge_list(open_output(file, construct_out), built.graph, &built.colouring);
            return 0;
        }

        if (*monomatch) {
            auto input = load_edge_list(mm_in);
            if (!input.colouring) throw std::runtime_error("monomatch: input lacks colours");
            const Graph& g = input.graph;
            const EdgeColouring& c = *input.colouring;
            json report;
            report["n"] = g.vertex_count();
            report["m"] = g.edge_count();
            report["r"] = c.colour_count();
            report["min_degree"] = g.min_degree();
            json per_colour = json::array();
            for (int i = 1; i <= c.colour_count(); ++i)
                per_colour.push_back(max_matching(colour_class(g, c, i)).size());
            report["per_colour_mu"] = per_colour;
            auto [best_colour, matching] = max_mono_matching(g, c);
            report["best_colour"] = best_colour;
            json edges = json::array();
            for (const auto& e : matching.edges()) edges.push_back({e.u, e.v});
            report["matching"] = edges;
            Rational bound = mono_matching_bound(g.vertex_count(), c.colour_count(), g.min_degree());
            report["bound"] = bound.str();
            report["bound_ceil"] = bound.ceil();
            report["witness"] = witness_to_json(tutte_berge_witness(colour_class(g, c, best_colour)));
            std::ofstream file;
            open_output(file, mm_report) << report.dump(2) << '\n';
            return 0;
        }

        if (*forest_cmd) {
            auto input = load_edge_list(f_in);
            if (!input.colouring) throw std::runtime_error("forest: input lacks colours");
            ForestGrowOptions opts;
            opts.seed = f_seed;
            auto plan = grow_mono_forest(input.graph, *input.colouring, f_target, f_max_paths, opts);
            json out;
            out["colour"] = plan.colour;
            out["size"] = plan.achieved_size;
            out["path_count"] = plan.forest.path_count();
            out["best_effort"] = plan.best_effort;
            out["paths"] = plan.forest.paths();
            std::ofstream file;
            open_output(file, f_json) << out.dump(2) << '\n';
            return 0;
        }

        if (*hamilton) {
            auto input = load_edge_list(h_in);
            Matching m;
            if (!h_matching.empty()) {
                auto pairs = load_edge_list(h_matching);
                for (const auto& e : pairs.graph.edges()) m.add(e);
            }
            HamiltonSearchOptions opts;
            opts.rotation_budget = h_budget;
            opts.seed = h_seed;
            opts.use_exact_fallback = input.graph.vertex_count() <= 20;
            auto res = hamilton_with_matching(input.graph, m, opts);
            if (!res.success()) {
                std::cerr << "no cycle found: " << res.note << " (best path "
                          << res.best_path_edges << " edges, " << res.rotations_used
                          << " rotations)\n";
                return 1;
            }
            const auto& order = res.cycle->order;
            std::cout << "cycle:";
            for (int v : order) std::cout << ' ' << v;
            std::cout << '\n';
            int n = static_cast<int>(order.size());
            for (int i = 0; i < n; ++i) {
                Edge e(order[i], order[(i + 1) % n]);
                std::cout << "edge " << e.u << ' ' << e.v << ' ' << (m.contains(e) ? 'M' : 'H')
                          << '\n';
            }
            return 0;
        }

        if (*process) {
            SeedRange range = parse_seed_range(p_seeds);
            std::ofstream file;
            std::ostream& out = open_output(file, p_json);
            for (std::uint64_t seed = range.first; seed <= range.last; ++seed) {
                auto [proc, times] = run_process(p_n, seed);
                json rec;
                rec["seed"] = seed;
                rec["tau_mindeg2"] = times.tau_mindeg2;
                rec["tau_ham"] = times.tau_ham;
                rec["tau_conn"] = times.tau_conn;
                rec["equal"] = times.tau_ham == times.tau_mindeg2;
                if (times.decider_flagged) rec["decider_flagged"] = true;
                out << rec.dump() << '\n';
            }
            return 0;
        }

        if (*experiment) {
            ExperimentConfig cfg;
            if (e_host == "complete")
                cfg.host = ExperimentConfig::Host::complete;
            else if (e_host == "gnp")
                cfg.host = ExperimentConfig::Host::gnp;
            else if (e_host == "process")
                cfg.host = ExperimentConfig::Host::process_prefix;
            else
                throw CLI::ValidationError("--host", "expected complete, gnp, or process");
            cfg.n = e_n;
            cfg.gnp_p = e_p;
            cfg.process_edges = e_process_edges;
            cfg.alpha = parse_rational(e_alpha);
            cfg.epsilon = parse_rational(e_epsilon);
            cfg.colours = e_r;
            cfg.rotation_budget = e_budget;
            cfg.forest_max_paths = e_max_paths;
            cfg.cleanup_delta = e_delta;
            if (e_colouring == "construction") {
                cfg.colouring = ExperimentConfig::ColouringSource::construction;
                cfg.construction.n = e_n;
                cfg.construction.r = e_r;
                cfg.construction.alpha = parse_rational(e_construction_alpha);
                cfg.construction.variant = parse_variant(e_variant);
            } else if (e_colouring == "random") {
                cfg.colouring = ExperimentConfig::ColouringSource::random_colours;
            } else {
                throw CLI::ValidationError("--colouring", "expected construction or random");
            }
            if (e_adversary != "none") {
                cfg.use_adversary = true;
                if (e_adversary == "construction") {
                    cfg.adversary.kind = ResidualStrategy::Kind::construction;
                    cfg.adversary.spec = cfg.construction;
                } else if (e_adversary == "thinning") {
                    cfg.adversary.kind = ResidualStrategy::Kind::random_thinning;
                    cfg.adversary.keep_probability = e_keep;
                } else if (e_adversary == "greedy") {
                    cfg.adversary.kind = ResidualStrategy::Kind::greedy_min_degree;
                } else {
                    throw CLI::ValidationError("--adversary",
                                               "expected none, construction, thinning, or greedy");
                }
            }
            SeedRange range = parse_seed_range(e_seeds);
            cfg.seeds.clear();
            for (std::uint64_t seed = range.first; seed <= range.last; ++seed)
                cfg.seeds.push_back(seed);

            std::ofstream out(e_out, std::ios::app);
            if (!out) throw CLI::ValidationError("--out", "cannot open " + e_out);
            run_discrepancy_experiment(cfg, [&](const ExperimentRecord& rec) {
                json line;
                line["seed"] = rec.seed;
                line["found"] = rec.found;
                line["route"] = rec.route;
                line["target_k"] = rec.target_k.str();
                line["target_edges"] = rec.target_edges;
                line["achieved_bias"] = rec.achieved_bias;
                if (rec.upper_bound >= 0) line["upper_bound"] = rec.upper_bound;
                line["seconds"] = rec.seconds;
                if (!rec.failure.empty()) line["failure"] = rec.failure;
                json counts = json::object();
                for (auto [colour, count] : rec.cycle_colour_counts)
                    counts[std::to_string(colour)] = count;
                line["colour_counts"] = counts;
                out << line.dump() << '\n';
                out.flush();
            });
            return 0;
        }
    } catch (const std::logic_error& ex) {
        std::cerr << "fatal: " << ex.what() << '\n';
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
