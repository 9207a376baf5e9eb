#include "doctest.h"

#include "generators.hpp"
#include "hambias/pipeline.hpp"

using namespace hambias;

namespace {

ExperimentConfig complete_split_config(int n, int r, Rational epsilon) {
    ExperimentConfig cfg;
    cfg.host = ExperimentConfig::Host::complete;
    cfg.n = n;
    cfg.alpha = Rational(1);
    cfg.colouring = ExperimentConfig::ColouringSource::construction;
    cfg.construction.n = n;
    cfg.construction.r = r;
    cfg.construction.variant = ConstructionVariant::large_alpha;
    cfg.epsilon = epsilon;
    return cfg;
}

}  // namespace

TEST_CASE("independent_cycle_check accepts valid cycles and rejects broken ones") {
    Graph k5 = Graph::complete(5);
    EdgeColouring c(2);
    for (const auto& e : k5.edges()) c.set(e, 1 + (e.u + e.v) % 2);
    HamiltonCycle good{{0, 1, 2, 3, 4}};
    std::map<int, long long> counts;
    CHECK(independent_cycle_check(k5, c, good, &counts));
    long long total = 0;
    for (auto [colour, count] : counts) total += count;
    CHECK(total == 5);

    CHECK_FALSE(independent_cycle_check(k5, c, HamiltonCycle{{0, 1, 2, 3}}, nullptr));
    CHECK_FALSE(independent_cycle_check(k5, c, HamiltonCycle{{0, 1, 2, 3, 3}}, nullptr));
    Graph p5 = testgen::path_graph(5);
    CHECK_FALSE(independent_cycle_check(p5, c, good, nullptr));
}

TEST_CASE("perfect_matching_bias on hand-built cycles") {
    SUBCASE("alternating square") {
        Graph c4 = testgen::cycle_graph(4);
        EdgeColouring c(2);
        c.set(Edge(0, 1), 1);
        c.set(Edge(1, 2), 1);
        c.set(Edge(2, 3), 2);
        c.set(Edge(3, 0), 2);
        auto [m, colour, count] = perfect_matching_bias(HamiltonCycle{{0, 1, 2, 3}}, c);
        CHECK(colour == 1);
        CHECK(count == 1);  // ceil(2/2)
        CHECK(m.size() == 2);
    }
    SUBCASE("monochromatic hexagon") {
        Graph c6 = testgen::cycle_graph(6);
        EdgeColouring c(1);
        for (const auto& e : c6.edges()) c.set(e, 1);
        auto [m, colour, count] = perfect_matching_bias(HamiltonCycle{{0, 1, 2, 3, 4, 5}}, c);
        CHECK(colour == 1);
        CHECK(count == 3);
        CHECK(m.size() == 3);
    }
    SUBCASE("odd cycles are rejected") {
        EdgeColouring c(1);
        CHECK_THROWS_AS(perfect_matching_bias(HamiltonCycle{{0, 1, 2, 3, 4}}, c),
                        std::invalid_argument);
    }
}

TEST_CASE("dense-route discrepancy run on the complete split host") {
    auto cfg = complete_split_config(18, 2, Rational(1, 4));
    cfg.seeds = {1, 2, 3, 4, 5};
    auto records = run_discrepancy_experiment(cfg);
    REQUIRE(records.size() == 5);
    for (const auto& rec : records) {
        REQUIRE(rec.found);
        CHECK(rec.route == "dense");
        CHECK(rec.target_k == Rational(12));
        CHECK(rec.achieved_bias >= rec.target_edges);  // 9
        CHECK(rec.achieved_bias <= rec.upper_bound);   // 12
        long long total = 0;
        for (auto [colour, count] : rec.cycle_colour_counts) total += count;
        CHECK(total == 18);
    }
}

TEST_CASE("single-colour host reaches full bias") {
    ExperimentConfig cfg;
    cfg.host = ExperimentConfig::Host::complete;
    cfg.n = 12;
    cfg.colouring = ExperimentConfig::ColouringSource::random_colours;
    cfg.colours = 1;
    cfg.epsilon = Rational(1, 4);
    cfg.seeds = {9};
    auto records = run_discrepancy_experiment(cfg);
    REQUIRE(records.size() == 1);
    REQUIRE(records[0].found);
    CHECK(records[0].achieved_bias == 12);
}

TEST_CASE("sparse-route discrepancy run on a random host") {
    ExperimentConfig cfg = complete_split_config(80, 2, Rational(3, 10));
    cfg.host = ExperimentConfig::Host::gnp;
    cfg.gnp_p = 0.35;
    cfg.construction.n = 80;
    cfg.forest_max_paths = 4;
    cfg.seeds = {11, 12, 13};
    auto records = run_discrepancy_experiment(cfg);
    int found = 0;
    for (const auto& rec : records) {
        if (!rec.found) continue;
        ++found;
        CHECK(rec.route == "sparse");
        CHECK(rec.achieved_bias >= rec.target_edges / 2);  // loose sanity floor
        CHECK(rec.achieved_bias <= rec.upper_bound);
    }
    CHECK(found >= 2);
}

TEST_CASE("sparse route at random-graph scale keeps the bias guarantee") {
    ExperimentConfig cfg;
    cfg.host = ExperimentConfig::Host::gnp;
    cfg.n = 150;
    cfg.gnp_p = 3.0 * std::log(150) / 150;
    cfg.alpha = Rational(1);
    cfg.colouring = ExperimentConfig::ColouringSource::construction;
    cfg.construction.n = 150;
    cfg.construction.r = 2;
    cfg.construction.variant = ConstructionVariant::large_alpha;
    cfg.epsilon = Rational(3, 10);
    cfg.seeds.clear();
    for (std::uint64_t seed = 1; seed <= 20; ++seed) cfg.seeds.push_back(seed);
    auto records = run_discrepancy_experiment(cfg);
    int found = 0;
    for (const auto& rec : records) {
        if (!rec.found) continue;
        ++found;
        CHECK(rec.achieved_bias >= 70);  // (1 - 0.3) * 2n/3
        CHECK(rec.achieved_bias <= rec.upper_bound);
    }
    CHECK(found >= 18);  // >= 90% of seeds
}

TEST_CASE("per-seed failures are recorded without aborting the batch") {
    ExperimentConfig cfg;
    cfg.host = ExperimentConfig::Host::gnp;
    cfg.gnp_p = 0.02;  // far below the connectivity threshold at n = 40
    cfg.n = 40;
    cfg.colouring = ExperimentConfig::ColouringSource::random_colours;
    cfg.colours = 2;
    cfg.alpha = Rational(1);
    cfg.epsilon = Rational(1, 4);
    cfg.rotation_budget = 30000;
    cfg.seeds = {1, 2, 3};
    auto records = run_discrepancy_experiment(cfg);
    CHECK(records.size() == 3);
    int failures = 0;
    for (const auto& rec : records)
        if (!rec.found) {
            ++failures;
            CHECK_FALSE(rec.failure.empty());
        }
    CHECK(failures >= 1);
}

TEST_CASE("experiment configuration validation") {
    ExperimentConfig cfg = complete_split_config(12, 2, Rational(0));
    CHECK_THROWS_AS(run_discrepancy_experiment(cfg), std::invalid_argument);
    cfg.epsilon = Rational(1, 4);
    cfg.colouring = ExperimentConfig::ColouringSource::file;
    CHECK_THROWS_AS(run_discrepancy_experiment(cfg), std::invalid_argument);
}

TEST_CASE("record stream callback fires once per seed") {
    auto cfg = complete_split_config(12, 2, Rational(1, 4));
    cfg.seeds = {4, 5};
    int calls = 0;
    run_discrepancy_experiment(cfg, [&](const ExperimentRecord& rec) {
        ++calls;
        CHECK(rec.found);
    });
    CHECK(calls == 2);
}

TEST_CASE("pipeline output feeds perfect_matching_bias") {
    auto cfg = complete_split_config(16, 2, Rational(1, 4));
    cfg.seeds = {21};
    auto records = run_discrepancy_experiment(cfg);
    REQUIRE(records[0].found);

    auto built = build_construction(cfg.construction);
    auto [m, colour, count] = perfect_matching_bias(records[0].cycle, built.colouring);
    CHECK(2 * count >= records[0].achieved_bias);
    CHECK(count <= (records[0].target_k / Rational(2)).ceil());
    CHECK(m.size() == 8);
}
