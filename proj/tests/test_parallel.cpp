#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "cascade/fptas.hpp"
#include "cascade/model.hpp"
#include "cascade/oracle.hpp"
#include "cascade/rng.hpp"
#include "cascade/sequencer.hpp"
#include "test_util.hpp"

using namespace cascade;
using cascade::testing::random_catalog;
using cascade::testing::random_priced_catalog;

// Every solver advertises bitwise-identical output across execution modes;
// the parallel reductions must therefore be order-independent.

TEST_CASE("solve_pa1 serial equals parallel") {
    Rng rng(3);
    for (int trial = 0; trial < 15; ++trial) {
        int n = 2 + static_cast<int>(rng.next_below(9));
        int b = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(std::min(n, 5))));
        Catalog catalog = random_catalog(n, b, rng);
        Pa1Solution s = solve_pa1(catalog, 0.5, 0.2, Execution::kSerial);
        Pa1Solution p = solve_pa1(catalog, 0.5, 0.2, Execution::kParallel);
        CHECK(s.revenue == p.revenue);
        CHECK(s.last_product == p.last_product);
        CHECK(s.chosen_set == p.chosen_set);
    }
}

TEST_CASE("solve_pb1 serial equals parallel") {
    Rng rng(6);
    for (int trial = 0; trial < 15; ++trial) {
        int n = 2 + static_cast<int>(rng.next_below(9));
        int b = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(std::min(n, 5))));
        PricedCatalog catalog = random_priced_catalog(n, b, rng);
        Pb1Solution s = solve_pb1(catalog, 0.5, 0.2, Execution::kSerial);
        Pb1Solution p = solve_pb1(catalog, 0.5, 0.2, Execution::kParallel);
        CHECK(s.revenue == p.revenue);
        CHECK(s.last_product == p.last_product);
        CHECK(s.chosen_set == p.chosen_set);
        CHECK(s.prices == p.prices);
    }
}

TEST_CASE("pipelines serial equals parallel") {
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        Catalog catalog = random_catalog(8, 4, rng);
        SequencingResult s = solve_sequencing(catalog, 0.4, 0.15, Execution::kSerial);
        SequencingResult p = solve_sequencing(catalog, 0.4, 0.15, Execution::kParallel);
        CHECK(s.sequence == p.sequence);
        CHECK(s.revenue == p.revenue);

        PricedCatalog priced = random_priced_catalog(8, 4, rng);
        SequencingResult ps = solve_pricing(priced, 0.4, 0.15, Execution::kSerial);
        SequencingResult pp = solve_pricing(priced, 0.4, 0.15, Execution::kParallel);
        CHECK(ps.sequence == pp.sequence);
        CHECK(ps.revenue == pp.revenue);
        CHECK(*ps.prices == *pp.prices);
    }
}

TEST_CASE("oracles serial equals parallel") {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        Catalog catalog = random_catalog(6, 3, rng);
        ExactPaSolution s = exact_pa(catalog, 8, Execution::kSerial);
        ExactPaSolution p = exact_pa(catalog, 8, Execution::kParallel);
        CHECK(s.sequence == p.sequence);
        CHECK(s.revenue == p.revenue);

        Pa1Solution s1 = exact_pa1(catalog, 0.6, 15, Execution::kSerial);
        Pa1Solution p1 = exact_pa1(catalog, 0.6, 15, Execution::kParallel);
        CHECK(s1.revenue == p1.revenue);
        CHECK(s1.last_product == p1.last_product);
        CHECK(s1.chosen_set == p1.chosen_set);
    }

    PricedCatalog priced = random_priced_catalog(3, 2, rng);
    PriceGrid grid = default_price_grid(priced, 7);
    PbGridSolution s = exact_pb_grid(priced, grid, Execution::kSerial);
    PbGridSolution p = exact_pb_grid(priced, grid, Execution::kParallel);
    CHECK(s.sequence == p.sequence);
    CHECK(s.prices == p.prices);
    CHECK(s.revenue == p.revenue);
    CHECK(s.grid_error_bound == p.grid_error_bound);
}

TEST_CASE("simulate serial equals parallel") {
    Rng rng(15);
    Catalog catalog = random_catalog(6, 4, rng);
    DisplaySequence seq{5, 2, 6, 1};
    SimulationReport s = simulate(seq, catalog, 100000, 77, Execution::kSerial);
    SimulationReport p = simulate(seq, catalog, 100000, 77, Execution::kParallel);
    CHECK(s.empirical_revenue == p.empirical_revenue);
    CHECK(s.std_error == p.std_error);
    CHECK(s.per_product_purchase_freq == p.per_product_purchase_freq);
    CHECK(s.no_purchase_freq == p.no_purchase_freq);
    CHECK(s.per_position_stop_freq == p.per_position_stop_freq);

    PricedCatalog priced = random_priced_catalog(4, 3, rng);
    std::vector<int> set{1, 2, 3};
    PriceVector prices = optimal_prices(set, priced).first;
    DisplaySequence pseq{3, 1, 2};
    SimulationReport sp = simulate(pseq, prices, priced, 100000, 78, Execution::kSerial);
    SimulationReport pp = simulate(pseq, prices, priced, 100000, 78, Execution::kParallel);
    CHECK(sp.empirical_revenue == pp.empirical_revenue);
    CHECK(sp.per_product_purchase_freq == pp.per_product_purchase_freq);
    CHECK(sp.per_position_stop_freq == pp.per_position_stop_freq);
}
