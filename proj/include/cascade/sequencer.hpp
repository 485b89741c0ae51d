// End-to-end orchestration: solve the last-product-fixed inner problem,
// order the chosen prefix, append the last product and report the exact
// sequence revenue together with the a-priori guarantee.

#pragma once

#include <optional>
#include <span>

#include "cascade/fptas.hpp"
#include "cascade/model.hpp"

namespace cascade {

struct SequencingResult {
    DisplaySequence sequence;
    std::optional<PriceVector> prices;  // priced pipeline only
    double revenue = 0.0;               // exact f of `sequence` (and prices)
    double certified_ratio = 0.0;
    double rho = 0.0;
    double epsilon = 0.0;
};

// rho(1 - rho) is maximized at 1/2.
double default_rho();

// Guarantee of the sequencing pipeline:
// [(1 - e(1+e)) / (1 + e(1+e))] * rho * (1 - rho), e = epsilon.
double certified_ratio_sequencing(double rho, double epsilon);

// Guarantee of the pricing pipeline: (1 - epsilon) * rho * (1 - rho).
double certified_ratio_pricing(double rho, double epsilon);

// The guarantee holds for any order of the chosen prefix; this picks the
// better of two heuristics (theta descending; alpha*beta descending, ties by
// ascending id) under exact f, with the last product appended.
DisplaySequence order_chosen_set(std::span<const int> chosen_set, int last_product,
                                 const Catalog& catalog);

// Sequencing pipeline: inner FPTAS, then ordering. f(result) is at least
// certified_ratio times the optimal sequence revenue.
SequencingResult solve_sequencing(const Catalog& catalog, double rho, double epsilon,
                                  Execution exec = Execution::kParallel,
                                  SolveStats* stats = nullptr);

// Pricing pipeline: knapsack FPTAS over preference potentials, closed-form
// uniform-markup prices, then ordering on the realized catalog.
SequencingResult solve_pricing(const PricedCatalog& catalog, double rho, double epsilon,
                               Execution exec = Execution::kParallel,
                               SolveStats* stats = nullptr);

}  // namespace cascade
