// Ground-truth machinery at desk scale: exhaustive solvers for the
// sequencing problem, its last-product-fixed inner problem, and the priced
// variant over a finite price grid, plus a Monte Carlo simulator of the
// consider-then-choose process. The enumerations ARE the oracles: they only
// evaluate the exact model formulas, never the approximation machinery.

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cascade/fptas.hpp"
#include "cascade/model.hpp"

namespace cascade {

// Instance exceeds an enumeration limit. Callers should fall back to the
// FPTAS (or shrink the instance).
class SizeLimitError : public std::runtime_error {
  public:
    explicit SizeLimitError(const std::string& what) : std::runtime_error(what) {}
};

struct ExactPaSolution {
    DisplaySequence sequence;
    double revenue = 0.0;
};

// True optimum of max f(S) over ordered duplicate-free sequences of length
// <= B, by full enumeration (sum over k <= B of N!/(N-k)! sequences).
// Sequences are ranked lengths ascending, then lexicographically by id; the
// first-found argmax is kept on ties. Throws SizeLimitError when N > max_n.
ExactPaSolution exact_pa(const Catalog& catalog, int max_n = 8,
                         Execution exec = Execution::kParallel);

// True optimum of the last-product-fixed problem: max over y and sets S not
// containing y with |S| <= B-1 and sum of -log(theta_i) <= -log(rho) of
// g(S + {y}). Ties break exactly as in solve_pa1 (candidate_improves).
Pa1Solution exact_pa1(const Catalog& catalog, double rho, int max_n = 15,
                      Execution exec = Execution::kParallel);

// Candidate prices per product id.
using PriceGrid = std::map<int, std::vector<double>>;

// Per-product linear grid over [cost + 0.05, cost + W(N * max v) + 2]. The
// optimal markup for any subset is W(sum v) + 1, which this range brackets.
PriceGrid default_price_grid(const PricedCatalog& catalog, int grid_points = 21);

struct PbGridSolution {
    DisplaySequence sequence;
    PriceVector prices;
    double revenue = 0.0;
    // Discretization slack: max over displayed products of the local grid
    // step times a finite-difference revenue slope at the optimum.
    double grid_error_bound = 0.0;
};

// Best f(S, p) over all sequences of length <= B and all per-product grid
// price combinations. Exhaustive; requires N <= 5 and at most 25 grid points
// per product (cost grows as sequences * grid^length). Every displayed
// product must have a nonempty grid entry.
PbGridSolution exact_pb_grid(const PricedCatalog& catalog, const PriceGrid& grid,
                             Execution exec = Execution::kParallel);

struct SimulationReport {
    std::int64_t trials = 0;
    double empirical_revenue = 0.0;
    double std_error = 0.0;  // sample stddev / sqrt(trials), 0 for a single trial
    std::map<int, double> per_product_purchase_freq;
    double no_purchase_freq = 0.0;
    // Frequency of the consideration set ending exactly at each position.
    std::vector<double> per_position_stop_freq;
};

// Simulates `trials` independent consumers on the displayed sequence: browse
// top-down, after product i continue with probability theta_i (always stop
// at the end), then draw an MNL purchase over the browsed prefix. The random
// stream of trial t depends only on (seed, t), so serial and parallel runs
// produce identical reports.
SimulationReport simulate(const DisplaySequence& seq, const Catalog& catalog, std::int64_t trials,
                          std::uint64_t seed, Execution exec = Execution::kParallel);

// Priced variant: a purchase of product i earns its margin price - cost and
// the MNL weight is exp(quality - price). Every displayed id needs a price.
SimulationReport simulate(const DisplaySequence& seq, const PriceVector& prices,
                          const PricedCatalog& catalog, std::int64_t trials, std::uint64_t seed,
                          Execution exec = Execution::kParallel);

}  // namespace cascade
