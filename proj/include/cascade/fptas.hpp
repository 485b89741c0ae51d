// FPTAS cores for the reachability-constrained assortment problems.
//
// Two dynamic programs live here:
//  * the guess-grid + discretization + 4-dimensional table h(j, u, v, l) that
//    approximates the best assortment under the log-continuation capacity
//    and the cardinality cap, enumerated over the last product y;
//  * a profit-scaled 0/1 knapsack with a cardinality dimension, used by the
//    pricing pipeline where the objective collapses to a subset sum of
//    preference potentials.
//
// Both solve loops are embarrassingly parallel over independent subproblems
// (y and guess pairs); Execution::kSerial runs the identical reduction
// single-threaded and produces bit-identical results.

#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "cascade/model.hpp"

namespace cascade {

enum class Execution { kSerial, kParallel };

// Geometric guess grids for subset sums of gamma = alpha*beta and beta.
// Each grid point G covers sums in [G, G*(1+epsilon)].
struct GuessGrid {
    std::vector<double> gamma_guesses;
    std::vector<double> beta_guesses;
    double epsilon = 0.0;
};

// Grids I and J covering every nonempty subset sum of gamma and beta up to
// N*max/epsilon with ratio (1+epsilon). Requires epsilon in (0,1) and at
// least one product with gamma > 0.
GuessGrid build_guess_grids(const Catalog& catalog, double epsilon);

// One product discretized against a fixed guess pair: gamma scaled up
// (ceil), beta scaled down (floor), omega = -log(theta).
struct ScaledItem {
    int id = 0;
    std::int64_t scaled_gamma = 0;
    std::int64_t scaled_beta = 0;
    double omega = 0.0;
    double gamma = 0.0;  // unscaled alpha*beta
    double beta = 0.0;
};

// Scale `products` against one (gamma_guess, beta_guess) pair.
std::vector<ScaledItem> scale_items(std::span<const Product> products, double gamma_guess,
                                    double beta_guess, double epsilon, int budget);

// Table extent per dimension for a display budget B: ceil(B(1+eps)/eps) + B.
// Feasible subset sums of the scaled values never exceed this.
std::int64_t dp_extent(int budget, double epsilon);

// Minimum-omega table over exact scaled sums. Rolling over the item
// dimension: after pushing j items, (*this)(u, v, l) is h(j, u, v, l), the
// minimum of sum(omega) over subsets of the pushed items with
// sum(scaled_gamma) = u, sum(scaled_beta) = v and cardinality l (+infinity
// when no subset matches). Reconstruction runs over back-pointer nodes kept
// in an append-only arena, so earlier entries stay valid as cells improve.
class DpTable {
  public:
    static constexpr double kInfinity = std::numeric_limits<double>::infinity();

    DpTable(std::int64_t u_max, std::int64_t v_max, int max_cardinality);

    void push(const ScaledItem& item);

    double operator()(std::int64_t u, std::int64_t v, int l) const;
    // True (unscaled) sums of the subset stored in a cell.
    double gamma_sum(std::int64_t u, std::int64_t v, int l) const;
    double beta_sum(std::int64_t u, std::int64_t v, int l) const;
    // Ids of the stored subset, ascending. Empty for the root cell.
    std::vector<int> reconstruct(std::int64_t u, std::int64_t v, int l) const;

    std::int64_t u_max() const { return u_max_; }
    std::int64_t v_max() const { return v_max_; }
    int max_cardinality() const { return max_cardinality_; }
    int items_pushed() const { return items_pushed_; }
    std::size_t memory_bytes() const;

  private:
    std::size_t cell(std::int64_t u, std::int64_t v, int l) const {
        return (static_cast<std::size_t>(l) * static_cast<std::size_t>(u_max_ + 1) +
                static_cast<std::size_t>(u)) *
                   static_cast<std::size_t>(v_max_ + 1) +
               static_cast<std::size_t>(v);
    }

    struct Node {
        int item_id;
        std::int32_t parent;
    };

    std::int64_t u_max_;
    std::int64_t v_max_;
    int max_cardinality_;
    int items_pushed_ = 0;
    std::int64_t reach_u_ = 0;  // largest reachable u so far
    std::int64_t reach_v_ = 0;
    std::vector<double> omega_;
    std::vector<double> gamma_sum_;
    std::vector<double> beta_sum_;
    std::vector<std::int32_t> node_;
    std::vector<Node> arena_;
};

// Fill a table with every item in order. Items scaled out of range
// (scaled_gamma > u_max or scaled_beta > v_max) can never reach a stored
// cell and are skipped.
DpTable dp_fill(std::span<const ScaledItem> items, int budget, std::int64_t u_max,
                std::int64_t v_max);

// Solution of the reachability-constrained assortment problem: a prefix set
// S (every member browsed with probability >= rho), the final product y, and
// the exact revenue g(S + {y}).
struct Pa1Solution {
    std::vector<int> chosen_set;  // ascending ids, y excluded
    int last_product = 0;
    double revenue = 0.0;
};

// Resource accounting for one solve, for scale checks.
struct SolveStats {
    std::uint64_t dp_fills = 0;          // tables actually filled
    std::uint64_t guess_pairs = 0;       // guess pairs considered (incl. pruned)
    std::uint64_t peak_dp_bytes = 0;     // largest single table + arena
    std::uint64_t scanned_cells = 0;
};

// FPTAS for the reachability-constrained assortment problem: enumerates the
// last product y and, per guess pair, fills the DP over the remaining
// products, scans feasible cells (omega sum <= -log(rho), |S| <= B-1) and
// keeps the candidate with the best exact g(S + {y}).
//
// The returned revenue is at least (1-e(1+e))/(1+e(1+e)) times the true
// optimum, e = epsilon. Ties break toward the lowest y id, then the
// lexicographically smallest set.
Pa1Solution solve_pa1(const Catalog& catalog, double rho, double epsilon,
                      Execution exec = Execution::kParallel, SolveStats* stats = nullptr);

// --- knapsack with a cardinality dimension ----------------------------------

struct KnapsackItem {
    int id = 0;
    double value = 0.0;   // > 0
    double weight = 0.0;  // >= 0, +infinity allowed (never selectable)
};

// (1-epsilon)-approximate max-value subset with sum(weight) <= capacity and
// |subset| <= cardinality. Profit scaling with step epsilon*v_max/cardinality
// (lossless step 1 when all values are integral and the step would be finer);
// the DP minimizes weight per (scaled profit, cardinality) cell and the best
// feasible cell by true value is returned. Ids ascending.
std::vector<int> knapsack_fptas_cardinality(std::span<const KnapsackItem> items, double capacity,
                                            int cardinality, double epsilon);

// Solution of the joint selection + pricing core problem.
struct Pb1Solution {
    std::vector<int> chosen_set;  // ascending ids, y excluded
    int last_product = 0;
    PriceVector prices;           // uniform-markup prices for chosen_set + {y}
    double revenue = 0.0;         // W(sum of preference potentials)
};

// FPTAS for the priced variant: per last product y, a knapsack over
// preference potentials with capacity -log(rho) and cardinality B-1; the
// best candidate by W(sum v) gets its closed-form optimal prices attached.
// Revenue is within (1-epsilon) of the optimum.
Pb1Solution solve_pb1(const PricedCatalog& catalog, double rho, double epsilon,
                      Execution exec = Execution::kParallel, SolveStats* stats = nullptr);

// Shared candidate ordering: higher revenue wins; ties prefer the lower last
// product id, then the lexicographically smaller chosen set. Both the FPTAS
// and the exhaustive reference use this, so reductions are order-independent.
bool candidate_improves(double revenue, int last_product, std::span<const int> chosen_set,
                        double best_revenue, int best_last_product,
                        std::span<const int> best_chosen_set);

}  // namespace cascade
