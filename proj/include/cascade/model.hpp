// Domain types and exact evaluation of the cascade browse + MNL model.
//
// A displayed sequence is browsed top-down: after viewing product i the
// consumer continues with probability theta_i, otherwise she stops and picks
// one product (or nothing) from what she has seen, with MNL probabilities
// beta_i / (sum of beta over the consideration set + 1).

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace cascade {

// One sellable item with fixed per-unit revenue `alpha`, MNL preference
// weight `beta` and continuation probability `theta`.
struct Product {
    int id = 0;
    double alpha = 0.0;  // per-unit revenue, >= 0
    double beta = 0.0;   // MNL preference weight, > 0
    double theta = 0.0;  // continuation probability, in [0, 1]
};

// Priced variant: revenue and preference weight derive from the price p as
// alpha(p) = p - cost and beta(p) = exp(quality - p).
struct PricedProduct {
    int id = 0;
    double quality = 0.0;
    double cost = 0.0;   // >= 0
    double theta = 0.0;  // in [0, 1]
};

// An ordered, duplicate-free list of product ids.
using DisplaySequence = std::vector<int>;

// Price assignment per product id.
using PriceVector = std::map<int, double>;

namespace detail {

template <typename P>
class BasicCatalog {
  public:
    BasicCatalog(std::vector<P> products, int display_budget);

    const std::vector<P>& products() const { return products_; }
    int display_budget() const { return display_budget_; }
    int size() const { return static_cast<int>(products_.size()); }

    // Index of a product id; throws std::invalid_argument for unknown ids.
    int index_of(int id) const;
    bool contains(int id) const { return index_.count(id) != 0; }
    const P& product(int id) const { return products_[static_cast<size_t>(index_of(id))]; }

  private:
    std::vector<P> products_;
    int display_budget_;
    std::unordered_map<int, int> index_;
};

}  // namespace detail

// The product universe plus the display budget B. Construction validates the
// invariants (unique ids, beta > 0, theta in [0,1], alpha >= 0, 1 <= B <= N).
using Catalog = detail::BasicCatalog<Product>;
using PricedCatalog = detail::BasicCatalog<PricedProduct>;

// --- Sequence accessors ----------------------------------------------------
// Prefix of `seq` strictly before product i. Throws std::invalid_argument
// ("product not in sequence") if i does not appear.
DisplaySequence subsequence_before(const DisplaySequence& seq, int id);
// Prefix up to and including i.
DisplaySequence subsequence_up_to(const DisplaySequence& seq, int id);
// Suffix strictly after i.
DisplaySequence subsequence_after(const DisplaySequence& seq, int id);
// Suffix from i onward.
DisplaySequence subsequence_from(const DisplaySequence& seq, int id);

// --- Browse-phase probabilities ---------------------------------------------

// Probability that product i is browsed at all: the product of theta over
// everything displayed before it (1 for the first position).
double reachability(const DisplaySequence& seq, int id, const Catalog& catalog);

// Probability that the consumer stops exactly at i, i.e. her consideration
// set is the prefix ending at i. Summed over the sequence this is 1.
double consideration_probability(const DisplaySequence& seq, int id, const Catalog& catalog);

// --- Choice-phase quantities -------------------------------------------------

// MNL purchase probability of i within an assortment: beta_i / (sum beta + 1).
double mnl_purchase_prob(std::span<const int> assortment, int id, const Catalog& catalog);

// Expected revenue g(S) = sum_i alpha_i * P_i(S) of a realized consideration
// set. g of the empty set is 0.
double assortment_revenue(std::span<const int> assortment, const Catalog& catalog);

// Expected revenue f(S) of a displayed sequence: the mixture of g over the
// random consideration set induced by the browse phase. f of the empty
// sequence is 0.
double sequence_revenue(const DisplaySequence& seq, const Catalog& catalog);

// --- Pricing -----------------------------------------------------------------

// Principal-branch Lambert W: the w >= 0 with w * exp(w) = z, for z >= 0.
// Halley iteration from log1p(z); residual <= 1e-12 * max(1, z).
// Throws std::domain_error for z < 0.
double lambert_w(double z);

// v_i = exp(quality - cost - 1); the per-product potential whose subset sums
// drive the optimal-pricing objective W(sum v).
double preference_potential(const PricedProduct& p);

// Revenue-maximizing prices for a fixed consideration set: every product gets
// the same markup, p_i = W(sum_j v_j) + cost_i + 1, and the achieved revenue
// equals W(sum_j v_j). Throws std::invalid_argument on an empty assortment.
std::pair<PriceVector, double> optimal_prices(std::span<const int> assortment,
                                              const PricedCatalog& catalog);

// g(S, p) with alpha_i = p_i - cost_i and beta_i = exp(quality_i - p_i).
// Throws std::invalid_argument if a price is missing.
double priced_assortment_revenue(std::span<const int> assortment, const PriceVector& prices,
                                 const PricedCatalog& catalog);

// f(S, p): sequence revenue under the given prices.
double priced_sequence_revenue(const DisplaySequence& seq, const PriceVector& prices,
                               const PricedCatalog& catalog);

// Fixed-parameter product induced by a price: alpha = p - cost (may be
// negative for below-cost prices), beta = exp(quality - p).
Product realize(const PricedProduct& p, double price);

// Realized fixed catalog for a fully priced product set. Intended for
// solver-produced prices (which keep alpha positive); arbitrary prices should
// be evaluated through priced_*_revenue instead.
Catalog realize_catalog(const PricedCatalog& catalog, const PriceVector& prices);

// Validates that `seq` is duplicate-free and resolves ids to catalog indices.
std::vector<int> sequence_indices(const DisplaySequence& seq, const Catalog& catalog);
std::vector<int> sequence_indices(const DisplaySequence& seq, const PricedCatalog& catalog);

}  // namespace cascade
