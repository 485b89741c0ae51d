#include "cascade/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace cascade {

namespace detail {

template <typename P>
BasicCatalog<P>::BasicCatalog(std::vector<P> products, int display_budget)
    : products_(std::move(products)), display_budget_(display_budget) {
    if (products_.empty()) throw std::invalid_argument("catalog must contain at least one product");
    if (display_budget_ < 1 || display_budget_ > static_cast<int>(products_.size()))
        throw std::invalid_argument("display budget must satisfy 1 <= B <= number of products");
    index_.reserve(products_.size());
    for (int i = 0; i < static_cast<int>(products_.size()); ++i) {
        const P& p = products_[static_cast<size_t>(i)];
        if (!index_.emplace(p.id, i).second)
            throw std::invalid_argument("duplicate product id in catalog");
        if (!(p.theta >= 0.0 && p.theta <= 1.0))
            throw std::invalid_argument("theta must lie in [0, 1]");
        if constexpr (std::is_same_v<P, Product>) {
            if (!(p.beta > 0.0)) throw std::invalid_argument("beta must be positive");
            if (!(p.alpha >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
        } else {
            if (!(p.cost >= 0.0)) throw std::invalid_argument("cost must be non-negative");
            if (!std::isfinite(p.quality)) throw std::invalid_argument("quality must be finite");
        }
    }
}

template <typename P>
int BasicCatalog<P>::index_of(int id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::invalid_argument("product not in catalog");
    return it->second;
}

template class BasicCatalog<Product>;
template class BasicCatalog<PricedProduct>;

}  // namespace detail

namespace {

size_t position_of(const DisplaySequence& seq, int id) {
    for (size_t k = 0; k < seq.size(); ++k)
        if (seq[k] == id) return k;
    throw std::invalid_argument("product not in sequence");
}

template <typename C>
std::vector<int> indices_checked(const DisplaySequence& seq, const C& catalog) {
    std::vector<int> idx;
    idx.reserve(seq.size());
    std::unordered_set<int> seen;
    for (int id : seq) {
        if (!seen.insert(id).second) throw std::invalid_argument("duplicate product id in sequence");
        idx.push_back(catalog.index_of(id));
    }
    return idx;
}

}  // namespace

DisplaySequence subsequence_before(const DisplaySequence& seq, int id) {
    size_t pos = position_of(seq, id);
    return DisplaySequence(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(pos));
}

DisplaySequence subsequence_up_to(const DisplaySequence& seq, int id) {
    size_t pos = position_of(seq, id);
    return DisplaySequence(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
}

DisplaySequence subsequence_after(const DisplaySequence& seq, int id) {
    size_t pos = position_of(seq, id);
    return DisplaySequence(seq.begin() + static_cast<std::ptrdiff_t>(pos) + 1, seq.end());
}

DisplaySequence subsequence_from(const DisplaySequence& seq, int id) {
    size_t pos = position_of(seq, id);
    return DisplaySequence(seq.begin() + static_cast<std::ptrdiff_t>(pos), seq.end());
}

double reachability(const DisplaySequence& seq, int id, const Catalog& catalog) {
    size_t pos = position_of(seq, id);
    double theta_prod = 1.0;
    for (size_t k = 0; k < pos; ++k) theta_prod *= catalog.product(seq[k]).theta;
    return theta_prod;
}

double consideration_probability(const DisplaySequence& seq, int id, const Catalog& catalog) {
    size_t pos = position_of(seq, id);
    double reach = 1.0;
    for (size_t k = 0; k < pos; ++k) reach *= catalog.product(seq[k]).theta;
    if (pos + 1 == seq.size()) return reach;  // last position: stopping is certain
    return reach * (1.0 - catalog.product(id).theta);
}

double mnl_purchase_prob(std::span<const int> assortment, int id, const Catalog& catalog) {
    double beta_sum = 0.0;
    bool member = false;
    for (int j : assortment) {
        beta_sum += catalog.product(j).beta;
        member = member || (j == id);
    }
    if (!member) throw std::invalid_argument("product not in assortment");
    return catalog.product(id).beta / (beta_sum + 1.0);
}

double assortment_revenue(std::span<const int> assortment, const Catalog& catalog) {
    double gamma_sum = 0.0;  // sum of alpha_i * beta_i
    double beta_sum = 0.0;
    for (int j : assortment) {
        const Product& p = catalog.product(j);
        gamma_sum += p.alpha * p.beta;
        beta_sum += p.beta;
    }
    if (assortment.empty()) return 0.0;
    return gamma_sum / (beta_sum + 1.0);
}

double sequence_revenue(const DisplaySequence& seq, const Catalog& catalog) {
    std::vector<int> idx = indices_checked(seq, catalog);
    double f = 0.0;
    double reach = 1.0;      // probability of browsing the current position
    double gamma_sum = 0.0;  // running prefix sums
    double beta_sum = 0.0;
    for (size_t k = 0; k < idx.size(); ++k) {
        const Product& p = catalog.products()[static_cast<size_t>(idx[k])];
        gamma_sum += p.alpha * p.beta;
        beta_sum += p.beta;
        double g_prefix = gamma_sum / (beta_sum + 1.0);
        double stop = (k + 1 == idx.size()) ? reach : reach * (1.0 - p.theta);
        f += stop * g_prefix;
        reach *= p.theta;
    }
    return f;
}

double lambert_w(double z) {
    if (z < 0.0) throw std::domain_error("lambert_w: negative argument (principal branch only)");
    if (z == 0.0) return 0.0;
    double w = std::log1p(z);
    for (int iter = 0; iter < 100; ++iter) {
        double ew = std::exp(w);
        double r = w * ew - z;
        if (std::abs(r) <= 1e-12 * std::max(1.0, z)) return w;
        // Halley step
        double denom = ew * (w + 1.0) - (w + 2.0) * r / (2.0 * w + 2.0);
        w -= r / denom;
    }
    return w;
}

double preference_potential(const PricedProduct& p) { return std::exp(p.quality - p.cost - 1.0); }

std::pair<PriceVector, double> optimal_prices(std::span<const int> assortment,
                                              const PricedCatalog& catalog) {
    if (assortment.empty()) throw std::invalid_argument("optimal_prices: empty assortment");
    double v_sum = 0.0;
    for (int j : assortment) v_sum += preference_potential(catalog.product(j));
    double w = lambert_w(v_sum);
    PriceVector prices;
    for (int j : assortment) prices[j] = w + catalog.product(j).cost + 1.0;
    return {std::move(prices), w};
}

namespace {

double price_of(const PriceVector& prices, int id) {
    auto it = prices.find(id);
    if (it == prices.end()) throw std::invalid_argument("missing price for product");
    return it->second;
}

}  // namespace

double priced_assortment_revenue(std::span<const int> assortment, const PriceVector& prices,
                                 const PricedCatalog& catalog) {
    double gamma_sum = 0.0;
    double beta_sum = 0.0;
    for (int j : assortment) {
        const PricedProduct& p = catalog.product(j);
        double price = price_of(prices, j);
        double beta = std::exp(p.quality - price);
        gamma_sum += (price - p.cost) * beta;
        beta_sum += beta;
    }
    if (assortment.empty()) return 0.0;
    return gamma_sum / (beta_sum + 1.0);
}

double priced_sequence_revenue(const DisplaySequence& seq, const PriceVector& prices,
                               const PricedCatalog& catalog) {
    std::vector<int> idx = indices_checked(seq, catalog);
    double f = 0.0;
    double reach = 1.0;
    double gamma_sum = 0.0;
    double beta_sum = 0.0;
    for (size_t k = 0; k < idx.size(); ++k) {
        const PricedProduct& p = catalog.products()[static_cast<size_t>(idx[k])];
        double price = price_of(prices, p.id);
        double beta = std::exp(p.quality - price);
        gamma_sum += (price - p.cost) * beta;
        beta_sum += beta;
        double g_prefix = gamma_sum / (beta_sum + 1.0);
        double stop = (k + 1 == idx.size()) ? reach : reach * (1.0 - p.theta);
        f += stop * g_prefix;
        reach *= p.theta;
    }
    return f;
}

Product realize(const PricedProduct& p, double price) {
    return Product{p.id, price - p.cost, std::exp(p.quality - price), p.theta};
}

Catalog realize_catalog(const PricedCatalog& catalog, const PriceVector& prices) {
    std::vector<Product> fixed;
    fixed.reserve(catalog.products().size());
    for (const PricedProduct& p : catalog.products()) fixed.push_back(realize(p, price_of(prices, p.id)));
    return Catalog(std::move(fixed), catalog.display_budget());
}

std::vector<int> sequence_indices(const DisplaySequence& seq, const Catalog& catalog) {
    return indices_checked(seq, catalog);
}

std::vector<int> sequence_indices(const DisplaySequence& seq, const PricedCatalog& catalog) {
    return indices_checked(seq, catalog);
}

}  // namespace cascade
