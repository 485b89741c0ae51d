#include "cascade/sequencer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cascade {

double default_rho() { return 0.5; }

double certified_ratio_sequencing(double rho, double epsilon) {
    double e = epsilon * (1.0 + epsilon);
    return (1.0 - e) / (1.0 + e) * rho * (1.0 - rho);
}

double certified_ratio_pricing(double rho, double epsilon) {
    return (1.0 - epsilon) * rho * (1.0 - rho);
}

DisplaySequence order_chosen_set(std::span<const int> chosen_set, int last_product,
                                 const Catalog& catalog) {
    DisplaySequence by_theta(chosen_set.begin(), chosen_set.end());
    std::sort(by_theta.begin(), by_theta.end(), [&](int a, int b) {
        const Product& pa = catalog.product(a);
        const Product& pb = catalog.product(b);
        if (pa.theta != pb.theta) return pa.theta > pb.theta;
        return a < b;
    });
    DisplaySequence by_gamma(chosen_set.begin(), chosen_set.end());
    std::sort(by_gamma.begin(), by_gamma.end(), [&](int a, int b) {
        const Product& pa = catalog.product(a);
        const Product& pb = catalog.product(b);
        double ga = pa.alpha * pa.beta;
        double gb = pb.alpha * pb.beta;
        if (ga != gb) return ga > gb;
        return a < b;
    });
    by_theta.push_back(last_product);
    by_gamma.push_back(last_product);
    // equal f keeps the theta order
    if (sequence_revenue(by_gamma, catalog) > sequence_revenue(by_theta, catalog))
        return by_gamma;
    return by_theta;
}

namespace {

// Defensive checks of the two structural facts the guarantee rests on:
// every prefix member is reached with probability >= rho, and the sequence
// earns at least rho times the assortment revenue of the displayed set.
void check_result(const DisplaySequence& seq, double revenue, double rho, double set_revenue,
                  const Catalog& catalog) {
    constexpr double kSlack = 1e-9;
    for (size_t k = 0; k + 1 < seq.size(); ++k) {
        if (reachability(seq, seq[k], catalog) < rho * (1.0 - kSlack))
            throw std::logic_error("prefix product " + std::to_string(seq[k]) +
                                   " is reached with probability below rho");
    }
    if (revenue < rho * set_revenue * (1.0 - kSlack))
        throw std::logic_error("sequence revenue fell below rho times the set revenue");
}

}  // namespace

SequencingResult solve_sequencing(const Catalog& catalog, double rho, double epsilon,
                                  Execution exec, SolveStats* stats) {
    Pa1Solution inner = solve_pa1(catalog, rho, epsilon, exec, stats);
    SequencingResult result;
    result.sequence = order_chosen_set(inner.chosen_set, inner.last_product, catalog);
    result.revenue = sequence_revenue(result.sequence, catalog);
    result.certified_ratio = certified_ratio_sequencing(rho, epsilon);
    result.rho = rho;
    result.epsilon = epsilon;
    check_result(result.sequence, result.revenue, rho, inner.revenue, catalog);
    return result;
}

SequencingResult solve_pricing(const PricedCatalog& catalog, double rho, double epsilon,
                               Execution exec, SolveStats* stats) {
    Pb1Solution inner = solve_pb1(catalog, rho, epsilon, exec, stats);
    // realize only the priced (selected) products; unselected ones have no price
    std::vector<Product> realized_products;
    for (const auto& [id, price] : inner.prices)
        realized_products.push_back(realize(catalog.product(id), price));
    Catalog realized(realized_products, static_cast<int>(realized_products.size()));
    SequencingResult result;
    result.sequence = order_chosen_set(inner.chosen_set, inner.last_product, realized);
    result.prices = inner.prices;
    result.revenue = priced_sequence_revenue(result.sequence, inner.prices, catalog);
    result.certified_ratio = certified_ratio_pricing(rho, epsilon);
    result.rho = rho;
    result.epsilon = epsilon;
    check_result(result.sequence, result.revenue, rho, inner.revenue, realized);
    return result;
}

}  // namespace cascade
