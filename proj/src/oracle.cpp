#include "cascade/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "cascade/rng.hpp"

namespace cascade {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double minus_log(double theta) {
    if (theta <= 0.0) return kInf;
    if (theta >= 1.0) return 0.0;
    return -std::log(theta);
}

// Canonical enumeration rank: lengths ascending, then lexicographic by id.
bool rank_less(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<Product> by_id(const Catalog& catalog) {
    std::vector<Product> prods = catalog.products();
    std::sort(prods.begin(), prods.end(),
              [](const Product& a, const Product& b) { return a.id < b.id; });
    return prods;
}

struct PaCandidate {
    double revenue = -kInf;
    std::vector<int> sequence;
};

// Depth-first walk over all ordered sequences. Every candidate is scored
// with the canonical sequence_revenue so that order ties (for example when
// every theta is 1) compare bitwise equal and fall to the rank order.
struct PaSearch {
    const Catalog& catalog;
    const std::vector<Product>& prods;
    int budget;
    std::vector<int> stack;
    PaCandidate best;

    void offer() {
        double revenue = sequence_revenue(stack, catalog);
        if (revenue > best.revenue ||
            (revenue == best.revenue && rank_less(stack, best.sequence))) {
            best.revenue = revenue;
            best.sequence = stack;
        }
    }

    void dfs(std::uint64_t used) {
        const int n = static_cast<int>(prods.size());
        for (int idx = 0; idx < n; ++idx) {
            if (used & (1ull << idx)) continue;
            stack.push_back(prods[static_cast<size_t>(idx)].id);
            offer();
            if (static_cast<int>(stack.size()) < budget) dfs(used | (1ull << idx));
            stack.pop_back();
        }
    }
};

}  // namespace

ExactPaSolution exact_pa(const Catalog& catalog, int max_n, Execution exec) {
    if (catalog.size() > max_n)
        throw SizeLimitError("exact_pa enumerates all ordered sequences; N = " +
                             std::to_string(catalog.size()) + " exceeds the limit " +
                             std::to_string(max_n) + ", use the FPTAS instead");
    const std::vector<Product> prods = by_id(catalog);
    const int n = static_cast<int>(prods.size());

    std::vector<PaCandidate> per_first(static_cast<size_t>(n));
#pragma omp parallel for schedule(dynamic) if (exec == Execution::kParallel)
    for (int first = 0; first < n; ++first) {
        PaSearch search{catalog, prods, catalog.display_budget(), {}, {}};
        search.stack.push_back(prods[static_cast<size_t>(first)].id);
        search.offer();
        if (catalog.display_budget() > 1) search.dfs(1ull << first);
        per_first[static_cast<size_t>(first)] = std::move(search.best);
    }

    const PaCandidate* best = nullptr;
    for (const PaCandidate& c : per_first) {
        if (!best || c.revenue > best->revenue ||
            (c.revenue == best->revenue && rank_less(c.sequence, best->sequence)))
            best = &c;
    }
    return ExactPaSolution{best->sequence, sequence_revenue(best->sequence, catalog)};
}

namespace {

struct Pa1Candidate {
    double revenue = -kInf;
    int last_product = 0;
    std::vector<int> chosen_set;
};

struct Pa1Search {
    const Catalog& catalog;
    const std::vector<Product>& prods;
    const std::vector<double>& omegas;
    int y;
    double capacity;
    int max_size;
    std::vector<int> stack;
    Pa1Candidate best;

    // Candidates over the same full set must compare as exact ties, so every
    // revenue goes through assortment_revenue on the sorted set instead of an
    // incremental sum whose association depends on the (y, S) split.
    void offer() {
        std::vector<int> full = stack;
        full.push_back(prods[static_cast<size_t>(y)].id);
        std::sort(full.begin(), full.end());
        double revenue = assortment_revenue(full, catalog);
        if (candidate_improves(revenue, prods[static_cast<size_t>(y)].id, stack, best.revenue,
                               best.last_product, best.chosen_set)) {
            best.revenue = revenue;
            best.last_product = prods[static_cast<size_t>(y)].id;
            best.chosen_set = stack;
        }
    }

    void dfs(int start, double omega_sum) {
        const int n = static_cast<int>(prods.size());
        for (int idx = start; idx < n; ++idx) {
            if (idx == y) continue;
            double w = omega_sum + omegas[static_cast<size_t>(idx)];
            if (!(w <= capacity)) continue;
            stack.push_back(prods[static_cast<size_t>(idx)].id);
            offer();
            if (static_cast<int>(stack.size()) < max_size) dfs(idx + 1, w);
            stack.pop_back();
        }
    }
};

}  // namespace

Pa1Solution exact_pa1(const Catalog& catalog, double rho, int max_n, Execution exec) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
    if (catalog.size() > max_n)
        throw SizeLimitError("exact_pa1 enumerates all subsets; N = " +
                             std::to_string(catalog.size()) + " exceeds the limit " +
                             std::to_string(max_n));
    const std::vector<Product> prods = by_id(catalog);
    const int n = static_cast<int>(prods.size());
    const double capacity = -std::log(rho);
    std::vector<double> omegas(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) omegas[static_cast<size_t>(i)] = minus_log(prods[static_cast<size_t>(i)].theta);

    std::vector<Pa1Candidate> per_y(static_cast<size_t>(n));
#pragma omp parallel for schedule(dynamic) if (exec == Execution::kParallel)
    for (int y = 0; y < n; ++y) {
        Pa1Search search{catalog, prods, omegas, y, capacity, catalog.display_budget() - 1,
                         {},      {}};
        search.offer();  // the bare singleton {y}
        if (search.max_size > 0) search.dfs(0, 0.0);
        per_y[static_cast<size_t>(y)] = std::move(search.best);
    }

    const Pa1Candidate* best = nullptr;
    for (const Pa1Candidate& c : per_y) {
        if (!best || candidate_improves(c.revenue, c.last_product, c.chosen_set, best->revenue,
                                        best->last_product, best->chosen_set))
            best = &c;
    }

    Pa1Solution out;
    out.chosen_set = best->chosen_set;
    out.last_product = best->last_product;
    std::vector<int> full = best->chosen_set;
    full.push_back(best->last_product);
    std::sort(full.begin(), full.end());
    out.revenue = assortment_revenue(full, catalog);
    return out;
}

// --- grid-priced oracle -------------------------------------------------------

PriceGrid default_price_grid(const PricedCatalog& catalog, int grid_points) {
    if (grid_points < 1) throw std::invalid_argument("grid needs at least one point");
    double v_max = 0.0;
    for (const PricedProduct& p : catalog.products())
        v_max = std::max(v_max, preference_potential(p));
    const double markup_hi = lambert_w(static_cast<double>(catalog.size()) * v_max) + 2.0;
    PriceGrid grid;
    for (const PricedProduct& p : catalog.products()) {
        std::vector<double> points;
        points.reserve(static_cast<size_t>(grid_points));
        const double lo = p.cost + 0.05;
        const double hi = p.cost + markup_hi;
        if (grid_points == 1) {
            points.push_back(lo);
        } else {
            for (int k = 0; k < grid_points; ++k)
                points.push_back(lo + (hi - lo) * static_cast<double>(k) /
                                          static_cast<double>(grid_points - 1));
        }
        grid[p.id] = std::move(points);
    }
    return grid;
}

namespace {

struct PbCandidate {
    double revenue = -kInf;
    std::vector<int> sequence;       // ids
    std::vector<int> combo;          // grid index per position
};

bool pb_rank_less(const PbCandidate& a, const PbCandidate& b) {
    if (a.sequence.size() != b.sequence.size()) return a.sequence.size() < b.sequence.size();
    if (a.sequence != b.sequence)
        return std::lexicographical_compare(a.sequence.begin(), a.sequence.end(),
                                            b.sequence.begin(), b.sequence.end());
    return std::lexicographical_compare(a.combo.begin(), a.combo.end(), b.combo.begin(),
                                        b.combo.end());
}

// Realized alpha/beta per product per grid price, precomputed once.
struct PbTables {
    std::vector<PricedProduct> prods;              // id-sorted
    std::vector<std::vector<double>> price;        // [product][grid point]
    std::vector<std::vector<double>> alpha;
    std::vector<std::vector<double>> beta;
};

struct PbSearch {
    const PbTables& t;
    int budget;
    std::vector<int> stack;  // product indices by position
    PbCandidate best;

    // Evaluate every price combination of the current stack.
    void sweep() {
        const int len = static_cast<int>(stack.size());
        std::vector<int> combo(static_cast<size_t>(len), 0);
        while (true) {
            double partial = 0.0, reach = 1.0, gamma_sum = 0.0, beta_sum = 0.0;
            double f = 0.0;
            for (int k = 0; k < len; ++k) {
                int i = stack[static_cast<size_t>(k)];
                int j = combo[static_cast<size_t>(k)];
                gamma_sum += t.alpha[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                             t.beta[static_cast<size_t>(i)][static_cast<size_t>(j)];
                beta_sum += t.beta[static_cast<size_t>(i)][static_cast<size_t>(j)];
                double g = gamma_sum / (beta_sum + 1.0);
                double theta = t.prods[static_cast<size_t>(i)].theta;
                if (k + 1 == len) {
                    f = partial + reach * g;
                } else {
                    partial += (reach * (1.0 - theta)) * g;
                    reach *= theta;
                }
            }
            if (f > best.revenue) {
                best.revenue = f;
                best.sequence.clear();
                for (int i : stack) best.sequence.push_back(t.prods[static_cast<size_t>(i)].id);
                best.combo = combo;
            } else if (f == best.revenue) {
                PbCandidate cand;
                cand.revenue = f;
                for (int i : stack) cand.sequence.push_back(t.prods[static_cast<size_t>(i)].id);
                cand.combo = combo;
                if (pb_rank_less(cand, best)) best = std::move(cand);
            }
            int k = len - 1;
            while (k >= 0 && combo[static_cast<size_t>(k)] + 1 ==
                                 static_cast<int>(t.price[static_cast<size_t>(stack[static_cast<size_t>(k)])].size())) {
                combo[static_cast<size_t>(k)] = 0;
                --k;
            }
            if (k < 0) break;
            ++combo[static_cast<size_t>(k)];
        }
    }

    void dfs(std::uint64_t used) {
        const int n = static_cast<int>(t.prods.size());
        for (int idx = 0; idx < n; ++idx) {
            if (used & (1ull << idx)) continue;
            stack.push_back(idx);
            sweep();
            if (static_cast<int>(stack.size()) < budget) dfs(used | (1ull << idx));
            stack.pop_back();
        }
    }
};

}  // namespace

PbGridSolution exact_pb_grid(const PricedCatalog& catalog, const PriceGrid& grid, Execution exec) {
    if (catalog.size() > 5)
        throw SizeLimitError("exact_pb_grid enumerates sequences times grid^length; N = " +
                             std::to_string(catalog.size()) + " exceeds the limit 5");
    PbTables tables;
    tables.prods = catalog.products();
    std::sort(tables.prods.begin(), tables.prods.end(),
              [](const PricedProduct& a, const PricedProduct& b) { return a.id < b.id; });
    for (const PricedProduct& p : tables.prods) {
        auto it = grid.find(p.id);
        if (it == grid.end() || it->second.empty())
            throw std::invalid_argument("price grid missing product " + std::to_string(p.id));
        if (it->second.size() > 25)
            throw SizeLimitError("price grid for product " + std::to_string(p.id) +
                                 " exceeds 25 points");
        tables.price.push_back(it->second);
        std::vector<double> alphas, betas;
        for (double price : it->second) {
            alphas.push_back(price - p.cost);
            betas.push_back(std::exp(p.quality - price));
        }
        tables.alpha.push_back(std::move(alphas));
        tables.beta.push_back(std::move(betas));
    }

    const int n = static_cast<int>(tables.prods.size());
    std::vector<PbCandidate> per_first(static_cast<size_t>(n));
#pragma omp parallel for schedule(dynamic) if (exec == Execution::kParallel)
    for (int first = 0; first < n; ++first) {
        PbSearch search{tables, catalog.display_budget(), {}, {}};
        search.stack.push_back(first);
        search.sweep();
        if (catalog.display_budget() > 1) search.dfs(1ull << first);
        per_first[static_cast<size_t>(first)] = std::move(search.best);
    }

    const PbCandidate* best = nullptr;
    for (const PbCandidate& c : per_first) {
        if (!best || c.revenue > best->revenue ||
            (c.revenue == best->revenue && pb_rank_less(c, *best)))
            best = &c;
    }

    PbGridSolution out;
    out.sequence = best->sequence;
    for (size_t k = 0; k < best->sequence.size(); ++k) {
        int idx = 0;
        for (int i = 0; i < n; ++i)
            if (tables.prods[static_cast<size_t>(i)].id == best->sequence[k]) idx = i;
        out.prices[best->sequence[k]] =
            tables.price[static_cast<size_t>(idx)][static_cast<size_t>(best->combo[k])];
    }
    out.revenue = priced_sequence_revenue(out.sequence, out.prices, catalog);

    // Discretization slack at the optimum: per displayed product, the local
    // grid step times a finite-difference slope of f in that price.
    double bound = 0.0;
    for (size_t k = 0; k < out.sequence.size(); ++k) {
        int id = out.sequence[k];
        const std::vector<double>* pts = &grid.at(id);
        int j = best->combo[k];
        double step = 0.0, slope = 0.0;
        for (int dj : {-1, 1}) {
            int nj = j + dj;
            if (nj < 0 || nj >= static_cast<int>(pts->size())) continue;
            double dp = std::abs((*pts)[static_cast<size_t>(nj)] - (*pts)[static_cast<size_t>(j)]);
            if (dp <= 0.0) continue;
            PriceVector perturbed = out.prices;
            perturbed[id] = (*pts)[static_cast<size_t>(nj)];
            double fp = priced_sequence_revenue(out.sequence, perturbed, catalog);
            step = std::max(step, dp);
            slope = std::max(slope, std::abs(fp - out.revenue) / dp);
        }
        bound = std::max(bound, step * slope);
    }
    out.grid_error_bound = bound;
    return out;
}

// --- Monte Carlo simulator ------------------------------------------------------

namespace {

SimulationReport run_simulation(const std::vector<int>& ids, const std::vector<double>& thetas,
                                const std::vector<double>& betas,
                                const std::vector<double>& revenues, std::int64_t trials,
                                std::uint64_t seed, Execution exec) {
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    const int n = static_cast<int>(ids.size());

    std::vector<std::int64_t> purchases(static_cast<size_t>(n), 0);
    std::vector<std::int64_t> stops(static_cast<size_t>(n), 0);
    std::int64_t none = 0;

#pragma omp parallel if (exec == Execution::kParallel)
    {
        std::vector<std::int64_t> local_purchases(static_cast<size_t>(n), 0);
        std::vector<std::int64_t> local_stops(static_cast<size_t>(n), 0);
        std::int64_t local_none = 0;
#pragma omp for schedule(static)
        for (std::int64_t t = 0; t < trials; ++t) {
            Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(t));
            if (n == 0) {
                ++local_none;
                continue;
            }
            int k = 0;
            while (k + 1 < n && rng.next_u01() < thetas[static_cast<size_t>(k)]) ++k;
            ++local_stops[static_cast<size_t>(k)];
            double total = 1.0;
            for (int j = 0; j <= k; ++j) total += betas[static_cast<size_t>(j)];
            double draw = rng.next_u01() * total;
            int bought = -1;
            for (int j = 0; j <= k; ++j) {
                draw -= betas[static_cast<size_t>(j)];
                if (draw < 0.0) {
                    bought = j;
                    break;
                }
            }
            if (bought >= 0)
                ++local_purchases[static_cast<size_t>(bought)];
            else
                ++local_none;
        }
#pragma omp critical
        {
            for (int j = 0; j < n; ++j) {
                purchases[static_cast<size_t>(j)] += local_purchases[static_cast<size_t>(j)];
                stops[static_cast<size_t>(j)] += local_stops[static_cast<size_t>(j)];
            }
            none += local_none;
        }
    }

    const double t_d = static_cast<double>(trials);
    double sum = 0.0, sum_sq = 0.0;
    for (int j = 0; j < n; ++j) {
        sum += static_cast<double>(purchases[static_cast<size_t>(j)]) * revenues[static_cast<size_t>(j)];
        sum_sq += static_cast<double>(purchases[static_cast<size_t>(j)]) *
                  revenues[static_cast<size_t>(j)] * revenues[static_cast<size_t>(j)];
    }
    SimulationReport report;
    report.trials = trials;
    report.empirical_revenue = sum / t_d;
    if (trials > 1) {
        double variance = (sum_sq - t_d * report.empirical_revenue * report.empirical_revenue) /
                          (t_d - 1.0);
        report.std_error = std::sqrt(std::max(variance, 0.0) / t_d);
    }
    for (int j = 0; j < n; ++j)
        report.per_product_purchase_freq[ids[static_cast<size_t>(j)]] =
            static_cast<double>(purchases[static_cast<size_t>(j)]) / t_d;
    report.no_purchase_freq = static_cast<double>(none) / t_d;
    report.per_position_stop_freq.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j)
        report.per_position_stop_freq[static_cast<size_t>(j)] =
            static_cast<double>(stops[static_cast<size_t>(j)]) / t_d;
    return report;
}

}  // namespace

SimulationReport simulate(const DisplaySequence& seq, const Catalog& catalog, std::int64_t trials,
                          std::uint64_t seed, Execution exec) {
    std::vector<int> indices = sequence_indices(seq, catalog);
    std::vector<double> thetas, betas, revenues;
    for (int idx : indices) {
        const Product& p = catalog.products()[static_cast<size_t>(idx)];
        thetas.push_back(p.theta);
        betas.push_back(p.beta);
        revenues.push_back(p.alpha);
    }
    return run_simulation(seq, thetas, betas, revenues, trials, seed, exec);
}

SimulationReport simulate(const DisplaySequence& seq, const PriceVector& prices,
                          const PricedCatalog& catalog, std::int64_t trials, std::uint64_t seed,
                          Execution exec) {
    std::vector<int> indices = sequence_indices(seq, catalog);
    std::vector<double> thetas, betas, revenues;
    for (int idx : indices) {
        const PricedProduct& p = catalog.products()[static_cast<size_t>(idx)];
        auto it = prices.find(p.id);
        if (it == prices.end())
            throw std::invalid_argument("missing price for product " + std::to_string(p.id));
        thetas.push_back(p.theta);
        betas.push_back(std::exp(p.quality - it->second));
        revenues.push_back(it->second - p.cost);
    }
    return run_simulation(seq, thetas, betas, revenues, trials, seed, exec);
}

}  // namespace cascade
