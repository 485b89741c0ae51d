#include "cascade/fptas.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <memory>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cascade {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double minus_log(double theta) {
    if (theta <= 0.0) return kInf;
    if (theta >= 1.0) return 0.0;
    return -std::log(theta);
}

// Sum of the k largest elements.
double top_sum(std::vector<double> values, int k) {
    if (k <= 0 || values.empty()) return 0.0;
    k = std::min<int>(k, static_cast<int>(values.size()));
    std::partial_sort(values.begin(), values.begin() + k, values.end(), std::greater<>());
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += values[static_cast<size_t>(i)];
    return s;
}

std::int64_t saturating_round(double x) {
    if (x > 4.0e18) return static_cast<std::int64_t>(4.0e18);
    return static_cast<std::int64_t>(x);
}

}  // namespace

bool candidate_improves(double revenue, int last_product, std::span<const int> chosen_set,
                        double best_revenue, int best_last_product,
                        std::span<const int> best_chosen_set) {
    if (revenue != best_revenue) return revenue > best_revenue;
    if (last_product != best_last_product) return last_product < best_last_product;
    return std::lexicographical_compare(chosen_set.begin(), chosen_set.end(),
                                        best_chosen_set.begin(), best_chosen_set.end());
}

GuessGrid build_guess_grids(const Catalog& catalog, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0, 1)");
    double gamma_min = kInf, gamma_max = 0.0;
    double beta_min = kInf, beta_max = 0.0;
    for (const Product& p : catalog.products()) {
        double gamma = p.alpha * p.beta;
        if (gamma > 0.0) {
            gamma_min = std::min(gamma_min, gamma);
            gamma_max = std::max(gamma_max, gamma);
        }
        beta_min = std::min(beta_min, p.beta);
        beta_max = std::max(beta_max, p.beta);
    }
    if (!(gamma_max > 0.0))
        throw std::invalid_argument("guess grids need a product with positive alpha*beta");

    const double n = static_cast<double>(catalog.size());
    const double log_ratio = std::log1p(epsilon);
    auto build = [&](double lo, double hi) {
        std::vector<double> guesses;
        int a_max = static_cast<int>(std::ceil(std::log(n * hi / (epsilon * lo)) / log_ratio));
        a_max = std::max(a_max, 0);
        guesses.reserve(static_cast<size_t>(a_max) + 1);
        double g = lo;
        for (int a = 0; a <= a_max; ++a) {
            guesses.push_back(g);
            g *= (1.0 + epsilon);
        }
        return guesses;
    };
    return GuessGrid{build(gamma_min, gamma_max), build(beta_min, beta_max), epsilon};
}

std::vector<ScaledItem> scale_items(std::span<const Product> products, double gamma_guess,
                                    double beta_guess, double epsilon, int budget) {
    const double dg = gamma_guess * epsilon / static_cast<double>(budget);
    const double db = beta_guess * epsilon / static_cast<double>(budget);
    std::vector<ScaledItem> items;
    items.reserve(products.size());
    for (const Product& p : products) {
        double gamma = p.alpha * p.beta;
        ScaledItem it;
        it.id = p.id;
        it.scaled_gamma = gamma > 0.0 ? saturating_round(std::ceil(gamma / dg)) : 0;
        it.scaled_beta = saturating_round(std::floor(p.beta / db));
        it.omega = minus_log(p.theta);
        it.gamma = gamma;
        it.beta = p.beta;
        items.push_back(it);
    }
    return items;
}

std::int64_t dp_extent(int budget, double epsilon) {
    double b = static_cast<double>(budget);
    return static_cast<std::int64_t>(std::ceil(b * (1.0 + epsilon) / epsilon)) + budget;
}

// --- DpTable -----------------------------------------------------------------

DpTable::DpTable(std::int64_t u_max, std::int64_t v_max, int max_cardinality)
    : u_max_(u_max), v_max_(v_max), max_cardinality_(max_cardinality) {
    if (u_max < 0 || v_max < 0 || max_cardinality < 0)
        throw std::invalid_argument("dp table extents must be non-negative");
    std::size_t cells = static_cast<std::size_t>(u_max + 1) * static_cast<std::size_t>(v_max + 1) *
                        static_cast<std::size_t>(max_cardinality + 1);
    omega_.assign(cells, kInfinity);
    gamma_sum_.assign(cells, 0.0);
    beta_sum_.assign(cells, 0.0);
    node_.assign(cells, -1);
    omega_[cell(0, 0, 0)] = 0.0;
}

void DpTable::push(const ScaledItem& item) {
    ++items_pushed_;
    const std::int64_t sg = item.scaled_gamma;
    const std::int64_t sb = item.scaled_beta;
    if (sg <= u_max_) reach_u_ = (reach_u_ > u_max_ - sg) ? u_max_ : reach_u_ + sg;
    if (sb <= v_max_) reach_v_ = (reach_v_ > v_max_ - sb) ? v_max_ : reach_v_ + sb;
    if (sg > u_max_ || sb > v_max_) return;  // can never reach a stored cell

    const int l_hi = std::min(items_pushed_, max_cardinality_);
    const std::int64_t u_hi = reach_u_;
    const std::int64_t v_hi = reach_v_;
    const std::size_t vdim = static_cast<std::size_t>(v_max_ + 1);
    // the source cell sits one cardinality row down and (sg, sb) to the left
    const std::size_t src_shift = static_cast<std::size_t>(u_max_ + 1) * vdim +
                                  static_cast<std::size_t>(sg) * vdim + static_cast<std::size_t>(sb);
    for (int l = l_hi; l >= 1; --l) {
        for (std::int64_t u = u_hi; u >= sg; --u) {
            std::size_t row = cell(u, 0, l);
            for (std::int64_t v = v_hi; v >= sb; --v) {
                std::size_t dst = row + static_cast<std::size_t>(v);
                std::size_t src = dst - src_shift;
                double candidate = omega_[src] + item.omega;
                if (candidate < omega_[dst]) {
                    omega_[dst] = candidate;
                    gamma_sum_[dst] = gamma_sum_[src] + item.gamma;
                    beta_sum_[dst] = beta_sum_[src] + item.beta;
                    arena_.push_back(Node{item.id, node_[src]});
                    node_[dst] = static_cast<std::int32_t>(arena_.size()) - 1;
                }
            }
        }
    }
}

double DpTable::operator()(std::int64_t u, std::int64_t v, int l) const {
    if (u < 0 || u > u_max_ || v < 0 || v > v_max_ || l < 0 || l > max_cardinality_)
        return kInfinity;
    return omega_[cell(u, v, l)];
}

double DpTable::gamma_sum(std::int64_t u, std::int64_t v, int l) const {
    return gamma_sum_[cell(u, v, l)];
}

double DpTable::beta_sum(std::int64_t u, std::int64_t v, int l) const {
    return beta_sum_[cell(u, v, l)];
}

std::vector<int> DpTable::reconstruct(std::int64_t u, std::int64_t v, int l) const {
    std::size_t c = cell(u, v, l);
    if (omega_[c] == kInfinity) throw std::logic_error("reconstruct on an infeasible dp cell");
    std::vector<int> ids;
    for (std::int32_t n = node_[c]; n >= 0; n = arena_[static_cast<size_t>(n)].parent)
        ids.push_back(arena_[static_cast<size_t>(n)].item_id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::size_t DpTable::memory_bytes() const {
    return omega_.capacity() * sizeof(double) + gamma_sum_.capacity() * sizeof(double) +
           beta_sum_.capacity() * sizeof(double) + node_.capacity() * sizeof(std::int32_t) +
           arena_.capacity() * sizeof(Node) + sizeof(*this);
}

DpTable dp_fill(std::span<const ScaledItem> items, int budget, std::int64_t u_max,
                std::int64_t v_max) {
    DpTable table(u_max, v_max, budget);
    for (const ScaledItem& it : items) table.push(it);
    return table;
}

// --- solve_pa1 ---------------------------------------------------------------

namespace {

struct Pa1Candidate {
    double revenue = -kInf;
    int last_product = 0;
    std::vector<int> chosen_set;
};

struct PerYStats {
    std::uint64_t dp_fills = 0;
    std::uint64_t guess_pairs = 0;
    std::uint64_t peak_dp_bytes = 0;
    std::uint64_t scanned_cells = 0;
};

// Reusable table buffer. Clearing touches only the region the previous fill
// could have written.
class DpWorkspace {
  public:
    DpWorkspace(std::int64_t u_max, std::int64_t v_max, int max_cardinality)
        : u_max_(u_max), v_max_(v_max), l_max_(max_cardinality) {
        std::size_t cells = static_cast<std::size_t>(u_max + 1) *
                            static_cast<std::size_t>(v_max + 1) *
                            static_cast<std::size_t>(max_cardinality + 1);
        omega_.assign(cells, kInf);
        gamma_sum_.assign(cells, 0.0);
        beta_sum_.assign(cells, 0.0);
        node_.assign(cells, -1);
        omega_[0] = 0.0;
    }

    void reset() {
        for (int l = 0; l <= used_l_; ++l)
            for (std::int64_t u = 0; u <= reach_u_; ++u) {
                std::size_t base = cell(u, 0, l);
                std::fill_n(omega_.begin() + static_cast<std::ptrdiff_t>(base),
                            static_cast<std::size_t>(reach_v_ + 1), kInf);
                std::fill_n(node_.begin() + static_cast<std::ptrdiff_t>(base),
                            static_cast<std::size_t>(reach_v_ + 1), -1);
            }
        arena_.clear();
        omega_[0] = 0.0;
        reach_u_ = reach_v_ = 0;
        used_l_ = 0;
        items_pushed_ = 0;
    }

    void push(const ScaledItem& item) {
        ++items_pushed_;
        const std::int64_t sg = item.scaled_gamma;
        const std::int64_t sb = item.scaled_beta;
        if (sg > u_max_ || sb > v_max_) return;
        reach_u_ = (reach_u_ > u_max_ - sg) ? u_max_ : reach_u_ + sg;
        reach_v_ = (reach_v_ > v_max_ - sb) ? v_max_ : reach_v_ + sb;
        const int l_hi = std::min(items_pushed_, l_max_);
        used_l_ = std::max(used_l_, l_hi);
        const std::size_t vdim = static_cast<std::size_t>(v_max_ + 1);
        const std::size_t src_shift = static_cast<std::size_t>(u_max_ + 1) * vdim +
                                      static_cast<std::size_t>(sg) * vdim +
                                      static_cast<std::size_t>(sb);
        const double omega_j = item.omega;
        for (int l = l_hi; l >= 1; --l) {
            for (std::int64_t u = reach_u_; u >= sg; --u) {
                std::size_t row = cell(u, 0, l);
                for (std::int64_t v = reach_v_; v >= sb; --v) {
                    std::size_t dst = row + static_cast<std::size_t>(v);
                    std::size_t src = dst - src_shift;
                    double candidate = omega_[src] + omega_j;
                    if (candidate < omega_[dst]) {
                        omega_[dst] = candidate;
                        gamma_sum_[dst] = gamma_sum_[src] + item.gamma;
                        beta_sum_[dst] = beta_sum_[src] + item.beta;
                        arena_.push_back(Arc{item.id, node_[src]});
                        node_[dst] = static_cast<std::int32_t>(arena_.size()) - 1;
                    }
                }
            }
        }
    }

    // Scan feasible cells and fold them into `best` for the given y.
    void scan(double capacity, double gamma_y, double beta_y, int y_id, Pa1Candidate& best,
              std::uint64_t& scanned) const {
        for (int l = 0; l <= used_l_; ++l)
            for (std::int64_t u = 0; u <= reach_u_; ++u) {
                std::size_t base = cell(u, 0, l);
                for (std::int64_t v = 0; v <= reach_v_; ++v) {
                    std::size_t c = base + static_cast<std::size_t>(v);
                    ++scanned;
                    if (!(omega_[c] <= capacity)) continue;
                    double revenue = (gamma_sum_[c] + gamma_y) / (beta_sum_[c] + beta_y + 1.0);
                    if (revenue < best.revenue) continue;
                    std::vector<int> ids = reconstruct(c);
                    if (candidate_improves(revenue, y_id, ids, best.revenue, best.last_product,
                                           best.chosen_set)) {
                        best.revenue = revenue;
                        best.last_product = y_id;
                        best.chosen_set = std::move(ids);
                    }
                }
            }
    }

    std::size_t memory_bytes() const {
        return omega_.capacity() * sizeof(double) + gamma_sum_.capacity() * sizeof(double) +
               beta_sum_.capacity() * sizeof(double) + node_.capacity() * sizeof(std::int32_t) +
               arena_.capacity() * sizeof(Arc);
    }

  private:
    struct Arc {
        int item_id;
        std::int32_t parent;
    };

    std::size_t cell(std::int64_t u, std::int64_t v, int l) const {
        return (static_cast<std::size_t>(l) * static_cast<std::size_t>(u_max_ + 1) +
                static_cast<std::size_t>(u)) *
                   static_cast<std::size_t>(v_max_ + 1) +
               static_cast<std::size_t>(v);
    }

    std::vector<int> reconstruct(std::size_t c) const {
        std::vector<int> ids;
        for (std::int32_t n = node_[c]; n >= 0; n = arena_[static_cast<size_t>(n)].parent)
            ids.push_back(arena_[static_cast<size_t>(n)].item_id);
        std::sort(ids.begin(), ids.end());
        return ids;
    }

    std::int64_t u_max_, v_max_;
    int l_max_;
    int used_l_ = 0;
    int items_pushed_ = 0;
    std::int64_t reach_u_ = 0, reach_v_ = 0;
    std::vector<double> omega_, gamma_sum_, beta_sum_;
    std::vector<std::int32_t> node_;
    std::vector<Arc> arena_;
};

}  // namespace

Pa1Solution solve_pa1(const Catalog& catalog, double rho, double epsilon, Execution exec,
                      SolveStats* stats) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");

    std::vector<Product> prods = catalog.products();
    std::sort(prods.begin(), prods.end(), [](const Product& a, const Product& b) { return a.id < b.id; });
    const int n = static_cast<int>(prods.size());
    const int budget = catalog.display_budget();
    const double capacity = -std::log(rho);

    std::vector<double> gammas(static_cast<size_t>(n));
    double gamma_min_pos = kInf, alpha_min_pos = kInf, alpha_max_pos = 0.0, beta_min = kInf;
    bool any_positive_gamma = false;
    for (int i = 0; i < n; ++i) {
        gammas[static_cast<size_t>(i)] = prods[static_cast<size_t>(i)].alpha * prods[static_cast<size_t>(i)].beta;
        beta_min = std::min(beta_min, prods[static_cast<size_t>(i)].beta);
        if (gammas[static_cast<size_t>(i)] > 0.0) {
            any_positive_gamma = true;
            gamma_min_pos = std::min(gamma_min_pos, gammas[static_cast<size_t>(i)]);
            alpha_min_pos = std::min(alpha_min_pos, prods[static_cast<size_t>(i)].alpha);
            alpha_max_pos = std::max(alpha_max_pos, prods[static_cast<size_t>(i)].alpha);
        }
    }

    GuessGrid grid;
    if (any_positive_gamma && budget >= 2) grid = build_guess_grids(catalog, epsilon);

    std::vector<double> betas(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) betas[static_cast<size_t>(i)] = prods[static_cast<size_t>(i)].beta;
    const double gamma_top = top_sum(gammas, budget - 1);
    const double beta_top = top_sum(betas, budget - 1);

    // Guess-pair pruning: keep only pairs that could cover a nonempty optimal
    // set. The empty set is seeded as an explicit candidate per y, so pruned
    // pairs never remove the covering pair the approximation proof needs.
    const double margin = (1.0 + epsilon) * (1.0 + epsilon);
    auto gamma_guess_useful = [&](double g) {
        return g * (1.0 + epsilon) * margin >= gamma_min_pos && g <= margin * gamma_top;
    };
    auto beta_guess_useful = [&](double h) {
        return h * (1.0 + epsilon) * margin >= beta_min && h <= margin * beta_top;
    };
    auto pair_in_band = [&](double g, double h) {
        return h * alpha_max_pos * margin >= g && h * alpha_min_pos <= g * margin;
    };

    // Candidates for the final slot: when some product earns revenue, a
    // zero-revenue y is dominated (move a revenue product of S to the last
    // slot instead) and is skipped.
    std::vector<int> y_indices;
    for (int i = 0; i < n; ++i)
        if (!any_positive_gamma || gammas[static_cast<size_t>(i)] > 0.0) y_indices.push_back(i);

    const std::int64_t extent = dp_extent(budget, epsilon);
    const bool run_dp = any_positive_gamma && budget >= 2 && n >= 2;

    std::vector<Pa1Candidate> results(y_indices.size());
    std::vector<PerYStats> per_y_stats(y_indices.size());
    std::exception_ptr failure = nullptr;

#pragma omp parallel if (exec == Execution::kParallel)
    {
        std::unique_ptr<DpWorkspace> ws;
        std::vector<ScaledItem> items;
        items.reserve(static_cast<size_t>(n));
#pragma omp for schedule(dynamic)
        for (std::int64_t yi = 0; yi < static_cast<std::int64_t>(y_indices.size()); ++yi) {
            try {
                const int y = y_indices[static_cast<size_t>(yi)];
                const Product& py = prods[static_cast<size_t>(y)];
                const double gamma_y = gammas[static_cast<size_t>(y)];
                Pa1Candidate best;
                best.revenue = gamma_y / (py.beta + 1.0);  // S empty, y alone
                best.last_product = py.id;
                PerYStats& st = per_y_stats[static_cast<size_t>(yi)];

                if (run_dp) {
                    if (!ws) ws = std::make_unique<DpWorkspace>(extent, extent, budget - 1);
                    for (double g_guess : grid.gamma_guesses) {
                        if (!gamma_guess_useful(g_guess)) {
                            st.guess_pairs += grid.beta_guesses.size();
                            continue;
                        }
                        const double dg = g_guess * epsilon / static_cast<double>(budget);
                        for (double b_guess : grid.beta_guesses) {
                            ++st.guess_pairs;
                            if (!beta_guess_useful(b_guess)) continue;
                            if (!pair_in_band(g_guess, b_guess)) continue;
                            const double db = b_guess * epsilon / static_cast<double>(budget);
                            items.clear();
                            for (int i = 0; i < n; ++i) {
                                if (i == y) continue;
                                const Product& p = prods[static_cast<size_t>(i)];
                                double omega = minus_log(p.theta);
                                if (!(omega <= capacity)) continue;  // too deep to ever reach
                                ScaledItem it;
                                it.id = p.id;
                                it.scaled_gamma = gammas[static_cast<size_t>(i)] > 0.0
                                                      ? saturating_round(std::ceil(gammas[static_cast<size_t>(i)] / dg))
                                                      : 0;
                                it.scaled_beta = saturating_round(std::floor(p.beta / db));
                                if (it.scaled_gamma > extent || it.scaled_beta > extent) continue;
                                it.omega = omega;
                                it.gamma = gammas[static_cast<size_t>(i)];
                                it.beta = p.beta;
                                items.push_back(it);
                            }
                            if (items.empty()) continue;
                            ws->reset();
                            for (const ScaledItem& it : items) ws->push(it);
                            ++st.dp_fills;
                            st.peak_dp_bytes = std::max<std::uint64_t>(st.peak_dp_bytes, ws->memory_bytes());
                            ws->scan(capacity, gamma_y, py.beta, py.id, best, st.scanned_cells);
                        }
                    }
                }
                results[static_cast<size_t>(yi)] = std::move(best);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);

    const Pa1Candidate* best = nullptr;
    for (const Pa1Candidate& c : results) {
        if (!best || candidate_improves(c.revenue, c.last_product, c.chosen_set, best->revenue,
                                        best->last_product, best->chosen_set))
            best = &c;
    }

    if (stats) {
        for (const PerYStats& st : per_y_stats) {
            stats->dp_fills += st.dp_fills;
            stats->guess_pairs += st.guess_pairs;
            stats->scanned_cells += st.scanned_cells;
            stats->peak_dp_bytes = std::max(stats->peak_dp_bytes, st.peak_dp_bytes);
        }
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

// --- knapsack with a cardinality dimension -----------------------------------

std::vector<int> knapsack_fptas_cardinality(std::span<const KnapsackItem> items, double capacity,
                                            int cardinality, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (capacity < 0.0) throw std::invalid_argument("capacity must be non-negative");
    std::vector<KnapsackItem> kept;
    kept.reserve(items.size());
    for (const KnapsackItem& it : items) {
        if (!(it.value > 0.0)) throw std::invalid_argument("knapsack values must be positive");
        if (it.weight <= capacity) kept.push_back(it);
    }
    if (kept.empty() || cardinality <= 0) return {};

    double v_max = 0.0;
    bool integral = true;
    for (const KnapsackItem& it : kept) {
        v_max = std::max(v_max, it.value);
        integral = integral && std::abs(it.value - std::round(it.value)) <= 1e-9;
    }
    double step = epsilon * v_max / static_cast<double>(cardinality);
    // On integral inputs a sub-unit step loses nothing; snap to 1 and the
    // scaled problem is exact.
    if (integral && step < 1.0) step = 1.0;

    const int k_max = std::min<int>(cardinality, static_cast<int>(kept.size()));
    std::vector<std::int64_t> profits(kept.size());
    for (size_t i = 0; i < kept.size(); ++i)
        profits[i] = saturating_round(std::floor(kept[i].value / step));
    std::vector<std::int64_t> sorted_profits = profits;
    std::sort(sorted_profits.begin(), sorted_profits.end(), std::greater<>());
    std::int64_t p_cap = 0;
    for (int i = 0; i < k_max; ++i) p_cap += sorted_profits[static_cast<size_t>(i)];

    const std::size_t pdim = static_cast<std::size_t>(p_cap) + 1;
    const std::size_t cells = pdim * static_cast<std::size_t>(k_max + 1);
    if (cells > 200'000'000)
        throw std::length_error("knapsack profit table too large; increase epsilon");

    struct Arc {
        int item_index;
        std::int32_t parent;
    };
    std::vector<double> weight(cells, kInf);
    std::vector<double> value(cells, 0.0);
    std::vector<std::int32_t> node(cells, -1);
    std::vector<Arc> arena;
    weight[0] = 0.0;

    auto cell = [&](std::int64_t p, int l) {
        return static_cast<std::size_t>(l) * pdim + static_cast<std::size_t>(p);
    };

    std::int64_t reach = 0;
    for (size_t j = 0; j < kept.size(); ++j) {
        const std::int64_t pj = profits[j];
        const double wj = kept[j].weight;
        const double vj = kept[j].value;
        reach = std::min(p_cap, reach + pj);
        const int l_hi = std::min<int>(static_cast<int>(j) + 1, k_max);
        for (int l = l_hi; l >= 1; --l) {
            for (std::int64_t p = reach; p >= pj; --p) {
                std::size_t dst = cell(p, l);
                std::size_t src = cell(p - pj, l - 1);
                double w = weight[src] + wj;
                if (w > capacity) continue;
                double tv = value[src] + vj;
                if (w < weight[dst] || (w == weight[dst] && tv > value[dst])) {
                    weight[dst] = w;
                    value[dst] = tv;
                    arena.push_back(Arc{static_cast<int>(j), node[src]});
                    node[dst] = static_cast<std::int32_t>(arena.size()) - 1;
                }
            }
        }
    }

    std::size_t best_cell = 0;
    double best_value = 0.0;
    for (int l = 0; l <= k_max; ++l)
        for (std::int64_t p = 0; p <= reach; ++p) {
            std::size_t c = cell(p, l);
            if (weight[c] <= capacity && value[c] > best_value) {
                best_value = value[c];
                best_cell = c;
            }
        }

    std::vector<int> ids;
    for (std::int32_t nidx = node[best_cell]; nidx >= 0; nidx = arena[static_cast<size_t>(nidx)].parent)
        ids.push_back(kept[static_cast<size_t>(arena[static_cast<size_t>(nidx)].item_index)].id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

// --- solve_pb1 ---------------------------------------------------------------

Pb1Solution solve_pb1(const PricedCatalog& catalog, double rho, double epsilon, Execution exec,
                      SolveStats* stats) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");

    std::vector<PricedProduct> prods = catalog.products();
    std::sort(prods.begin(), prods.end(),
              [](const PricedProduct& a, const PricedProduct& b) { return a.id < b.id; });
    const int n = static_cast<int>(prods.size());
    const int budget = catalog.display_budget();
    const double capacity = -std::log(rho);

    std::vector<double> potentials(static_cast<size_t>(n));
    std::vector<double> omegas(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        potentials[static_cast<size_t>(i)] = preference_potential(prods[static_cast<size_t>(i)]);
        omegas[static_cast<size_t>(i)] = minus_log(prods[static_cast<size_t>(i)].theta);
    }

    struct Candidate {
        double score = -kInf;  // sum of preference potentials, chosen set + y
        int last_product = 0;
        std::vector<int> chosen_set;
    };
    std::vector<Candidate> results(static_cast<size_t>(n));
    std::exception_ptr failure = nullptr;

#pragma omp parallel for schedule(dynamic) if (exec == Execution::kParallel)
    for (int y = 0; y < n; ++y) {
        try {
            std::vector<KnapsackItem> items;
            items.reserve(static_cast<size_t>(n - 1));
            for (int i = 0; i < n; ++i) {
                if (i == y) continue;
                items.push_back(KnapsackItem{prods[static_cast<size_t>(i)].id,
                                             potentials[static_cast<size_t>(i)],
                                             omegas[static_cast<size_t>(i)]});
            }
            std::vector<int> chosen =
                knapsack_fptas_cardinality(items, capacity, budget - 1, epsilon);
            double score = 0.0;
            for (int id : chosen) score += preference_potential(catalog.product(id));
            score += potentials[static_cast<size_t>(y)];
            results[static_cast<size_t>(y)] =
                Candidate{score, prods[static_cast<size_t>(y)].id, std::move(chosen)};
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    const Candidate* best = nullptr;
    for (const Candidate& c : results) {
        if (!best || candidate_improves(c.score, c.last_product, c.chosen_set, best->score,
                                        best->last_product, best->chosen_set))
            best = &c;
    }
    if (stats) stats->dp_fills += static_cast<std::uint64_t>(n);

    Pb1Solution out;
    out.chosen_set = best->chosen_set;
    out.last_product = best->last_product;
    std::vector<int> full = best->chosen_set;
    full.push_back(best->last_product);
    std::sort(full.begin(), full.end());
    auto [prices, revenue] = optimal_prices(full, catalog);
    out.prices = std::move(prices);
    out.revenue = revenue;
    return out;
}

}  // namespace cascade
