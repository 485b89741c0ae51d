#include "cascade/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cascade/io.hpp"
#include "cascade/model.hpp"
#include "cascade/oracle.hpp"
#include "cascade/rng.hpp"
#include "cascade/sequencer.hpp"

namespace cascade::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

// Parameters that make the configured problem unsolvable (exit code 3), as
// opposed to malformed input (exit code 2).
class Infeasible : public std::runtime_error {
  public:
    explicit Infeasible(const std::string& what) : std::runtime_error(what) {}
};

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
    out << text;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(current);
    return parts;
}

int parse_int(const std::string& text) {
    size_t pos = 0;
    int value = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("not an integer: " + text);
    return value;
}

double parse_real(const std::string& text) {
    size_t pos = 0;
    double value = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("not a number: " + text);
    return value;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    for (const std::string& part : split(text, ',')) values.push_back(parse_int(part));
    return values;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> values;
    for (const std::string& part : split(text, ',')) values.push_back(parse_real(part));
    return values;
}

PriceVector parse_prices(const std::string& text) {
    PriceVector prices;
    for (const std::string& part : split(text, ',')) {
        auto eq = part.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("price entries must look like id=value: " + part);
        prices[parse_int(part.substr(0, eq))] = parse_real(part.substr(eq + 1));
    }
    return prices;
}

void require_solver_params(double rho, double epsilon) {
    if (!(rho > 0.0 && rho < 1.0)) throw Infeasible("rho must lie strictly between 0 and 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw Infeasible("epsilon must lie strictly between 0 and 1");
}

Instance generate_instance(int n, int b, bool priced, std::uint64_t seed) {
    if (b < 1 || n < b) throw std::invalid_argument("sizes must satisfy n >= b >= 1");
    Rng rng(seed);
    if (priced) {
        std::vector<PricedProduct> products;
        products.reserve(static_cast<size_t>(n));
        for (int i = 1; i <= n; ++i) {
            PricedProduct p;
            p.id = i;
            p.quality = rng.uniform(0.0, 5.0);
            p.cost = rng.uniform(0.1, 2.0);
            p.theta = rng.uniform(0.5, 0.99);
            products.push_back(p);
        }
        return Instance{PricedCatalog(std::move(products), b)};
    }
    std::vector<Product> products;
    products.reserve(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) {
        Product p;
        p.id = i;
        p.alpha = rng.uniform(0.1, 10.0);
        p.beta = rng.uniform(0.1, 5.0);
        p.theta = rng.uniform(0.5, 0.99);
        products.push_back(p);
    }
    return Instance{Catalog(std::move(products), b)};
}

ordered_json prices_to_json(const PriceVector& prices) {
    ordered_json obj = ordered_json::object();
    for (const auto& [id, price] : prices) obj[std::to_string(id)] = price;
    return obj;
}

// --- subcommand bodies -------------------------------------------------------

struct SolveOptions {
    std::string instance_path;
    double rho = 0.5;
    double epsilon = 0.1;
    std::string out;
    bool serial = false;
};

int run_solve(const SolveOptions& opt) {
    Instance instance = load_instance(opt.instance_path);
    require_solver_params(opt.rho, opt.epsilon);
    Execution exec = opt.serial ? Execution::kSerial : Execution::kParallel;

    ordered_json doc;
    doc["command"] = "solve";
    doc["mode"] = instance.priced() ? "priced" : "fixed";
    doc["n"] = instance.size();
    doc["b"] = instance.display_budget();
    doc["rho"] = opt.rho;
    doc["epsilon"] = opt.epsilon;
    if (instance.priced()) {
        SequencingResult result =
            solve_pricing(instance.priced_catalog(), opt.rho, opt.epsilon, exec);
        doc["sequence"] = result.sequence;
        doc["prices"] = prices_to_json(*result.prices);
        doc["revenue"] = result.revenue;
        doc["certified_ratio"] = result.certified_ratio;
    } else {
        SequencingResult result =
            solve_sequencing(instance.fixed_catalog(), opt.rho, opt.epsilon, exec);
        doc["sequence"] = result.sequence;
        doc["revenue"] = result.revenue;
        doc["certified_ratio"] = result.certified_ratio;
    }
    write_output(doc.dump(2) + "\n", opt.out);
    return 0;
}

struct ExactOptions {
    std::string instance_path;
    int grid_points = 21;
    std::string out;
    bool serial = false;
};

int run_exact(const ExactOptions& opt) {
    Instance instance = load_instance(opt.instance_path);
    Execution exec = opt.serial ? Execution::kSerial : Execution::kParallel;

    ordered_json doc;
    doc["command"] = "exact";
    doc["mode"] = instance.priced() ? "priced" : "fixed";
    doc["n"] = instance.size();
    doc["b"] = instance.display_budget();
    if (instance.priced()) {
        const PricedCatalog& catalog = instance.priced_catalog();
        PbGridSolution result =
            exact_pb_grid(catalog, default_price_grid(catalog, opt.grid_points), exec);
        doc["oracle"] = "exact_pb_grid";
        doc["grid_points"] = opt.grid_points;
        doc["sequence"] = result.sequence;
        doc["prices"] = prices_to_json(result.prices);
        doc["revenue"] = result.revenue;
        doc["grid_error_bound"] = result.grid_error_bound;
    } else {
        ExactPaSolution result = exact_pa(instance.fixed_catalog(), 8, exec);
        doc["oracle"] = "exact_pa";
        doc["sequence"] = result.sequence;
        doc["revenue"] = result.revenue;
    }
    write_output(doc.dump(2) + "\n", opt.out);
    return 0;
}

struct GenOptions {
    int n = 0;
    int b = 0;
    std::string mode = "fixed";
    std::uint64_t seed = 1;
    std::string out;
};

int run_gen(const GenOptions& opt) {
    if (opt.mode != "fixed" && opt.mode != "priced")
        throw std::invalid_argument("mode must be fixed or priced");
    Instance instance = generate_instance(opt.n, opt.b, opt.mode == "priced", opt.seed);
    write_output(instance_to_json(instance), opt.out);
    return 0;
}

struct SimulateOptions {
    std::string instance_path;
    std::string sequence;
    std::string prices;
    std::int64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    std::string out;
    bool serial = false;
};

int run_simulate(const SimulateOptions& opt) {
    Instance instance = load_instance(opt.instance_path);
    Execution exec = opt.serial ? Execution::kSerial : Execution::kParallel;
    DisplaySequence seq = parse_int_list(opt.sequence);

    ordered_json doc;
    doc["command"] = "simulate";
    doc["trials"] = opt.trials;
    doc["seed"] = opt.seed;
    doc["sequence"] = seq;

    SimulationReport report;
    double model_revenue = 0.0;
    if (instance.priced()) {
        const PricedCatalog& catalog = instance.priced_catalog();
        PriceVector prices;
        if (!opt.prices.empty()) {
            prices = parse_prices(opt.prices);
        } else {
            // displayed set priced at the closed-form optimum
            sequence_indices(seq, catalog);  // id validation
            std::vector<int> set = seq;
            std::sort(set.begin(), set.end());
            prices = optimal_prices(set, catalog).first;
        }
        report = simulate(seq, prices, catalog, opt.trials, opt.seed, exec);
        model_revenue = priced_sequence_revenue(seq, prices, catalog);
        doc["prices"] = prices_to_json(prices);
    } else {
        report = simulate(seq, instance.fixed_catalog(), opt.trials, opt.seed, exec);
        model_revenue = sequence_revenue(seq, instance.fixed_catalog());
    }

    doc["empirical_revenue"] = report.empirical_revenue;
    doc["std_error"] = report.std_error;
    doc["model_revenue"] = model_revenue;
    ordered_json freq = ordered_json::object();
    for (const auto& [id, f] : report.per_product_purchase_freq) freq[std::to_string(id)] = f;
    doc["per_product_purchase_freq"] = std::move(freq);
    doc["no_purchase_freq"] = report.no_purchase_freq;
    doc["per_position_stop_freq"] = report.per_position_stop_freq;
    write_output(doc.dump(2) + "\n", opt.out);
    return 0;
}

struct BenchOptions {
    std::string n_list = "5";
    std::string b_list = "3";
    std::string eps_list = "0.1";
    std::string rho_list = "0.5";
    std::string seeds = "1";
    std::string mode = "fixed";
    int grid_points = 21;
    std::string out;
    bool serial = false;
};

int run_bench(const BenchOptions& opt) {
    if (opt.mode != "fixed" && opt.mode != "priced")
        throw std::invalid_argument("mode must be fixed or priced");
    const bool priced = opt.mode == "priced";
    const std::vector<int> ns = parse_int_list(opt.n_list);
    const std::vector<int> bs = parse_int_list(opt.b_list);
    const std::vector<double> epsilons = parse_real_list(opt.eps_list);
    const std::vector<double> rhos = parse_real_list(opt.rho_list);
    const std::vector<int> seeds = parse_int_list(opt.seeds);
    Execution exec = opt.serial ? Execution::kSerial : Execution::kParallel;

    std::string csv = "instance,N,B,epsilon,rho,alg_revenue,oracle_revenue,realized_ratio,"
                      "certified_ratio,wall_ms\n";
    for (int n : ns)
        for (int b : bs) {
            if (b < 1 || b > n) continue;  // infeasible combination, not an error
            for (double epsilon : epsilons)
                for (double rho : rhos)
                    for (int seed : seeds) {
                        require_solver_params(rho, epsilon);
                        Instance instance =
                            generate_instance(n, b, priced, static_cast<std::uint64_t>(seed));
                        const std::string name = opt.mode + "-n" + std::to_string(n) + "-b" +
                                                 std::to_string(b) + "-s" + std::to_string(seed);

                        auto t0 = std::chrono::steady_clock::now();
                        double alg_revenue = 0.0;
                        double certified = 0.0;
                        if (priced) {
                            SequencingResult r =
                                solve_pricing(instance.priced_catalog(), rho, epsilon, exec);
                            alg_revenue = r.revenue;
                            certified = r.certified_ratio;
                        } else {
                            SequencingResult r =
                                solve_sequencing(instance.fixed_catalog(), rho, epsilon, exec);
                            alg_revenue = r.revenue;
                            certified = r.certified_ratio;
                        }
                        auto t1 = std::chrono::steady_clock::now();
                        double wall_ms =
                            std::chrono::duration<double, std::milli>(t1 - t0).count();

                        // oracle columns only at enumeration scale; failures
                        // leave them empty rather than dropping the row
                        std::string oracle_cell, ratio_cell;
                        try {
                            double oracle_revenue = -1.0;
                            if (priced && n <= 5 && b <= 3) {
                                const PricedCatalog& catalog = instance.priced_catalog();
                                oracle_revenue =
                                    exact_pb_grid(catalog,
                                                  default_price_grid(catalog, opt.grid_points),
                                                  exec)
                                        .revenue;
                            } else if (!priced && n <= 8) {
                                oracle_revenue = exact_pa(instance.fixed_catalog(), 8, exec).revenue;
                            }
                            if (oracle_revenue >= 0.0) {
                                oracle_cell = format_double(oracle_revenue);
                                if (oracle_revenue > 0.0)
                                    ratio_cell = format_double(alg_revenue / oracle_revenue);
                            }
                        } catch (const std::exception&) {
                        }

                        csv += csv_row({name, std::to_string(n), std::to_string(b),
                                        format_double(epsilon), format_double(rho),
                                        format_double(alg_revenue), oracle_cell, ratio_cell,
                                        format_double(certified), format_double(wall_ms)});
                    }
        }
    write_output(csv, opt.out);
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Product sequencing and pricing under a cascade browse + MNL consumer model"};
    app.require_subcommand(1);

    SolveOptions solve_opt;
    CLI::App* solve = app.add_subcommand(
        "solve", "Run the approximation pipeline on an instance file");
    solve->add_option("instance", solve_opt.instance_path, "Instance JSON file")->required();
    solve->add_option("--rho", solve_opt.rho, "Reachability threshold in (0,1)");
    solve->add_option("--epsilon", solve_opt.epsilon, "Approximation parameter in (0,1)");
    solve->add_option("--out", solve_opt.out, "Write the result document here (default stdout)");
    solve->add_flag("--serial", solve_opt.serial, "Disable the parallel solve path");

    ExactOptions exact_opt;
    CLI::App* exact = app.add_subcommand(
        "exact", "Exhaustive optimum (fixed mode) or grid-price optimum (priced mode)");
    exact->add_option("instance", exact_opt.instance_path, "Instance JSON file")->required();
    exact->add_option("--grid-points", exact_opt.grid_points,
                      "Price grid points per product (priced mode)");
    exact->add_option("--out", exact_opt.out, "Write the result document here (default stdout)");
    exact->add_flag("--serial", exact_opt.serial, "Disable the parallel enumeration");

    GenOptions gen_opt;
    CLI::App* gen = app.add_subcommand("gen", "Generate a seeded random instance");
    gen->add_option("--n", gen_opt.n, "Number of products")->required();
    gen->add_option("--b", gen_opt.b, "Display budget")->required();
    gen->add_option("--mode", gen_opt.mode, "fixed or priced");
    gen->add_option("--seed", gen_opt.seed, "Generator seed");
    gen->add_option("--out", gen_opt.out, "Write the instance here (default stdout)");

    SimulateOptions sim_opt;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Monte Carlo consumer simulation of a display sequence");
    simulate->add_option("instance", sim_opt.instance_path, "Instance JSON file")->required();
    simulate->add_option("--sequence", sim_opt.sequence, "Comma-separated product ids")
        ->required();
    simulate->add_option("--prices", sim_opt.prices,
                         "Comma-separated id=price pairs (priced mode; default: closed-form "
                         "optimal prices of the displayed set)");
    simulate->add_option("--trials", sim_opt.trials, "Number of simulated consumers");
    simulate->add_option("--seed", sim_opt.seed, "Simulation seed");
    simulate->add_option("--out", sim_opt.out, "Write the report here (default stdout)");
    simulate->add_flag("--serial", sim_opt.serial, "Disable the parallel trial loop");

    BenchOptions bench_opt;
    CLI::App* bench = app.add_subcommand(
        "bench", "Sweep generated instances and emit a CSV of revenue ratios");
    bench->add_option("--n-list", bench_opt.n_list, "Comma-separated product counts");
    bench->add_option("--b-list", bench_opt.b_list, "Comma-separated display budgets");
    bench->add_option("--eps-list", bench_opt.eps_list, "Comma-separated epsilon values");
    bench->add_option("--rho-list", bench_opt.rho_list, "Comma-separated rho values");
    bench->add_option("--seeds", bench_opt.seeds, "Comma-separated generator seeds");
    bench->add_option("--mode", bench_opt.mode, "fixed or priced");
    bench->add_option("--grid-points", bench_opt.grid_points,
                      "Price grid points for the priced oracle");
    bench->add_option("--out", bench_opt.out, "Write the CSV here (default stdout)");
    bench->add_flag("--serial", bench_opt.serial, "Disable the parallel solve path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (solve->parsed()) return run_solve(solve_opt);
        if (exact->parsed()) return run_exact(exact_opt);
        if (gen->parsed()) return run_gen(gen_opt);
        if (simulate->parsed()) return run_simulate(sim_opt);
        if (bench->parsed()) return run_bench(bench_opt);
    } catch (const SizeLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Infeasible& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace cascade::cli
