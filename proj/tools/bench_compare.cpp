// Times the serial reference path against the OpenMP path for the solver and
// the simulator, and checks that both produce identical results.

#include <chrono>
#include <cstdio>
#include <vector>

#include "cascade/model.hpp"
#include "cascade/oracle.hpp"
#include "cascade/rng.hpp"
#include "cascade/sequencer.hpp"

namespace {

using cascade::Execution;

cascade::Catalog random_catalog(int n, int b, std::uint64_t seed) {
    cascade::Rng rng(seed);
    std::vector<cascade::Product> products;
    products.reserve(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i)
        products.push_back(cascade::Product{i, rng.uniform(0.1, 10.0), rng.uniform(0.1, 5.0),
                                            rng.uniform(0.5, 0.99)});
    return cascade::Catalog(std::move(products), b);
}

template <typename F>
double time_ms(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main() {
    const double rho = 0.5;
    const double epsilon = 0.25;
    int failures = 0;

    std::printf("%-22s %12s %12s %9s\n", "case", "serial ms", "parallel ms", "speedup");

    for (int n : {15, 25}) {
        cascade::Catalog catalog = random_catalog(n, 4, 7000 + static_cast<std::uint64_t>(n));
        cascade::SequencingResult serial_result, parallel_result;
        double ts = time_ms([&] {
            serial_result = cascade::solve_sequencing(catalog, rho, epsilon, Execution::kSerial);
        });
        double tp = time_ms([&] {
            parallel_result =
                cascade::solve_sequencing(catalog, rho, epsilon, Execution::kParallel);
        });
        bool same = serial_result.sequence == parallel_result.sequence &&
                    serial_result.revenue == parallel_result.revenue;
        if (!same) {
            std::printf("MISMATCH: solve n=%d serial and parallel results differ\n", n);
            ++failures;
        }
        char name[32];
        std::snprintf(name, sizeof(name), "solve n=%d", n);
        std::printf("%-22s %12.1f %12.1f %8.2fx\n", name, ts, tp, ts / tp);

        const std::int64_t trials = 1'000'000;
        cascade::SimulationReport rs, rp;
        double ss = time_ms([&] {
            rs = cascade::simulate(serial_result.sequence, catalog, trials, 42, Execution::kSerial);
        });
        double sp = time_ms([&] {
            rp = cascade::simulate(serial_result.sequence, catalog, trials, 42,
                                   Execution::kParallel);
        });
        if (rs.empirical_revenue != rp.empirical_revenue ||
            rs.per_product_purchase_freq != rp.per_product_purchase_freq) {
            std::printf("MISMATCH: simulate n=%d serial and parallel reports differ\n", n);
            ++failures;
        }
        std::snprintf(name, sizeof(name), "simulate n=%d", n);
        std::printf("%-22s %12.1f %12.1f %8.2fx\n", name, ss, sp, ss / sp);
    }

    if (failures) {
        std::printf("%d mismatches\n", failures);
        return 1;
    }
    std::printf("serial and parallel paths agree\n");
    return 0;
}
