#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "cascade/cli.hpp"
#include "cascade/io.hpp"
#include "cascade/model.hpp"
#include "cascade/oracle.hpp"

using nlohmann::json;

namespace {

int run_cli(std::initializer_list<std::string> args) {
    std::vector<std::string> owned{"cascade"};
    owned.insert(owned.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const std::string& s : owned) argv.push_back(s.c_str());
    return cascade::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string tmp_path(const std::string& name) { return "/tmp/cascade_cli_" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

json slurp_json(const std::string& path) { return json::parse(slurp(path)); }

}  // namespace

TEST_CASE("gen is deterministic and respects its ranges") {
    std::string f1 = tmp_path("gen1.json"), f2 = tmp_path("gen2.json"), f3 = tmp_path("gen3.json");
    CHECK(run_cli({"gen", "--n", "6", "--b", "3", "--seed", "7", "--out", f1}) == 0);
    CHECK(run_cli({"gen", "--n", "6", "--b", "3", "--seed", "7", "--out", f2}) == 0);
    CHECK(run_cli({"gen", "--n", "6", "--b", "3", "--seed", "8", "--out", f3}) == 0);
    CHECK(slurp(f1) == slurp(f2));
    CHECK(slurp(f1) != slurp(f3));

    cascade::Instance instance = cascade::load_instance(f1);
    CHECK_FALSE(instance.priced());
    CHECK(instance.size() == 6);
    CHECK(instance.display_budget() == 3);
    const cascade::Catalog& catalog = instance.fixed_catalog();
    int expect_id = 1;
    for (const cascade::Product& p : catalog.products()) {
        CHECK(p.id == expect_id++);
        CHECK(p.alpha >= 0.1);
        CHECK(p.alpha <= 10.0);
        CHECK(p.beta >= 0.1);
        CHECK(p.beta <= 5.0);
        CHECK(p.theta >= 0.5);
        CHECK(p.theta <= 0.99);
    }

    // the generator output is exactly the serializer output
    CHECK(slurp(f1) == cascade::instance_to_json(instance));
}

TEST_CASE("gen priced mode") {
    std::string f = tmp_path("gen_priced.json");
    CHECK(run_cli({"gen", "--n", "4", "--b", "2", "--mode", "priced", "--seed", "5", "--out", f}) ==
          0);
    cascade::Instance instance = cascade::load_instance(f);
    REQUIRE(instance.priced());
    for (const cascade::PricedProduct& p : instance.priced_catalog().products()) {
        CHECK(p.quality >= 0.0);
        CHECK(p.quality <= 5.0);
        CHECK(p.cost >= 0.1);
        CHECK(p.cost <= 2.0);
        CHECK(p.theta >= 0.5);
        CHECK(p.theta <= 0.99);
    }
    CHECK(slurp(f) == cascade::instance_to_json(instance));
}

TEST_CASE("solve emits a complete reproducible document") {
    std::string inst = tmp_path("solve_inst.json"), doc1 = tmp_path("solve1.json"),
                doc2 = tmp_path("solve2.json");
    REQUIRE(run_cli({"gen", "--n", "8", "--b", "3", "--seed", "3", "--out", inst}) == 0);
    CHECK(run_cli({"solve", inst, "--out", doc1}) == 0);
    CHECK(run_cli({"solve", inst, "--out", doc2}) == 0);
    CHECK(slurp(doc1) == slurp(doc2));

    json doc = slurp_json(doc1);
    CHECK(doc.at("command") == "solve");
    CHECK(doc.at("mode") == "fixed");
    CHECK(doc.at("n") == 8);
    CHECK(doc.at("b") == 3);
    CHECK(doc.at("rho") == 0.5);
    CHECK(doc.at("epsilon") == 0.1);
    CHECK_FALSE(doc.contains("prices"));
    CHECK(doc.at("certified_ratio").get<double>() ==
          doctest::Approx(0.2004504504504504).epsilon(1e-12));

    // the document is self-consistent under the library model
    cascade::Instance instance = cascade::load_instance(inst);
    std::vector<int> seq = doc.at("sequence").get<std::vector<int>>();
    REQUIRE_FALSE(seq.empty());
    CHECK(static_cast<int>(seq.size()) <= 3);
    CHECK(doc.at("revenue").get<double>() ==
          cascade::sequence_revenue(seq, instance.fixed_catalog()));
}

TEST_CASE("solve priced emits prices for the displayed set") {
    std::string inst = tmp_path("solvep_inst.json"), doc_path = tmp_path("solvep.json");
    REQUIRE(run_cli({"gen", "--n", "6", "--b", "3", "--mode", "priced", "--seed", "11", "--out",
                     inst}) == 0);
    CHECK(run_cli({"solve", inst, "--epsilon", "0.15", "--out", doc_path}) == 0);
    json doc = slurp_json(doc_path);
    CHECK(doc.at("mode") == "priced");
    CHECK(doc.at("epsilon") == 0.15);
    std::vector<int> seq = doc.at("sequence").get<std::vector<int>>();
    REQUIRE(doc.contains("prices"));
    CHECK(doc.at("prices").size() == seq.size());

    cascade::Instance instance = cascade::load_instance(inst);
    cascade::PriceVector prices;
    for (const auto& [key, value] : doc.at("prices").items())
        prices[std::stoi(key)] = value.get<double>();
    for (int id : seq) CHECK(prices.count(id) == 1);
    CHECK(doc.at("revenue").get<double>() ==
          cascade::priced_sequence_revenue(seq, prices, instance.priced_catalog()));
}

TEST_CASE("exact matches the library oracles") {
    std::string inst = tmp_path("exact_inst.json"), doc_path = tmp_path("exact.json");
    REQUIRE(run_cli({"gen", "--n", "6", "--b", "3", "--seed", "13", "--out", inst}) == 0);
    CHECK(run_cli({"exact", inst, "--out", doc_path}) == 0);
    json doc = slurp_json(doc_path);
    CHECK(doc.at("command") == "exact");
    CHECK(doc.at("oracle") == "exact_pa");
    cascade::Instance instance = cascade::load_instance(inst);
    cascade::ExactPaSolution oracle = cascade::exact_pa(instance.fixed_catalog());
    CHECK(doc.at("revenue").get<double>() == oracle.revenue);
    CHECK(doc.at("sequence").get<std::vector<int>>() == oracle.sequence);

    std::string pinst = tmp_path("exactp_inst.json"), pdoc_path = tmp_path("exactp.json");
    REQUIRE(run_cli({"gen", "--n", "3", "--b", "2", "--mode", "priced", "--seed", "17", "--out",
                     pinst}) == 0);
    CHECK(run_cli({"exact", pinst, "--out", pdoc_path}) == 0);
    json pdoc = slurp_json(pdoc_path);
    CHECK(pdoc.at("oracle") == "exact_pb_grid");
    CHECK(pdoc.at("grid_points") == 21);
    cascade::Instance pinstance = cascade::load_instance(pinst);
    cascade::PbGridSolution poracle = cascade::exact_pb_grid(
        pinstance.priced_catalog(), cascade::default_price_grid(pinstance.priced_catalog()));
    CHECK(pdoc.at("revenue").get<double>() == poracle.revenue);
    CHECK(pdoc.at("grid_error_bound").get<double>() == poracle.grid_error_bound);
}

TEST_CASE("solve lands within its certificate of the exact optimum") {
    std::string inst = tmp_path("cert_inst.json"), sdoc = tmp_path("cert_solve.json"),
                edoc = tmp_path("cert_exact.json");
    REQUIRE(run_cli({"gen", "--n", "7", "--b", "3", "--seed", "19", "--out", inst}) == 0);
    REQUIRE(run_cli({"solve", inst, "--out", sdoc}) == 0);
    REQUIRE(run_cli({"exact", inst, "--out", edoc}) == 0);
    double alg = slurp_json(sdoc).at("revenue").get<double>();
    double opt = slurp_json(edoc).at("revenue").get<double>();
    double ratio = slurp_json(sdoc).at("certified_ratio").get<double>();
    CHECK(alg <= opt + 1e-9);
    CHECK(alg >= ratio * opt - 1e-9);
}

TEST_CASE("simulate emits a consistent report") {
    std::string inst = tmp_path("sim_inst.json"), doc1 = tmp_path("sim1.json"),
                doc2 = tmp_path("sim2.json");
    REQUIRE(run_cli({"gen", "--n", "5", "--b", "5", "--seed", "2", "--out", inst}) == 0);
    CHECK(run_cli({"simulate", inst, "--sequence", "1,3,2", "--trials", "50000", "--seed", "9",
                   "--out", doc1}) == 0);
    CHECK(run_cli({"simulate", inst, "--sequence", "1,3,2", "--trials", "50000", "--seed", "9",
                   "--out", doc2}) == 0);
    CHECK(slurp(doc1) == slurp(doc2));

    json doc = slurp_json(doc1);
    CHECK(doc.at("command") == "simulate");
    CHECK(doc.at("trials") == 50000);
    CHECK(doc.at("seed") == 9);
    CHECK(doc.at("sequence").get<std::vector<int>>() == std::vector<int>{1, 3, 2});

    cascade::Instance instance = cascade::load_instance(inst);
    double model = cascade::sequence_revenue({1, 3, 2}, instance.fixed_catalog());
    CHECK(doc.at("model_revenue").get<double>() == model);
    double se = doc.at("std_error").get<double>();
    CHECK(se > 0.0);
    CHECK(std::abs(doc.at("empirical_revenue").get<double>() - model) <= 5.0 * se);

    double mass = doc.at("no_purchase_freq").get<double>();
    for (const auto& [id, freq] : doc.at("per_product_purchase_freq").items())
        mass += freq.get<double>();
    CHECK(std::abs(mass - 1.0) <= 1e-9);
    CHECK(doc.at("per_position_stop_freq").size() == 3);
}

TEST_CASE("simulate prices a priced instance when none are given") {
    std::string inst = tmp_path("simp_inst.json"), doc_path = tmp_path("simp.json");
    REQUIRE(run_cli({"gen", "--n", "4", "--b", "2", "--mode", "priced", "--seed", "23", "--out",
                     inst}) == 0);
    CHECK(run_cli({"simulate", inst, "--sequence", "2,4", "--trials", "20000", "--out",
                   doc_path}) == 0);
    json doc = slurp_json(doc_path);
    REQUIRE(doc.contains("prices"));
    CHECK(doc.at("prices").size() == 2);

    // default prices are the closed-form optimum for the displayed set
    cascade::Instance instance = cascade::load_instance(inst);
    cascade::PriceVector expect =
        cascade::optimal_prices(std::vector<int>{2, 4}, instance.priced_catalog()).first;
    for (const auto& [key, value] : doc.at("prices").items())
        CHECK(value.get<double>() == expect.at(std::stoi(key)));

    // explicit prices are honored
    std::string doc2_path = tmp_path("simp2.json");
    CHECK(run_cli({"simulate", inst, "--sequence", "2,4", "--prices", "2=2.5,4=3.0", "--trials",
                   "1000", "--out", doc2_path}) == 0);
    json doc2 = slurp_json(doc2_path);
    CHECK(doc2.at("prices").at("2").get<double>() == 2.5);
    CHECK(doc2.at("prices").at("4").get<double>() == 3.0);
}

TEST_CASE("bench writes one CSV row per combination") {
    std::string csv_path = tmp_path("bench.csv");
    CHECK(run_cli({"bench", "--n-list", "5", "--b-list", "2", "--eps-list", "0.2", "--rho-list",
                   "0.5", "--seeds", "1", "--out", csv_path}) == 0);
    std::string csv = slurp(csv_path);
    std::istringstream lines(csv);
    std::string header, row, extra;
    REQUIRE(std::getline(lines, header));
    REQUIRE(std::getline(lines, row));
    CHECK_FALSE(std::getline(lines, extra));
    CHECK(header ==
          "instance,N,B,epsilon,rho,alg_revenue,oracle_revenue,realized_ratio,certified_ratio,"
          "wall_ms");

    std::vector<std::string> cells;
    std::istringstream cols(row);
    std::string cell;
    while (std::getline(cols, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 10);
    CHECK(cells[0] == "fixed-n5-b2-s1");
    CHECK(cells[1] == "5");
    CHECK(cells[2] == "2");
    double alg = std::stod(cells[5]);
    double oracle = std::stod(cells[6]);
    double realized = std::stod(cells[7]);
    double certified = std::stod(cells[8]);
    CHECK(alg <= oracle + 1e-9);
    CHECK(realized >= certified - 1e-9);
    CHECK(std::stod(cells[9]) >= 0.0);

    // priced mode exercises the grid oracle
    std::string pcsv_path = tmp_path("bench_priced.csv");
    CHECK(run_cli({"bench", "--mode", "priced", "--n-list", "4", "--b-list", "2", "--eps-list",
                   "0.2", "--rho-list", "0.5", "--seeds", "1", "--out", pcsv_path}) == 0);
    std::istringstream plines(slurp(pcsv_path));
    REQUIRE(std::getline(plines, header));
    REQUIRE(std::getline(plines, row));
    CHECK(row.rfind("priced-n4-b2-s1,4,2,", 0) == 0);
}

TEST_CASE("exit codes") {
    std::string inst = tmp_path("codes_inst.json");
    REQUIRE(run_cli({"gen", "--n", "4", "--b", "2", "--seed", "29", "--out", inst}) == 0);

    CHECK(run_cli({"solve", inst, "--bogus-flag"}) == 2);       // parse error
    CHECK(run_cli({"frobnicate"}) == 2);                        // unknown subcommand
    CHECK(run_cli({"simulate", inst}) == 2);                    // missing required option
    CHECK(run_cli({"solve", "/nonexistent/path.json"}) == 2);   // unreadable instance
    CHECK(run_cli({"gen", "--n", "2", "--b", "5"}) == 2);       // b > n
    CHECK(run_cli({"solve", inst, "--rho", "1.5"}) == 3);       // infeasible parameter
    CHECK(run_cli({"solve", inst, "--epsilon", "0"}) == 3);     // infeasible parameter

    std::string big = tmp_path("codes_big.json");
    REQUIRE(run_cli({"gen", "--n", "20", "--b", "4", "--seed", "31", "--out", big}) == 0);
    CHECK(run_cli({"exact", big}) == 3);  // enumeration limit

    // malformed instance file
    std::string bad = tmp_path("codes_bad.json");
    std::ofstream(bad) << "{\"mode\": \"fixed\"";
    CHECK(run_cli({"solve", bad}) == 2);
}

TEST_CASE("installed binary round-trip") {
    std::string exe = CASCADE_CLI_PATH;
    auto shell = [](const std::string& cmd) {
        int rc = std::system(cmd.c_str());
        REQUIRE(rc != -1);
        return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
    };
    CHECK(shell(exe + " --help > /dev/null 2>&1") == 0);
    std::string inst = tmp_path("bin_inst.json"), doc_path = tmp_path("bin_doc.json");
    CHECK(shell(exe + " gen --n 5 --b 2 --seed 41 --out " + inst + " 2> /dev/null") == 0);
    CHECK(shell(exe + " solve " + inst + " --out " + doc_path + " 2> /dev/null") == 0);
    json doc = slurp_json(doc_path);
    CHECK(doc.at("command") == "solve");
    CHECK(shell(exe + " exact " + inst + " > /dev/null 2> /dev/null") == 0);
    CHECK(shell(exe + " solve missing.json > /dev/null 2> /dev/null") == 2);
}
