#include "cascade/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cascade {

using ordered_json = nlohmann::ordered_json;

int Instance::size() const {
    return priced() ? priced_catalog().size() : fixed_catalog().size();
}

int Instance::display_budget() const {
    return priced() ? priced_catalog().display_budget() : fixed_catalog().display_budget();
}

Instance parse_instance(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("instance is not valid JSON: ") + e.what());
    }
    try {
        const std::string mode = doc.at("mode").get<std::string>();
        const int budget = doc.at("B").get<int>();
        const auto& products = doc.at("products");
        if (!products.is_array() || products.empty())
            throw std::invalid_argument("products must be a non-empty array");
        if (mode == "fixed") {
            std::vector<Product> list;
            for (const auto& p : products)
                list.push_back(Product{p.at("id").get<int>(), p.at("alpha").get<double>(),
                                       p.at("beta").get<double>(), p.at("theta").get<double>()});
            return Instance{Catalog(std::move(list), budget)};
        }
        if (mode == "priced") {
            std::vector<PricedProduct> list;
            for (const auto& p : products)
                list.push_back(PricedProduct{p.at("id").get<int>(), p.at("quality").get<double>(),
                                             p.at("cost").get<double>(),
                                             p.at("theta").get<double>()});
            return Instance{PricedCatalog(std::move(list), budget)};
        }
        throw std::invalid_argument("mode must be \"fixed\" or \"priced\"");
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed instance document: ") + e.what());
    }
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open instance file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_instance(buffer.str());
}

std::string instance_to_json(const Instance& instance) {
    ordered_json doc;
    doc["mode"] = instance.priced() ? "priced" : "fixed";
    doc["B"] = instance.display_budget();
    doc["products"] = ordered_json::array();
    if (instance.priced()) {
        for (const PricedProduct& p : instance.priced_catalog().products()) {
            ordered_json row;
            row["id"] = p.id;
            row["quality"] = p.quality;
            row["cost"] = p.cost;
            row["theta"] = p.theta;
            doc["products"].push_back(std::move(row));
        }
    } else {
        for (const Product& p : instance.fixed_catalog().products()) {
            ordered_json row;
            row["id"] = p.id;
            row["alpha"] = p.alpha;
            row["beta"] = p.beta;
            row["theta"] = p.theta;
            doc["products"].push_back(std::move(row));
        }
    }
    return doc.dump(2) + "\n";
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string row;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += cells[i];
    }
    row += '\n';
    return row;
}

}  // namespace cascade
