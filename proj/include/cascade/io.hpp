// Instance and result documents. Instances are JSON files with a mode
// marker; results are JSON documents with stable key order so identical
// inputs serialize byte-identically.

#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "cascade/model.hpp"

namespace cascade {

// A parsed instance file: either a fixed-parameter or a priced catalog.
struct Instance {
    std::variant<Catalog, PricedCatalog> catalog;

    bool priced() const { return std::holds_alternative<PricedCatalog>(catalog); }
    const Catalog& fixed_catalog() const { return std::get<Catalog>(catalog); }
    const PricedCatalog& priced_catalog() const { return std::get<PricedCatalog>(catalog); }
    int size() const;
    int display_budget() const;
};

// Parse an instance document. Throws std::invalid_argument on malformed
// JSON, unknown mode, missing fields or invariant violations.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

// Serialize with keys mode, B, products (each product in catalog order).
std::string instance_to_json(const Instance& instance);

// Shortest round-trip decimal form (std::to_chars).
std::string format_double(double value);

// One CSV cell per value; empty optional fields stay empty.
std::string csv_row(const std::vector<std::string>& cells);

}  // namespace cascade
