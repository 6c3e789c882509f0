// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "grocat/ranking.hpp"

namespace grocat {

struct Product {
    std::string ean;
    std::string category;
    std::string subcategory;
    std::string variety;
    std::string brand;
    std::string name;
    std::string legal_name;
    std::string ingredients;

    friend bool operator==(const Product&, const Product&) = default;
};

/// Header names feeding each product field. An empty name means the column
/// is optional and absent (only allowed for category, subcategory, brand and,
/// when reading products for prediction, variety).
struct ColumnMapping {
    std::string ean = "ean";
    std::string category = "category";
    std::string subcategory = "subcategory";
    std::string variety = "variety";
    std::string brand = "brand";
    std::string name = "name";
    std::string legal_name = "legal_name";
    std::string ingredients = "ingredients";
};

struct CatalogFormat {
    char delimiter = ',';
    ColumnMapping columns;
};

/// Bijection between variety strings and ids in [0, V), ids assigned in
/// ascending lexicographic (byte) order of the variety string.
class VarietyIndex {
public:
    VarietyIndex() = default;
    explicit VarietyIndex(std::vector<std::string> names);

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(VarietyId id) const { return names_.at(id); }
    std::optional<VarietyId> find(std::string_view name) const;
    VarietyId id(std::string_view name) const;
    const std::vector<std::string>& names() const noexcept { return names_; }

    friend bool operator==(const VarietyIndex& a, const VarietyIndex& b) { return a.names_ == b.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, VarietyId> ids_;
};

struct Catalog {
    std::vector<Product> products;
    VarietyIndex varieties;

    std::size_t size() const noexcept { return products.size(); }
    /// Variety id of every product, in product order.
    std::vector<VarietyId> labels() const;
};

/// True when `s` is empty or whitespace only.
bool is_blank(std::string_view s);

/// Validates EAN presence/uniqueness and variety presence, then builds the
/// variety index over the distinct varieties.
Catalog make_catalog(std::vector<Product> products);

/// Parses delimiter-separated UTF-8 with a header row. Fields may be quoted
/// with '"' (doubled quote escapes, delimiters and newlines allowed inside).
/// Text is kept byte-for-byte. When `require_variety` is false the variety
/// column may be missing from the header.
std::vector<Product> read_products(std::istream& in, const CatalogFormat& fmt, bool require_variety = true);

Catalog read_catalog(std::istream& in, const CatalogFormat& fmt);
Catalog load_catalog(const std::filesystem::path& path, const CatalogFormat& fmt);
std::vector<Product> load_products(const std::filesystem::path& path, const CatalogFormat& fmt,
                                   bool require_variety = true);

/// Drops products whose name, legal name and ingredients are all blank and
/// rebuilds the variety index over the survivors.
Catalog clean_catalog(const Catalog& c);

/// Writes products in the same format `read_products` accepts.
void write_catalog(std::ostream& out, const std::vector<Product>& products, const CatalogFormat& fmt);

}  // namespace grocat
