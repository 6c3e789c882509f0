// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include "grocat/catalog.hpp"

#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "grocat/errors.hpp"

namespace grocat {

namespace {

bool valid_utf8(std::string_view s) {
    const auto* p = reinterpret_cast<const uint8_t*>(s.data());
    const auto len = static_cast<int32_t>(s.size());
    int32_t i = 0;
    while (i < len) {
        UChar32 c;
        U8_NEXT(p, i, len, c);
        if (c < 0) return false;
    }
    return true;
}

// One record = one list of fields. Quoted fields may span lines.
class RecordReader {
public:
    RecordReader(std::string text, char delim) : text_(std::move(text)), delim_(delim) {
        if (text_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
    }

    bool next(std::vector<std::string>& fields) {
        while (pos_ < text_.size()) {
            // skip empty lines
            if (text_[pos_] == '\n') {
                ++pos_;
                continue;
            }
            if (text_[pos_] == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') {
                pos_ += 2;
                continue;
            }
            parse_record(fields);
            return true;
        }
        return false;
    }

    std::size_t record_start_line() const noexcept { return record_line_; }

private:
    void parse_record(std::vector<std::string>& fields) {
        fields.clear();
        record_line_ = line_;
        std::string cur;
        bool quoted = false;
        bool was_quoted = false;
        while (pos_ < text_.size()) {
            const char c = text_[pos_++];
            if (quoted) {
                if (c == '"') {
                    if (pos_ < text_.size() && text_[pos_] == '"') {
                        cur.push_back('"');
                        ++pos_;
                    } else {
                        quoted = false;
                    }
                } else {
                    if (c == '\n') ++line_;
                    cur.push_back(c);
                }
                continue;
            }
            if (c == '"' && cur.empty() && !was_quoted) {
                quoted = true;
                was_quoted = true;
            } else if (c == delim_) {
                fields.push_back(std::move(cur));
                cur.clear();
                was_quoted = false;
            } else if (c == '\n') {
                ++line_;
                break;
            } else if (c == '\r' && pos_ < text_.size() && text_[pos_] == '\n') {
                // CRLF terminator
            } else {
                cur.push_back(c);
            }
        }
        if (quoted) throw CatalogError("unterminated quoted field starting on line " + std::to_string(record_line_), 0);
        fields.push_back(std::move(cur));
    }

    std::string text_;
    char delim_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t record_line_ = 1;
};

struct ColumnSlot {
    std::string Product::*field;
    const std::string* header;
    bool required;
};

}  // namespace

VarietyIndex::VarietyIndex(std::vector<std::string> names) {
    std::set<std::string> unique(std::make_move_iterator(names.begin()), std::make_move_iterator(names.end()));
    names_.assign(unique.begin(), unique.end());
    for (std::size_t i = 0; i < names_.size(); ++i) ids_.emplace(names_[i], static_cast<VarietyId>(i));
}

std::optional<VarietyId> VarietyIndex::find(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

VarietyId VarietyIndex::id(std::string_view name) const {
    auto found = find(name);
    if (!found) throw DataError("unknown variety '" + std::string(name) + "'");
    return *found;
}

std::vector<VarietyId> Catalog::labels() const {
    std::vector<VarietyId> out;
    out.reserve(products.size());
    for (const auto& p : products) out.push_back(varieties.id(p.variety));
    return out;
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    });
}

Catalog make_catalog(std::vector<Product> products) {
    if (products.empty()) throw CatalogError("catalog is empty", 0);
    std::unordered_set<std::string> seen;
    std::vector<std::string> names;
    names.reserve(products.size());
    for (std::size_t i = 0; i < products.size(); ++i) {
        const auto& p = products[i];
        if (p.ean.empty()) throw CatalogError("missing EAN", i + 1);
        if (!seen.insert(p.ean).second) throw CatalogError("duplicate EAN '" + p.ean + "'", i + 1);
        if (p.variety.empty()) throw CatalogError("missing variety", i + 1);
        names.push_back(p.variety);
    }
    Catalog c;
    c.products = std::move(products);
    c.varieties = VarietyIndex(std::move(names));
    return c;
}

std::vector<Product> read_products(std::istream& in, const CatalogFormat& fmt, bool require_variety) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (text.empty()) throw CatalogError("catalog file is empty", 0);

    RecordReader reader(std::move(text), fmt.delimiter);
    std::vector<std::string> header;
    if (!reader.next(header)) throw CatalogError("catalog file is empty", 0);

    const auto& cols = fmt.columns;
    const std::vector<ColumnSlot> slots = {
        {&Product::ean, &cols.ean, true},
        {&Product::category, &cols.category, false},
        {&Product::subcategory, &cols.subcategory, false},
        {&Product::variety, &cols.variety, require_variety},
        {&Product::brand, &cols.brand, false},
        {&Product::name, &cols.name, true},
        {&Product::legal_name, &cols.legal_name, true},
        {&Product::ingredients, &cols.ingredients, true},
    };

    // Column position for each slot, or npos when absent.
    std::vector<std::size_t> position(slots.size(), std::string::npos);
    std::vector<std::string> missing;
    for (std::size_t s = 0; s < slots.size(); ++s) {
        const std::string& want = *slots[s].header;
        if (!want.empty()) {
            auto it = std::find(header.begin(), header.end(), want);
            if (it != header.end()) position[s] = static_cast<std::size_t>(it - header.begin());
        }
        if (slots[s].required && position[s] == std::string::npos) {
            missing.push_back(want.empty() ? "<unmapped>" : want);
        }
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw CatalogError("header is missing mapped column(s): " + list, 0);
    }

    std::vector<Product> products;
    std::unordered_set<std::string> seen;
    std::vector<std::string> fields;
    std::size_t row = 0;
    while (reader.next(fields)) {
        ++row;
        if (fields.size() != header.size()) {
            std::string offending;
            if (fields.size() < header.size()) {
                for (std::size_t i = fields.size(); i < header.size(); ++i)
                    offending += (offending.empty() ? "" : ", ") + header[i];
                throw CatalogError("expected " + std::to_string(header.size()) + " fields, got " +
                                       std::to_string(fields.size()) + "; missing column(s): " + offending,
                                   row);
            }
            throw CatalogError("expected " + std::to_string(header.size()) + " fields, got " +
                                   std::to_string(fields.size()) + "; extra field(s) after column '" +
                                   header.back() + "'",
                               row);
        }
        Product p;
        for (std::size_t s = 0; s < slots.size(); ++s) {
            if (position[s] == std::string::npos) continue;
            std::string& value = fields[position[s]];
            if (!valid_utf8(value)) {
                throw CatalogError("column '" + *slots[s].header + "' is not valid UTF-8", row);
            }
            p.*(slots[s].field) = std::move(value);
        }
        if (p.ean.empty()) throw CatalogError("missing EAN", row);
        if (!seen.insert(p.ean).second) throw CatalogError("duplicate EAN '" + p.ean + "'", row);
        if (require_variety && p.variety.empty()) throw CatalogError("missing variety", row);
        products.push_back(std::move(p));
    }
    if (products.empty()) throw CatalogError("catalog has a header but no products", 0);
    return products;
}

Catalog read_catalog(std::istream& in, const CatalogFormat& fmt) {
    return make_catalog(read_products(in, fmt, true));
}

Catalog load_catalog(const std::filesystem::path& path, const CatalogFormat& fmt) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open catalog '" + path.string() + "'");
    return read_catalog(in, fmt);
}

std::vector<Product> load_products(const std::filesystem::path& path, const CatalogFormat& fmt,
                                   bool require_variety) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open catalog '" + path.string() + "'");
    return read_products(in, fmt, require_variety);
}

Catalog clean_catalog(const Catalog& c) {
    std::vector<Product> kept;
    kept.reserve(c.products.size());
    for (const auto& p : c.products) {
        if (is_blank(p.name) && is_blank(p.legal_name) && is_blank(p.ingredients)) continue;
        kept.push_back(p);
    }
    if (kept.empty()) throw CatalogError("no products left after removing all-blank rows", 0);
    return make_catalog(std::move(kept));
}

void write_catalog(std::ostream& out, const std::vector<Product>& products, const CatalogFormat& fmt) {
    const char d = fmt.delimiter;
    auto field = [&](const std::string& s) {
        const bool needs_quotes = s.find_first_of(std::string{d, '"', '\n', '\r'}) != std::string::npos;
        if (!needs_quotes) {
            out << s;
            return;
        }
        out << '"';
        for (char ch : s) {
            if (ch == '"') out << '"';
            out << ch;
        }
        out << '"';
    };
    const auto& c = fmt.columns;
    const std::vector<std::pair<const std::string*, std::string Product::*>> layout = {
        {&c.ean, &Product::ean},           {&c.category, &Product::category},
        {&c.subcategory, &Product::subcategory}, {&c.variety, &Product::variety},
        {&c.brand, &Product::brand},       {&c.name, &Product::name},
        {&c.legal_name, &Product::legal_name}, {&c.ingredients, &Product::ingredients},
    };
    bool first = true;
    for (const auto& [header, member] : layout) {
        if (header->empty()) continue;
        if (!first) out << d;
        field(*header);
        first = false;
    }
    out << '\n';
    for (const auto& p : products) {
        first = true;
        for (const auto& [header, member] : layout) {
            if (header->empty()) continue;
            if (!first) out << d;
            field(p.*member);
            first = false;
        }
        out << '\n';
    }
}

}  // namespace grocat
