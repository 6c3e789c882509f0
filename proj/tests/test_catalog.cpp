// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include <gtest/gtest.h>

#include <sstream>

#include "grocat/catalog.hpp"
#include "grocat/errors.hpp"

using namespace grocat;

namespace {

Catalog parse(const std::string& text) {
    std::istringstream in(text);
    return read_catalog(in, CatalogFormat{});
}

const char* kHeader = "ean,category,subcategory,variety,brand,name,legal_name,ingredients\n";

}  // namespace

TEST(Catalog, ParsesQuotedFieldsAndKeepsBytes) {
    const auto c = parse(std::string(kHeader) +
                         "1,Drinks,Spirits,Rum,Acme,Golden Ron 40% vol.,\"Ron, dorado\",\"agua \"\"pura\"\"\nazúcar\"\n");
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c.products[0].legal_name, "Ron, dorado");
    EXPECT_EQ(c.products[0].ingredients, "agua \"pura\"\nazúcar");
    EXPECT_EQ(c.products[0].name, "Golden Ron 40% vol.");
}

TEST(Catalog, BomCrlfAndBlankLines) {
    const auto c = parse("\xEF\xBB\xBF" + std::string("ean,variety,name,legal_name,ingredients\r\n") +
                         "1,Milk,Whole milk,,\r\n\r\n2,Eggs,Free range eggs,,\r\n");
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c.products[1].variety, "Eggs");
    EXPECT_TRUE(c.products[0].brand.empty());
}

TEST(Catalog, VarietyIdsFollowByteOrder) {
    const auto c = parse(std::string(kHeader) + "1,,,Yogurt,,a,,\n2,,,Cheese,,b,,\n3,,,Yogurt,,c,,\n4,,,Apple,,d,,\n");
    EXPECT_EQ(c.varieties.names(), (std::vector<std::string>{"Apple", "Cheese", "Yogurt"}));
    EXPECT_EQ(c.labels(), (std::vector<VarietyId>{2, 1, 2, 0}));
    EXPECT_EQ(c.varieties.id("Cheese"), 1u);
    EXPECT_FALSE(c.varieties.find("Bread").has_value());
}

TEST(Catalog, RowErrorsCarryRowNumber) {
    try {
        parse(std::string(kHeader) + "1,,,A,,x,,\n1,,,B,,y,,\n");
        FAIL();
    } catch (const CatalogError& e) {
        EXPECT_EQ(e.row(), 2u);
    }
    EXPECT_THROW(parse(std::string(kHeader) + "1,,,,,x,,\n"), CatalogError);
    EXPECT_THROW(parse(std::string(kHeader) + ",,,A,,x,,\n"), CatalogError);
    EXPECT_THROW(parse(std::string(kHeader) + "1,,,A,,x\n"), CatalogError);
    EXPECT_THROW(parse(std::string(kHeader) + "1,,,A,,\"x,,\n"), CatalogError);
    EXPECT_THROW(parse(std::string(kHeader) + "1,,,A,,\xC3\x28,,\n"), CatalogError);
}

TEST(Catalog, MissingRequiredColumn) {
    EXPECT_THROW(parse("ean,variety,name\n1,A,x\n"), CatalogError);
    EXPECT_THROW(parse(""), CatalogError);
    EXPECT_THROW(parse(kHeader), CatalogError);
}

TEST(Catalog, ProductsWithoutVarietyColumn) {
    std::istringstream in("ean,name,legal_name,ingredients\n9,Oat drink,,oats\n");
    const auto products = read_products(in, CatalogFormat{}, false);
    ASSERT_EQ(products.size(), 1u);
    EXPECT_TRUE(products[0].variety.empty());
}

TEST(Catalog, CustomDelimiterAndColumnNames) {
    CatalogFormat fmt;
    fmt.delimiter = ';';
    fmt.columns.ean = "EAN";
    fmt.columns.variety = "Variedad";
    fmt.columns.name = "Nombre";
    fmt.columns.legal_name = "Denominacion";
    fmt.columns.ingredients = "Ingredientes";
    std::istringstream in("EAN;Variedad;Nombre;Denominacion;Ingredientes\n7;Queso;Manchego;Queso curado;leche, sal\n");
    const auto c = read_catalog(in, fmt);
    EXPECT_EQ(c.products[0].ingredients, "leche, sal");
}

TEST(Catalog, WriteReadRoundTrip) {
    std::vector<Product> ps = {
        {"1", "Dairy", "Cheese", "Cured", "B", "Queso \"viejo\"", "Queso, curado", "leche\ncuajo"},
        {"2", "", "", "Fresh", "", "Burgos", "", ""},
    };
    std::ostringstream out;
    write_catalog(out, ps, CatalogFormat{});
    std::istringstream in(out.str());
    EXPECT_EQ(read_products(in, CatalogFormat{}), ps);
}

TEST(Catalog, CleanDropsDescriptionlessRows) {
    auto c = make_catalog({{"1", "", "", "A", "", "x", "", ""}, {"2", "", "", "B", "", " ", "\t", ""}});
    const auto cleaned = clean_catalog(c);
    ASSERT_EQ(cleaned.size(), 1u);
    EXPECT_EQ(cleaned.varieties.size(), 1u);
    EXPECT_THROW(clean_catalog(make_catalog({{"1", "", "", "A", "", "", "", ""}})), CatalogError);
}
