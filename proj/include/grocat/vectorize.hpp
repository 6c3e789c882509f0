// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "grocat/ranking.hpp"
#include "grocat/textprep.hpp"

namespace grocat {

/// Dense real matrix, one sample per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Sorted, unique vocabulary column ids present in one product.
using TermSet = std::vector<std::uint32_t>;

/// Binary products x words incidence matrix, stored by row as the set of
/// columns equal to 1, plus the variety label of every row.
class ProductMatrix {
public:
    ProductMatrix(std::size_t cols, std::size_t varieties, std::vector<TermSet> rows, std::vector<VarietyId> labels);

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t varieties() const noexcept { return varieties_; }
    const TermSet& row(std::size_t i) const { return rows_.at(i); }
    const std::vector<VarietyId>& labels() const noexcept { return labels_; }
    int at(std::size_t i, std::size_t j) const;

    Matrix to_dense() const;
    /// Rows `which`, in that order.
    ProductMatrix subset(std::span<const std::size_t> which) const;

private:
    std::size_t cols_;
    std::size_t varieties_;
    std::vector<TermSet> rows_;
    std::vector<VarietyId> labels_;
};

/// Varieties x words count matrix: Y[i][j] = number of products of variety i containing word j.
class VarietyMatrix {
public:
    VarietyMatrix(std::size_t varieties, std::size_t cols, std::vector<std::uint32_t> counts);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::uint32_t at(std::size_t i, std::size_t j) const { return counts_.at(i * cols_ + j); }
    /// |v|_i, the total word count of variety i.
    std::uint64_t length(std::size_t i) const { return lengths_.at(i); }
    /// Mean of |v| over varieties.
    double average_length() const noexcept { return average_length_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint32_t> counts_;
    std::vector<std::uint64_t> lengths_;
    double average_length_ = 0.0;
};

/// Vocabulary column ids of the in-vocabulary words of `wl`, sorted.
TermSet to_term_set(const WordList& wl, const Vocabulary& vocab);

ProductMatrix build_product_matrix(std::span<const WordList> lists, const Vocabulary& vocab,
                                   std::span<const VarietyId> labels, std::size_t varieties);

VarietyMatrix build_variety_matrix(const ProductMatrix& x);

/// n-length 0/1 vector for an unseen product; out-of-vocabulary words are dropped.
Vector vectorize_new(const WordList& wl, const Vocabulary& vocab);

/// Debug dump: "m n V" header line, then "i j 1" per nonzero entry, then
/// "label i v" per row.
void write_matrix_dump(std::ostream& out, const ProductMatrix& x);

}  // namespace grocat
