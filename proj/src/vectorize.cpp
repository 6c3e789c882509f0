// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include "grocat/vectorize.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

#include "grocat/errors.hpp"

namespace grocat {

ProductMatrix::ProductMatrix(std::size_t cols, std::size_t varieties, std::vector<TermSet> rows,
                             std::vector<VarietyId> labels)
    : cols_(cols), varieties_(varieties), rows_(std::move(rows)), labels_(std::move(labels)) {
    if (rows_.size() != labels_.size()) throw DataError("product matrix: row and label counts differ");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] >= varieties_) {
            throw DataError("product matrix: label " + std::to_string(labels_[i]) + " of row " + std::to_string(i) +
                            " out of range [0, " + std::to_string(varieties_) + ")");
        }
        for (auto j : rows_[i]) {
            if (j >= cols_) throw DataError("product matrix: column id out of range");
        }
    }
}

int ProductMatrix::at(std::size_t i, std::size_t j) const {
    const auto& r = rows_.at(i);
    return std::binary_search(r.begin(), r.end(), static_cast<std::uint32_t>(j)) ? 1 : 0;
}

Matrix ProductMatrix::to_dense() const {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(rows_.size()), static_cast<Eigen::Index>(cols_));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        for (auto j : rows_[i]) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
    }
    return m;
}

ProductMatrix ProductMatrix::subset(std::span<const std::size_t> which) const {
    std::vector<TermSet> rows;
    std::vector<VarietyId> labels;
    rows.reserve(which.size());
    labels.reserve(which.size());
    for (auto i : which) {
        rows.push_back(rows_.at(i));
        labels.push_back(labels_.at(i));
    }
    return ProductMatrix(cols_, varieties_, std::move(rows), std::move(labels));
}

VarietyMatrix::VarietyMatrix(std::size_t varieties, std::size_t cols, std::vector<std::uint32_t> counts)
    : rows_(varieties), cols_(cols), counts_(std::move(counts)), lengths_(varieties, 0) {
    if (counts_.size() != rows_ * cols_) throw DataError("variety matrix: size mismatch");
    for (std::size_t i = 0; i < rows_; ++i) {
        const auto* row = counts_.data() + i * cols_;
        lengths_[i] = std::accumulate(row, row + cols_, std::uint64_t{0});
    }
    if (rows_ > 0) {
        const auto total = std::accumulate(lengths_.begin(), lengths_.end(), std::uint64_t{0});
        average_length_ = static_cast<double>(total) / static_cast<double>(rows_);
    }
}

TermSet to_term_set(const WordList& wl, const Vocabulary& vocab) {
    TermSet terms;
    terms.reserve(wl.size());
    for (const auto& w : wl.words) {
        if (auto col = vocab.find(w)) terms.push_back(static_cast<std::uint32_t>(*col));
    }
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    return terms;
}

ProductMatrix build_product_matrix(std::span<const WordList> lists, const Vocabulary& vocab,
                                   std::span<const VarietyId> labels, std::size_t varieties) {
    if (lists.size() != labels.size()) throw DataError("product matrix: word lists and labels differ in length");
    std::vector<TermSet> rows;
    rows.reserve(lists.size());
    for (const auto& wl : lists) rows.push_back(to_term_set(wl, vocab));
    return ProductMatrix(vocab.size(), varieties, std::move(rows), std::vector<VarietyId>(labels.begin(), labels.end()));
}

VarietyMatrix build_variety_matrix(const ProductMatrix& x) {
    std::vector<std::uint32_t> counts(x.varieties() * x.cols(), 0);
    for (std::size_t k = 0; k < x.rows(); ++k) {
        const std::size_t base = static_cast<std::size_t>(x.labels()[k]) * x.cols();
        for (auto j : x.row(k)) ++counts[base + j];
    }
    return VarietyMatrix(x.varieties(), x.cols(), std::move(counts));
}

Vector vectorize_new(const WordList& wl, const Vocabulary& vocab) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(vocab.size()));
    for (auto j : to_term_set(wl, vocab)) v(static_cast<Eigen::Index>(j)) = 1.0;
    return v;
}

void write_matrix_dump(std::ostream& out, const ProductMatrix& x) {
    out << x.rows() << ' ' << x.cols() << ' ' << x.varieties() << '\n';
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (auto j : x.row(i)) out << i << ' ' << j << " 1\n";
    }
    for (std::size_t i = 0; i < x.rows(); ++i) out << "label " << i << ' ' << x.labels()[i] << '\n';
}

}  // namespace grocat
