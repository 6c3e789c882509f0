// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#pragma once

#include <cstddef>

#include "grocat/vectorize.hpp"

namespace grocat {

/// Fitted principal axes of a centered data matrix.
struct PcaModel {
    Vector mean;          ///< column means, length n
    Matrix components;    ///< c x n, orthonormal rows, descending variance
    Vector eigenvalues;   ///< c variances (sample variance, divisor m - 1)
    double total_variance = 0.0;
    bool degenerate = false;  ///< true when the data has zero variance; axes are then the unit basis

    std::size_t input_dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
    std::size_t output_dim() const noexcept { return static_cast<std::size_t>(components.rows()); }
};

/// Fits `c` components, 1 <= c <= min(m, n). Within each component the entry
/// of largest magnitude is made positive.
PcaModel fit_pca(const Matrix& x, std::size_t c);

/// (x - mean) projected onto the components; one output row per input row.
Matrix transform_pca(const PcaModel& model, const Matrix& x);
Vector transform_pca(const PcaModel& model, const Vector& x);

/// Inverse map of `transform_pca` restricted to the retained subspace.
Matrix reconstruct_pca(const PcaModel& model, const Matrix& z);

/// Fraction of total variance captured by the first `count` components.
double retained_variance(const PcaModel& model, std::size_t count);

}  // namespace grocat
