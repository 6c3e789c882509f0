// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include "grocat/pca.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <string>

#include "grocat/errors.hpp"

namespace grocat {

PcaModel fit_pca(const Matrix& x, std::size_t c) {
    const auto m = static_cast<std::size_t>(x.rows());
    const auto n = static_cast<std::size_t>(x.cols());
    if (c < 1 || c > std::min(m, n)) {
        throw ConfigError("PCA component count " + std::to_string(c) + " outside [1, min(m, n) = " +
                          std::to_string(std::min(m, n)) + "]");
    }
    if (!x.allFinite()) throw NumericError("PCA input contains non-finite values");

    PcaModel model;
    model.mean = x.colwise().mean().transpose();
    const Eigen::MatrixXd centered = x.rowwise() - model.mean.transpose();
    const double dof = m > 1 ? static_cast<double>(m - 1) : 1.0;
    model.total_variance = centered.squaredNorm() / dof;

    const auto ci = static_cast<Eigen::Index>(c);
    if (model.total_variance == 0.0) {
        model.degenerate = true;
        model.components = Matrix::Identity(ci, static_cast<Eigen::Index>(n));
        model.eigenvalues = Vector::Zero(ci);
        return model;
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const Eigen::MatrixXd& v = svd.matrixV();

    model.components.resize(ci, static_cast<Eigen::Index>(n));
    model.eigenvalues.resize(ci);
    for (Eigen::Index k = 0; k < ci; ++k) {
        Eigen::VectorXd axis = v.col(k);
        Eigen::Index pivot = 0;
        axis.cwiseAbs().maxCoeff(&pivot);
        if (axis(pivot) < 0) axis = -axis;
        model.components.row(k) = axis.transpose();
        model.eigenvalues(k) = s(k) * s(k) / dof;
    }
    return model;
}

Matrix transform_pca(const PcaModel& model, const Matrix& x) {
    if (static_cast<std::size_t>(x.cols()) != model.input_dim()) {
        throw DataError("PCA transform: expected " + std::to_string(model.input_dim()) + " columns, got " +
                        std::to_string(x.cols()));
    }
    return (x.rowwise() - model.mean.transpose()) * model.components.transpose();
}

Vector transform_pca(const PcaModel& model, const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != model.input_dim()) {
        throw DataError("PCA transform: expected dimension " + std::to_string(model.input_dim()) + ", got " +
                        std::to_string(x.size()));
    }
    return model.components * (x - model.mean);
}

Matrix reconstruct_pca(const PcaModel& model, const Matrix& z) {
    if (static_cast<std::size_t>(z.cols()) != model.output_dim()) throw DataError("PCA reconstruct: dimension mismatch");
    Matrix out = z * model.components;
    out.rowwise() += model.mean.transpose();
    return out;
}

double retained_variance(const PcaModel& model, std::size_t count) {
    if (count > model.output_dim()) {
        throw ConfigError("retained_variance: " + std::to_string(count) + " exceeds the " +
                          std::to_string(model.output_dim()) + " fitted components");
    }
    if (count == 0) return 0.0;
    if (model.degenerate) return 1.0;
    const double kept = model.eigenvalues.head(static_cast<Eigen::Index>(count)).sum();
    return std::clamp(kept / model.total_variance, 0.0, 1.0);
}

}  // namespace grocat
