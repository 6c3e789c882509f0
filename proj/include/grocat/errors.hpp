// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grocat {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or precondition violation on parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or degenerate input data.
class DataError : public Error {
public:
    using Error::Error;
};

/// Non-finite values or numeric breakdown during fitting.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Record-level catalog problem; `row()` is the 1-based data row (0 if not row-specific).
class CatalogError : public DataError {
public:
    CatalogError(const std::string& what, std::size_t row)
        : DataError(row ? "row " + std::to_string(row) + ": " + what : what), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

}  // namespace grocat
