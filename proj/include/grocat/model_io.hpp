// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "grocat/pipeline.hpp"

namespace grocat {

/// Model files start with these 8 bytes and a little-endian uint32 version.
inline constexpr char kModelMagic[8] = {'G', 'R', 'O', 'C', 'A', 'T', 'M', 'F'};
inline constexpr std::uint32_t kModelVersion = 1;

/// Binary and lossless: a reloaded model ranks every input exactly as the original.
void save_model(std::ostream& out, const PipelineModel& model);
void save_model(const std::filesystem::path& path, const PipelineModel& model);

/// Throws DataError on a wrong magic, unknown version, truncated file or a
/// stopword list that does not match its recorded fingerprint.
PipelineModel load_model(std::istream& in);
PipelineModel load_model(const std::filesystem::path& path);

}  // namespace grocat
