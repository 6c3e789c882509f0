// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "grocat/catalog.hpp"

namespace grocat {

/// Cleansed product words: lowercase, unique, in order of first occurrence.
struct WordList {
    std::vector<std::string> words;

    std::size_t size() const noexcept { return words.size(); }
    bool empty() const noexcept { return words.empty(); }
    friend bool operator==(const WordList&, const WordList&) = default;
};

class StopwordSet {
public:
    StopwordSet() = default;
    /// Entries are lowercased; blank entries are dropped.
    explicit StopwordSet(const std::vector<std::string>& words);

    /// One word per line, UTF-8, '#' starts a comment.
    static StopwordSet from_file(const std::filesystem::path& path);
    static StopwordSet from_files(std::span<const std::filesystem::path> paths);

    /// `folded` selects the accent-folded view of the list.
    bool contains(std::string_view token, bool folded = false) const;
    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }

    /// Sorted entries.
    std::vector<std::string> sorted_words() const;
    /// Stable 64-bit FNV-1a over the sorted entries, recorded in model files.
    std::uint64_t fingerprint() const;

private:
    std::unordered_set<std::string> words_;
    std::unordered_set<std::string> folded_;
};

struct PreprocessOptions {
    /// Strip combining marks after canonical decomposition ("á" -> "a").
    bool fold_accents = false;
};

/// Name, legal name and ingredients joined by single spaces; blank fields are skipped.
std::string build_description(const Product& p);

/// The cleansing chain: brackets to spaces, lowercase, standalone digit runs
/// removed, stopwords removed, punctuation/symbols to spaces, split on
/// whitespace, stopwords removed again on the split tokens, duplicates
/// removed keeping the first occurrence.
WordList preprocess(std::string_view text, const StopwordSet& stopwords, const PreprocessOptions& opts = {});

WordList preprocess_product(const Product& p, const StopwordSet& stopwords, const PreprocessOptions& opts = {});

/// Lowercase (and optionally accent-fold) a UTF-8 string.
std::string normalize_case(std::string_view text, bool fold_accents = false);

class Vocabulary {
public:
    Vocabulary() = default;
    /// Throws DataError on duplicate words.
    explicit Vocabulary(std::vector<std::string> words);

    std::size_t size() const noexcept { return words_.size(); }
    const std::vector<std::string>& words() const noexcept { return words_; }
    const std::string& word(std::size_t column) const { return words_.at(column); }
    std::optional<std::size_t> find(std::string_view word) const;

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.words_ == b.words_; }

private:
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Union of all words ordered by first occurrence across `lists`.
Vocabulary build_vocabulary(std::span<const WordList> lists);

}  // namespace grocat
