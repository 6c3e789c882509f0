// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include "grocat/textprep.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>

#include "grocat/errors.hpp"

namespace grocat {

namespace {

using CodePoints = std::u32string;

CodePoints decode(std::string_view s) {
    CodePoints out;
    out.reserve(s.size());
    const auto* p = reinterpret_cast<const uint8_t*>(s.data());
    const auto len = static_cast<int32_t>(s.size());
    int32_t i = 0;
    while (i < len) {
        UChar32 c;
        U8_NEXT(p, i, len, c);
        out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
    }
    return out;
}

std::string encode(const CodePoints& cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t c : cps) {
        uint8_t buf[U8_MAX_LENGTH];
        int32_t n = 0;
        UBool error = false;
        U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
        if (error) continue;
        out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
    }
    return out;
}

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)) || c == U'\0'; }

bool is_punct_or_symbol(char32_t c) {
    switch (u_charType(static_cast<UChar32>(c))) {
        case U_DASH_PUNCTUATION:
        case U_START_PUNCTUATION:
        case U_END_PUNCTUATION:
        case U_CONNECTOR_PUNCTUATION:
        case U_OTHER_PUNCTUATION:
        case U_INITIAL_PUNCTUATION:
        case U_FINAL_PUNCTUATION:
        case U_MATH_SYMBOL:
        case U_CURRENCY_SYMBOL:
        case U_MODIFIER_SYMBOL:
        case U_OTHER_SYMBOL:
        case U_CONTROL_CHAR:
            return true;
        default:
            return false;
    }
}

CodePoints fold(const CodePoints& cps) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfd = icu::Normalizer2::getNFDInstance(status);
    if (U_FAILURE(status)) throw Error("ICU NFD normalizer unavailable");
    icu::UnicodeString src;
    for (char32_t c : cps) src.append(static_cast<UChar32>(c));
    icu::UnicodeString decomposed = nfd->normalize(src, status);
    if (U_FAILURE(status)) throw Error("ICU normalization failed");
    CodePoints out;
    for (int32_t i = 0; i < decomposed.length();) {
        const UChar32 c = decomposed.char32At(i);
        i += U16_LENGTH(c);
        if (u_charType(c) == U_NON_SPACING_MARK) continue;
        out.push_back(static_cast<char32_t>(c));
    }
    return out;
}

CodePoints lower(const CodePoints& cps) {
    CodePoints out(cps);
    for (auto& c : out) c = static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
    return out;
}

std::vector<std::string> split_tokens(const CodePoints& cps) {
    std::vector<std::string> tokens;
    CodePoints cur;
    for (char32_t c : cps) {
        if (is_space(c)) {
            if (!cur.empty()) tokens.push_back(encode(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) tokens.push_back(encode(cur));
    return tokens;
}

// Deletes each maximal digit run that touches no letter on either side.
CodePoints drop_standalone_digits(const CodePoints& cps) {
    CodePoints out;
    out.reserve(cps.size());
    std::size_t i = 0;
    while (i < cps.size()) {
        if (!u_isdigit(static_cast<UChar32>(cps[i]))) {
            out.push_back(cps[i++]);
            continue;
        }
        std::size_t end = i;
        while (end < cps.size() && u_isdigit(static_cast<UChar32>(cps[end]))) ++end;
        const bool letter_before = i > 0 && u_isalpha(static_cast<UChar32>(cps[i - 1]));
        const bool letter_after = end < cps.size() && u_isalpha(static_cast<UChar32>(cps[end]));
        if (letter_before || letter_after) out.append(cps, i, end - i);
        i = end;
    }
    return out;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::string normalize_case(std::string_view text, bool fold_accents) {
    CodePoints cps = lower(decode(text));
    if (fold_accents) cps = lower(fold(cps));
    return encode(cps);
}

StopwordSet::StopwordSet(const std::vector<std::string>& words) {
    for (const auto& w : words) {
        if (is_blank(w)) continue;
        std::vector<std::string> parts = split_tokens(decode(w));
        for (auto& part : parts) {
            words_.insert(normalize_case(part, false));
            folded_.insert(normalize_case(part, true));
        }
    }
}

StopwordSet StopwordSet::from_file(const std::filesystem::path& path) {
    return from_files(std::span<const std::filesystem::path>(&path, 1));
}

StopwordSet StopwordSet::from_files(std::span<const std::filesystem::path> paths) {
    std::vector<std::string> words;
    for (const auto& path : paths) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open stopword file '" + path.string() + "'");
        std::string line;
        while (std::getline(in, line)) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            if (!is_blank(line)) words.push_back(line);
        }
    }
    return StopwordSet(words);
}

bool StopwordSet::contains(std::string_view token, bool folded) const {
    const auto& set = folded ? folded_ : words_;
    return set.contains(std::string(token));
}

std::vector<std::string> StopwordSet::sorted_words() const {
    std::vector<std::string> out(words_.begin(), words_.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t StopwordSet::fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& w : sorted_words()) {
        h = fnv1a(w, h);
        h = fnv1a("\n", h);
    }
    return h;
}

std::string build_description(const Product& p) {
    std::string out;
    for (const std::string* field : {&p.name, &p.legal_name, &p.ingredients}) {
        if (is_blank(*field)) continue;
        if (!out.empty()) out.push_back(' ');
        out += *field;
    }
    return out;
}

WordList preprocess(std::string_view text, const StopwordSet& stopwords, const PreprocessOptions& opts) {
    CodePoints cps = decode(text);

    for (auto& c : cps) {
        if (c == U'(' || c == U')' || c == U'[' || c == U']' || c == U'{' || c == U'}') c = U' ';
    }
    cps = lower(cps);
    if (opts.fold_accents) cps = lower(fold(cps));
    cps = drop_standalone_digits(cps);

    // Stopwords on whitespace-delimited tokens (punctuation may still be attached).
    CodePoints kept;
    kept.reserve(cps.size());
    for (const auto& token : split_tokens(cps)) {
        if (stopwords.contains(token, opts.fold_accents)) continue;
        kept += decode(token);
        kept.push_back(U' ');
    }

    for (auto& c : kept) {
        if (is_punct_or_symbol(c)) c = U' ';
    }

    WordList out;
    std::unordered_set<std::string> seen;
    for (auto& token : split_tokens(kept)) {
        if (token.empty() || stopwords.contains(token, opts.fold_accents)) continue;
        if (seen.insert(token).second) out.words.push_back(std::move(token));
    }
    return out;
}

WordList preprocess_product(const Product& p, const StopwordSet& stopwords, const PreprocessOptions& opts) {
    return preprocess(build_description(p), stopwords, opts);
}

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
    index_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (!index_.emplace(words_[i], i).second) throw DataError("duplicate vocabulary word '" + words_[i] + "'");
    }
}

std::optional<std::size_t> Vocabulary::find(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vocabulary build_vocabulary(std::span<const WordList> lists) {
    std::vector<std::string> words;
    std::unordered_set<std::string> seen;
    for (const auto& list : lists) {
        for (const auto& w : list.words) {
            if (seen.insert(w).second) words.push_back(w);
        }
    }
    if (words.empty()) throw DataError("vocabulary is empty: no product has any word after preprocessing");
    return Vocabulary(std::move(words));
}

}  // namespace grocat
