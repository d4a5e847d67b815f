#pragma once

// Dictionary-based misspelling scan of titles and abstracts.

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "artiq/corpus.hpp"
#include "artiq/detail/strings.hpp"
#include "artiq/error.hpp"
#include "artiq/textmetrics.hpp"

namespace artiq {

/// Lowercase word set used for dictionaries and allowlists.
class WordSet {
public:
    WordSet() = default;
    WordSet(std::initializer_list<std::string_view> words) {
        for (auto w : words) insert(w);
    }
    explicit WordSet(const std::vector<std::string>& words) {
        for (const auto& w : words) insert(w);
    }

    static WordSet from_file(const std::string& path) { return WordSet(detail::read_list_file(path)); }

    void insert(std::string_view w) { words_.insert(detail::lowercase(w)); }
    bool contains(std::string_view lower) const { return words_.contains(std::string(lower)); }
    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }

private:
    std::unordered_set<std::string> words_;
};

enum class TextField { title, abstract };

inline const char* to_string(TextField f) noexcept { return f == TextField::title ? "title" : "abstract"; }

struct FlaggedToken {
    std::string token;
    TextField field = TextField::title;
    std::size_t position = 0; // byte offset within the field

    friend bool operator==(const FlaggedToken&, const FlaggedToken&) = default;
};

struct SpellReport {
    std::vector<FlaggedToken> flagged;
    bool any_title_error = false;
    bool any_abstract_error = false;
};

namespace detail {

struct SpellToken {
    std::string_view text;
    std::size_t position;
};

// Splits on whitespace and punctuation other than the apostrophe, so that
// hyphenated compounds are checked part by part.
inline std::vector<SpellToken> spell_tokens(std::string_view text) {
    std::vector<SpellToken> out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto utf8_punct_at = [&](std::size_t p) -> std::size_t {
        for (auto s : kUtf8Punct)
            if (text.substr(p).starts_with(s) && s != "’") return s.size();
        return 0;
    };
    auto is_sep = [&](std::size_t p) -> std::size_t {
        const char c = text[p];
        if (is_space(c)) return 1;
        if (c != '\'' && is_ascii_punct(c)) return 1;
        return utf8_punct_at(p);
    };
    while (i < n) {
        if (auto k = is_sep(i)) {
            i += k;
            continue;
        }
        const std::size_t start = i;
        while (i < n && is_sep(i) == 0) ++i;
        out.push_back({text.substr(start, i - start), start});
    }
    return out;
}

} // namespace detail

/// Flags tokens whose lowercase form is in neither the dictionary nor the
/// allowlist. Only purely alphabetic tokens of length >= 3 without internal
/// capitals are candidates; everything else is treated as jargon.
class SpellChecker {
public:
    SpellChecker(WordSet dictionary, WordSet allowlist = {})
        : dictionary_(std::move(dictionary)), allowlist_(std::move(allowlist)) {
        if (dictionary_.empty()) throw std::invalid_argument("spelling dictionary is empty");
    }

    static bool is_candidate(std::string_view tok) noexcept {
        if (tok.size() < 3) return false;
        for (std::size_t i = 0; i < tok.size(); ++i) {
            if (!detail::is_ascii_alpha(tok[i])) return false;
            if (i > 0 && detail::is_ascii_upper(tok[i])) return false;
        }
        return true;
    }

    std::vector<FlaggedToken> scan(std::string_view text, TextField field = TextField::abstract) const {
        std::vector<FlaggedToken> out;
        for (const auto& t : detail::spell_tokens(text)) {
            if (!is_candidate(t.text)) continue;
            const auto lower = detail::lowercase(t.text);
            if (dictionary_.contains(lower) || allowlist_.contains(lower)) continue;
            out.push_back({std::string(t.text), field, t.position});
        }
        return out;
    }

    SpellReport scan_record(const ArticleRecord& record) const {
        SpellReport r;
        r.flagged = scan(record.title, TextField::title);
        auto abs = scan(record.abstract, TextField::abstract);
        r.any_title_error = !r.flagged.empty();
        r.any_abstract_error = !abs.empty();
        r.flagged.insert(r.flagged.end(), abs.begin(), abs.end());
        return r;
    }

    const WordSet& dictionary() const noexcept { return dictionary_; }
    const WordSet& allowlist() const noexcept { return allowlist_; }

private:
    WordSet dictionary_;
    WordSet allowlist_;
};

inline std::vector<FlaggedToken> scan_misspellings(std::string_view text, const WordSet& dictionary,
                                                   const WordSet& allowlist) {
    return SpellChecker(dictionary, allowlist).scan(text);
}

struct Proportion {
    std::size_t numerator = 0;
    std::size_t denominator = 0;

    double value() const {
        if (denominator == 0) throw UndefinedError("proportion undefined for empty input");
        return static_cast<double>(numerator) / static_cast<double>(denominator);
    }
};

/// Share of records whose `field` contains at least one flagged token.
inline Proportion spell_error_proportion(const std::vector<ArticleRecord>& records, TextField field,
                                         const SpellChecker& checker) {
    if (records.empty()) throw UndefinedError("proportion undefined for empty input");
    Proportion p{0, records.size()};
    for (const auto& r : records) {
        const auto& text = field == TextField::title ? r.title : r.abstract;
        if (!checker.scan(text, field).empty()) ++p.numerator;
    }
    return p;
}

} // namespace artiq
