#pragma once

// Word counts, sentence segmentation, syllable counting and the Flesch
// Reading Ease score.
//
// Rules in brief:
//   * A word is a whitespace-delimited token that still has content after
//     leading/trailing punctuation is stripped. Hyphenated compounds, numbers
//     and acronyms are single words.
//   * Sentences end at '.', '!' or '?' followed by whitespace and a capital
//     letter, or by the end of the text. Abbreviations on the allowlist never
//     end a sentence.
//   * Syllables are maximal vowel clusters (a e i o u y), minus a silent
//     final 'e' unless the word ends in consonant + "le"; at least one.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "artiq/detail/strings.hpp"
#include "artiq/error.hpp"

namespace artiq {

namespace detail {

// Multi-byte punctuation stripped from word edges: curly quotes, dashes,
// ellipsis, guillemets.
inline constexpr std::array<std::string_view, 10> kUtf8Punct = {
    "“", "”", "‘", "’", "–",
    "—", "…", "«", "»", "−"};

inline bool is_ascii_punct(char c) noexcept {
    const auto u = static_cast<unsigned char>(c);
    return u < 0x80 && u > 0x20 && !is_ascii_alpha(c) && !is_ascii_digit(c);
}

inline std::string_view strip_punct(std::string_view tok) noexcept {
    bool changed = true;
    while (changed && !tok.empty()) {
        changed = false;
        if (is_ascii_punct(tok.front())) {
            tok.remove_prefix(1);
            changed = true;
            continue;
        }
        if (is_ascii_punct(tok.back())) {
            tok.remove_suffix(1);
            changed = true;
            continue;
        }
        for (auto p : kUtf8Punct) {
            if (tok.starts_with(p)) {
                tok.remove_prefix(p.size());
                changed = true;
                break;
            }
            if (tok.ends_with(p)) {
                tok.remove_suffix(p.size());
                changed = true;
                break;
            }
        }
    }
    return tok;
}

inline bool is_vowel(char c) noexcept {
    switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y': return true;
    default: return false;
    }
}

} // namespace detail

/// Word tokens of `text` after punctuation stripping, in order.
inline std::vector<std::string_view> word_tokens(std::string_view text) {
    std::vector<std::string_view> out;
    for (auto tok : detail::split_ws(text)) {
        auto w = detail::strip_punct(tok);
        if (!w.empty()) out.push_back(w);
    }
    return out;
}

inline std::size_t count_words(std::string_view text) { return word_tokens(text).size(); }

struct LengthIndicators {
    std::size_t abstract_words = 0;
    std::size_t fulltext_words = 0;
};

inline LengthIndicators length_indicators(std::string_view abstract, std::string_view full_text) {
    return {count_words(abstract), count_words(full_text)};
}

// ---------------------------------------------------------------------------
// Sentences
// ---------------------------------------------------------------------------

struct SentenceSpan {
    std::size_t begin = 0; // byte offsets into the text, [begin, end)
    std::size_t end = 0;

    friend bool operator==(const SentenceSpan&, const SentenceSpan&) = default;
};

inline std::vector<std::string> default_abbreviations() {
    return {"et al.", "e.g.", "i.e.", "fig.", "figs.", "vs.", "cf.", "approx.", "ca.",
            "dr.", "mr.", "mrs.", "ms.", "prof.", "no.", "vol.", "pp.", "eq.", "resp.",
            "u.s.", "u.k.", "st.", "jr.", "sr.", "inc.", "ltd.", "al."};
}

/// Sentence splitter with an abbreviation allowlist. Entries are matched
/// case-insensitively and must include their trailing period.
class SentenceSegmenter {
public:
    SentenceSegmenter() : SentenceSegmenter(default_abbreviations()) {}

    explicit SentenceSegmenter(std::vector<std::string> abbreviations) {
        for (auto& a : abbreviations) abbreviations_.push_back(detail::lowercase(a));
    }

    const std::vector<std::string>& abbreviations() const noexcept { return abbreviations_; }

    std::vector<SentenceSpan> segment(std::string_view text) const {
        std::vector<SentenceSpan> spans;
        std::size_t i = 0;
        const std::size_t n = text.size();
        auto skip_ws = [&](std::size_t p) {
            while (p < n && detail::is_space(text[p])) ++p;
            return p;
        };
        std::size_t start = skip_ws(0);
        i = start;
        while (i < n) {
            const char c = text[i];
            if (c != '.' && c != '!' && c != '?') {
                ++i;
                continue;
            }
            const std::size_t punct_pos = i;
            std::size_t j = i + 1;
            while (j < n && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
            // closing quotes or brackets belong to the sentence
            while (j < n) {
                if (text[j] == ')' || text[j] == ']' || text[j] == '"' || text[j] == '\'') {
                    ++j;
                } else if (text.substr(j).starts_with("”") || text.substr(j).starts_with("’")) {
                    j += 3;
                } else {
                    break;
                }
            }
            const std::size_t after = skip_ws(j);
            const bool at_end = after >= n;
            const bool boundary =
                at_end || (after > j && detail::is_ascii_upper(text[after]));
            if (boundary && !(c == '.' && j == punct_pos + 1 && is_abbreviation(text, punct_pos))) {
                spans.push_back({start, j});
                start = after;
                i = after;
            } else {
                i = j;
            }
        }
        if (start < n) {
            std::size_t end = n;
            while (end > start && detail::is_space(text[end - 1])) --end;
            if (end > start) spans.push_back({start, end});
        }
        return spans;
    }

private:
    // True if the period at `dot` closes an allowlisted abbreviation.
    bool is_abbreviation(std::string_view text, std::size_t dot) const {
        for (const auto& a : abbreviations_) {
            if (a.size() > dot + 1) continue;
            const std::size_t begin = dot + 1 - a.size();
            if (!detail::iequals(text.substr(begin, a.size()), a)) continue;
            if (begin == 0) return true;
            const char before = text[begin - 1];
            if (detail::is_space(before) || before == '(' || before == '[' || before == '"')
                return true;
        }
        return false;
    }

    std::vector<std::string> abbreviations_;
};

inline std::vector<SentenceSpan> segment_sentences(std::string_view text) {
    static const SentenceSegmenter segmenter;
    return segmenter.segment(text);
}

// ---------------------------------------------------------------------------
// Syllables and readability
// ---------------------------------------------------------------------------

/// Vowel-cluster syllable estimate. Tokens containing anything other than
/// ASCII letters count as one syllable.
inline std::size_t count_syllables(std::string_view word) {
    if (word.empty()) return 0;
    for (char c : word)
        if (!detail::is_ascii_alpha(c)) return 1;
    const std::string w = detail::lowercase(word);
    std::size_t groups = 0;
    bool in_vowel = false;
    for (char c : w) {
        const bool v = detail::is_vowel(c);
        if (v && !in_vowel) ++groups;
        in_vowel = v;
    }
    const std::size_t len = w.size();
    if (groups > 1 && w.back() == 'e') {
        const bool consonant_le = len >= 3 && w[len - 2] == 'l' && !detail::is_vowel(w[len - 3]);
        if (!consonant_le) --groups;
    }
    return groups == 0 ? 1 : groups;
}

/// Syllables of a word token as used for readability: hyphenated parts are
/// counted separately and apostrophes are dropped.
inline std::size_t token_syllables(std::string_view token) {
    std::size_t total = 0;
    std::size_t start = 0;
    while (start <= token.size()) {
        auto dash = token.find('-', start);
        if (dash == std::string_view::npos) dash = token.size();
        std::string part;
        for (char c : token.substr(start, dash - start))
            if (c != '\'') part.push_back(c);
        if (!part.empty()) total += count_syllables(part);
        start = dash + 1;
    }
    return total == 0 ? 1 : total;
}

struct ReadabilityScore {
    double fre = 0.0;
    std::size_t words = 0;
    std::size_t sentences = 0;
    std::size_t syllables = 0;
};

inline double flesch_formula(double words, double sentences, double syllables) {
    return 206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words);
}

/// Flesch Reading Ease. Throws UndefinedError when the text has no words.
inline ReadabilityScore flesch_reading_ease(std::string_view text,
                                            const SentenceSegmenter& segmenter) {
    const auto words = word_tokens(text);
    if (words.empty()) throw UndefinedError("reading ease undefined for text without words");
    ReadabilityScore s;
    s.words = words.size();
    s.sentences = std::max<std::size_t>(1, segmenter.segment(text).size());
    for (auto w : words) s.syllables += token_syllables(w);
    s.fre = flesch_formula(static_cast<double>(s.words), static_cast<double>(s.sentences),
                           static_cast<double>(s.syllables));
    return s;
}

inline ReadabilityScore flesch_reading_ease(std::string_view text) {
    static const SentenceSegmenter segmenter;
    return flesch_reading_ease(text, segmenter);
}

} // namespace artiq
