#pragma once

// Corpus loading (JSON Lines) and the title-keyword exclusion filter for
// non-research material.

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "artiq/corpus.hpp"
#include "artiq/detail/strings.hpp"
#include "artiq/error.hpp"

namespace artiq {

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace detail {

inline std::string require_string(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
    const auto& v = j.at(key);
    if (!v.is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

// Text fields may be null when an extractor produced nothing.
inline std::string text_or_empty(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
    const auto& v = j.at(key);
    if (v.is_null()) return {};
    if (!v.is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

inline std::optional<std::string> nullable_string(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_string())
        throw std::invalid_argument(std::string("field '") + key + "' must be a string or null");
    return j.at(key).get<std::string>();
}

inline const nlohmann::json& require_array(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw std::invalid_argument(std::string("field '") + key + "' must be an array");
    return j.at(key);
}

inline int require_int(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer())
        throw std::invalid_argument(std::string("field '") + key + "' must be an integer");
    return j.at(key).get<int>();
}

inline std::vector<std::string> string_list(const nlohmann::json& j, const char* key) {
    std::vector<std::string> out;
    for (const auto& v : require_array(j, key)) {
        if (!v.is_string())
            throw std::invalid_argument(std::string("'") + key + "' entries must be strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

} // namespace detail

inline AuthorRef author_from_json(const nlohmann::json& j) {
    return {detail::require_string(j, "author_id"), detail::nullable_string(j, "country")};
}

inline WorkRef work_from_json(const nlohmann::json& j) {
    return {detail::require_string(j, "work_id"), detail::string_list(j, "author_ids")};
}

inline CitingWork citing_from_json(const nlohmann::json& j) {
    return {detail::require_string(j, "work_id"), detail::string_list(j, "author_ids"),
            detail::require_int(j, "year")};
}

/// Parses one corpus object. Unknown fields are ignored; missing or
/// mistyped known fields throw std::invalid_argument.
inline ArticleRecord record_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("line is not a JSON object");
    ArticleRecord r;
    r.id = detail::require_string(j, "id");
    if (!j.contains("doi")) throw std::invalid_argument("missing field 'doi'");
    r.doi = detail::nullable_string(j, "doi");
    r.group = detail::require_string(j, "group");
    r.title = detail::text_or_empty(j, "title");
    r.abstract = detail::text_or_empty(j, "abstract");
    r.full_text = detail::text_or_empty(j, "full_text");
    r.pub_year = detail::require_int(j, "pub_year");
    for (const auto& a : detail::require_array(j, "authors")) r.authors.push_back(author_from_json(a));
    for (const auto& w : detail::require_array(j, "references")) r.references.push_back(work_from_json(w));
    for (const auto& c : detail::require_array(j, "citations")) r.citations.push_back(citing_from_json(c));
    return r;
}

inline nlohmann::ordered_json to_json(const ArticleRecord& r) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["doi"] = r.doi ? nlohmann::ordered_json(*r.doi) : nlohmann::ordered_json(nullptr);
    j["group"] = r.group;
    j["title"] = r.title;
    j["abstract"] = r.abstract;
    j["full_text"] = r.full_text;
    j["pub_year"] = r.pub_year;
    auto authors = nlohmann::ordered_json::array();
    for (const auto& a : r.authors)
        authors.push_back({{"author_id", a.author_id},
                           {"country", a.country ? nlohmann::ordered_json(*a.country)
                                                 : nlohmann::ordered_json(nullptr)}});
    j["authors"] = std::move(authors);
    auto refs = nlohmann::ordered_json::array();
    for (const auto& w : r.references) refs.push_back({{"work_id", w.work_id}, {"author_ids", w.author_ids}});
    j["references"] = std::move(refs);
    auto cites = nlohmann::ordered_json::array();
    for (const auto& c : r.citations)
        cites.push_back({{"work_id", c.work_id}, {"author_ids", c.author_ids}, {"year", c.year}});
    j["citations"] = std::move(cites);
    return j;
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

struct LineError {
    std::size_t line = 0; // 1-based
    std::string message;
};

struct DroppedRecord {
    std::size_t line = 0;
    std::string id;
    ValidationReport violations;
};

struct LoadResult {
    CorpusSet corpus;
    std::vector<LineError> line_errors;
    std::vector<DroppedRecord> dropped;
};

/// Parses JSON Lines text. When `groups` is empty the labels are inferred
/// in first-seen order. Malformed lines become LineErrors; records failing
/// validation or repeating an earlier id are dropped and reported.
inline LoadResult parse_corpus(std::string_view text, std::vector<std::string> groups,
                               int max_year = current_year()) {
    const bool infer = groups.empty();
    LoadResult result;
    std::vector<ArticleRecord> records;
    std::unordered_set<std::string> ids;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto end = nl == std::string_view::npos ? text.size() : nl;
        const auto line = detail::trim(text.substr(pos, end - pos));
        ++line_no;
        pos = end + 1;
        if (line.empty()) {
            if (nl == std::string_view::npos) break;
            continue;
        }
        ArticleRecord rec;
        try {
            rec = record_from_json(nlohmann::json::parse(line));
        } catch (const std::exception& e) {
            result.line_errors.push_back({line_no, e.what()});
            if (nl == std::string_view::npos) break;
            continue;
        }
        if (infer && std::find(groups.begin(), groups.end(), rec.group) == groups.end() &&
            !rec.group.empty())
            groups.push_back(rec.group);
        auto violations = validate_record(rec, groups, max_year);
        if (!violations.empty()) {
            result.dropped.push_back({line_no, rec.id, std::move(violations)});
        } else if (!ids.insert(rec.id).second) {
            result.dropped.push_back({line_no, rec.id, {{"id", "duplicate id"}}});
        } else {
            records.push_back(std::move(rec));
        }
        if (nl == std::string_view::npos) break;
    }
    result.corpus = CorpusSet(std::move(groups), std::move(records));
    return result;
}

/// Loads a JSON Lines corpus file. Throws IoError if the file is unreadable.
inline LoadResult load_corpus(const std::string& path, std::vector<std::string> groups,
                              int max_year = current_year()) {
    return parse_corpus(detail::read_file(path), std::move(groups), max_year);
}

// ---------------------------------------------------------------------------
// Exclusion filters
// ---------------------------------------------------------------------------

struct ExclusionRule {
    std::string keyword; // lowercase, matched as a substring of the title
};

inline std::vector<ExclusionRule> default_exclusion_rules() {
    return {{"editorial"},           {"book review"}, {"letter to the editor"},
            {"letter from the editor"}, {"correction"}, {"opinion"}};
}

/// Reads extra rules (one keyword per line). Keywords are lowercased.
inline std::vector<ExclusionRule> load_exclusion_rules(const std::string& path) {
    std::vector<ExclusionRule> rules;
    for (auto& k : detail::read_list_file(path)) rules.push_back({detail::lowercase(k)});
    return rules;
}

struct ExcludedRecord {
    ArticleRecord record;
    std::string reason; // matched keyword, or "language"
};

struct FilterResult {
    std::vector<ArticleRecord> kept;
    std::vector<ExcludedRecord> excluded;
};

/// Excludes every record whose lowercased title contains a rule keyword.
/// The first matching rule (in rule order) is reported.
inline FilterResult filter_non_research(const std::vector<ArticleRecord>& records,
                                        const std::vector<ExclusionRule>& rules) {
    for (const auto& r : rules)
        if (r.keyword.empty()) throw std::invalid_argument("empty exclusion keyword");
    FilterResult out;
    for (const auto& rec : records) {
        const auto title = detail::lowercase(rec.title);
        const ExclusionRule* hit = nullptr;
        for (const auto& rule : rules)
            if (title.find(rule.keyword) != std::string::npos) {
                hit = &rule;
                break;
            }
        if (hit)
            out.excluded.push_back({rec, hit->keyword});
        else
            out.kept.push_back(rec);
    }
    return out;
}

/// Returns true when a title should be kept as English.
using TitleClassifier = std::function<bool(std::string_view title)>;

/// Optional language filter; records the classifier rejects are excluded
/// with reason "language".
inline FilterResult filter_language(const std::vector<ArticleRecord>& records,
                                    const TitleClassifier& is_english) {
    FilterResult out;
    for (const auto& rec : records) {
        if (!is_english || is_english(rec.title))
            out.kept.push_back(rec);
        else
            out.excluded.push_back({rec, "language"});
    }
    return out;
}

/// Crude built-in classifier: a title is taken as English when at least
/// 95% of its letters are ASCII and it contains a common English function
/// word. Non-ASCII UTF-8 bytes are counted as letters.
inline bool ascii_english_title(std::string_view title) {
    std::size_t ascii = 0, other = 0;
    for (unsigned char c : title) {
        if (detail::is_ascii_alpha(static_cast<char>(c))) ++ascii;
        else if (c >= 0xC0) ++other; // lead byte of a multi-byte sequence
    }
    if (ascii == 0) return false;
    if (static_cast<double>(ascii) / static_cast<double>(ascii + other) < 0.95) return false;
    static const std::unordered_set<std::string> function_words = {
        "the", "of", "and", "in", "a", "an", "on", "for", "to", "with", "among",
        "from", "by", "at", "between", "is", "are", "as", "or", "its", "their"};
    for (auto tok : detail::split_ws(title)) {
        std::string w;
        for (char c : tok)
            if (detail::is_ascii_alpha(c)) w.push_back(detail::to_lower(c));
        if (function_words.contains(w)) return true;
    }
    return false;
}

} // namespace artiq
