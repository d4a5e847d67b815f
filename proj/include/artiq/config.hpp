#pragma once

// Run configuration shared by the command-line tool and the pipeline.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "artiq/detail/strings.hpp"
#include "artiq/error.hpp"
#include "artiq/inferstats.hpp"
#include "artiq/report.hpp"
#include "artiq/statparse.hpp"

namespace artiq {

inline constexpr const char* kVersion = "1.0.0";

inline std::filesystem::path default_data_dir() {
#ifdef ARTIQ_DATA_DIR
    return ARTIQ_DATA_DIR;
#else
    return "data";
#endif
}

struct RunConfig {
    std::string corpus;
    std::vector<std::string> groups; // empty: infer in first-seen order
    double alpha = 0.05;
    std::string dictionary;          // empty: bundled word list
    std::string allowlist;
    std::string abbreviations;
    std::string ethics_terms;
    std::string consent_terms;
    std::string exclusion_rules;     // extra keywords on top of the defaults
    bool language_filter = false;
    std::string tails = "two";
    std::string correction = "holm";
    bool force_pairwise = false;
    int citation_window = 3;
    std::optional<int> census_year;
    std::string out = "artiq-out";
    std::string endpoint;            // empty: $ARTIQ_METADATA_ENDPOINT
    std::string cache_dir;
    bool enrich = false;
    bool offline = false;
    double rate_limit = 10.0;
    std::vector<std::string> formats = {"json", "csv", "markdown"};
    bool plots = true;
    bool svg = false;
    unsigned jobs = 0;               // 0: number of cores
    long max_warnings = -1;          // -1: unlimited
};

inline Tails parse_tails(std::string_view s) {
    if (s == "two") return Tails::two;
    if (s == "one") return Tails::one;
    throw ConfigError("tails must be 'one' or 'two', got '" + std::string(s) + "'");
}

inline Correction parse_correction(std::string_view s) {
    if (s == "holm") return Correction::holm;
    if (s == "bonferroni") return Correction::bonferroni;
    if (s == "none") return Correction::none;
    throw ConfigError("correction must be holm, bonferroni or none, got '" + std::string(s) + "'");
}

inline ReportFormat parse_format(std::string_view s) {
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    if (s == "markdown" || s == "md") return ReportFormat::markdown;
    throw ConfigError("unknown report format '" + std::string(s) + "'");
}

namespace detail {

inline void require_file(const std::string& path, const char* what) {
    if (path.empty()) return;
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec))
        throw ConfigError(std::string(what) + " '" + path + "' not found");
}

} // namespace detail

/// Checks ranges and that every configured input path exists.
inline void validate(const RunConfig& c, bool need_corpus = true) {
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (c.citation_window < 1) throw ConfigError("citation window must be at least 1 year");
    if (c.rate_limit <= 0) throw ConfigError("rate limit must be positive");
    parse_tails(c.tails);
    parse_correction(c.correction);
    for (const auto& f : c.formats) parse_format(f);
    if (need_corpus) {
        if (c.corpus.empty()) throw ConfigError("no corpus given");
        detail::require_file(c.corpus, "corpus");
    }
    detail::require_file(c.dictionary, "dictionary");
    detail::require_file(c.allowlist, "allowlist");
    detail::require_file(c.abbreviations, "abbreviation list");
    detail::require_file(c.ethics_terms, "ethics term list");
    detail::require_file(c.consent_terms, "consent term list");
    detail::require_file(c.exclusion_rules, "exclusion rules");
    if (c.offline && c.enrich && c.cache_dir.empty())
        throw ConfigError("--offline enrichment needs --cache-dir");
}

inline nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["corpus"] = c.corpus;
    j["groups"] = c.groups;
    j["alpha"] = c.alpha;
    j["dictionary"] = c.dictionary;
    j["allowlist"] = c.allowlist;
    j["abbreviations"] = c.abbreviations;
    j["ethics_terms"] = c.ethics_terms;
    j["consent_terms"] = c.consent_terms;
    j["exclusion_rules"] = c.exclusion_rules;
    j["language_filter"] = c.language_filter;
    j["tails"] = c.tails;
    j["correction"] = c.correction;
    j["force_pairwise"] = c.force_pairwise;
    j["citation_window"] = c.citation_window;
    j["census_year"] = c.census_year ? nlohmann::ordered_json(*c.census_year) : nlohmann::ordered_json(nullptr);
    j["out"] = c.out;
    j["endpoint"] = c.endpoint;
    j["cache_dir"] = c.cache_dir;
    j["enrich"] = c.enrich;
    j["offline"] = c.offline;
    j["rate_limit"] = c.rate_limit;
    j["formats"] = c.formats;
    j["plots"] = c.plots;
    j["svg"] = c.svg;
    j["jobs"] = c.jobs;
    j["max_warnings"] = c.max_warnings;
    return j;
}

/// Hash over the settings that affect results (output location and worker
/// count excluded).
inline std::string config_hash(const RunConfig& c) {
    auto j = to_json(c);
    j.erase("out");
    j.erase("jobs");
    j.erase("max_warnings");
    return detail::hex64(detail::fnv1a64(j.dump()));
}

} // namespace artiq
