#pragma once

// End-to-end orchestration: ingest -> (enrich) -> indicators -> comparison
// -> report files.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "artiq/config.hpp"
#include "artiq/enrich.hpp"
#include "artiq/indicators.hpp"
#include "artiq/ingest.hpp"
#include "artiq/report.hpp"

namespace artiq {

using WarningSink = std::function<void(const std::string&)>;

// ---------------------------------------------------------------------------
// Resources
// ---------------------------------------------------------------------------

/// Builds the per-article configuration from the run configuration. Empty
/// paths fall back to the bundled lists under the data directory (or the
/// built-in defaults when those are absent).
inline IndicatorConfig load_indicator_config(const RunConfig& c) {
    namespace fs = std::filesystem;
    const auto data = default_data_dir();
    auto pick = [&](const std::string& given, const fs::path& fallback) -> std::string {
        if (!given.empty()) return given;
        std::error_code ec;
        return fs::is_regular_file(fallback, ec) ? fallback.string() : std::string();
    };

    IndicatorConfig cfg;
    const auto dict = pick(c.dictionary, data / "dictionary" / "en_us_gb.txt");
    if (!dict.empty()) {
        WordSet allow;
        if (const auto a = pick(c.allowlist, data / "allowlist.txt"); !a.empty()) allow = WordSet::from_file(a);
        cfg.spell = std::make_shared<const SpellChecker>(WordSet::from_file(dict), std::move(allow));
    }
    if (const auto a = pick(c.abbreviations, data / "abbreviations.txt"); !a.empty())
        cfg.segmenter = SentenceSegmenter(detail::read_list_file(a));
    auto ethics = default_ethics_terms();
    auto consent = default_consent_terms();
    if (const auto e = pick(c.ethics_terms, data / "ethics_terms.txt"); !e.empty()) ethics = detail::read_list_file(e);
    if (const auto k = pick(c.consent_terms, data / "consent_terms.txt"); !k.empty())
        consent = detail::read_list_file(k);
    cfg.mentions = MentionDetector(std::move(ethics), std::move(consent));
    cfg.statcheck = {c.alpha, parse_tails(c.tails)};
    cfg.biblio = {c.citation_window, c.census_year};
    cfg.threads = c.jobs;
    return cfg;
}

inline ComparisonConfig comparison_config(const RunConfig& c) {
    return {c.alpha, parse_correction(c.correction), c.force_pairwise};
}

inline ReportSettings report_settings(const RunConfig& c) {
    ReportSettings s;
    s.alpha = c.alpha;
    s.correction = c.correction;
    s.tails = c.tails;
    s.force_pairwise = c.force_pairwise;
    s.citation_window_years = c.citation_window;
    return s;
}

// ---------------------------------------------------------------------------
// Ingest
// ---------------------------------------------------------------------------

struct IngestOutcome {
    std::size_t loaded = 0; // valid records before filtering
    std::vector<LineError> line_errors;
    std::vector<DroppedRecord> dropped;
    std::vector<ExcludedRecord> excluded;
    CorpusSet corpus;       // kept records
};

inline IngestOutcome ingest(const RunConfig& c) {
    auto load = load_corpus(c.corpus, c.groups);
    IngestOutcome out;
    out.loaded = load.corpus.size();
    out.line_errors = std::move(load.line_errors);
    out.dropped = std::move(load.dropped);

    auto rules = default_exclusion_rules();
    if (!c.exclusion_rules.empty())
        for (auto& r : load_exclusion_rules(c.exclusion_rules)) rules.push_back(std::move(r));
    auto filtered = filter_non_research(load.corpus.records(), rules);
    out.excluded = std::move(filtered.excluded);
    if (c.language_filter) {
        auto lang = filter_language(filtered.kept, ascii_english_title);
        filtered.kept = std::move(lang.kept);
        for (auto& e : lang.excluded) out.excluded.push_back(std::move(e));
    }
    out.corpus = CorpusSet(load.corpus.groups(), std::move(filtered.kept));
    return out;
}

/// One-line exclusion accounting, e.g. "kept 8, excluded 2 (editorial)".
inline std::string ingest_summary(const IngestOutcome& o) {
    std::string s = "kept " + std::to_string(o.corpus.size());
    if (o.excluded.empty()) return s;
    std::vector<std::pair<std::string, std::size_t>> reasons;
    for (const auto& e : o.excluded) {
        auto it = std::find_if(reasons.begin(), reasons.end(), [&](const auto& r) { return r.first == e.reason; });
        if (it == reasons.end())
            reasons.emplace_back(e.reason, 1);
        else
            ++it->second;
    }
    s += ", excluded " + std::to_string(o.excluded.size()) + " (";
    for (std::size_t i = 0; i < reasons.size(); ++i) {
        if (i) s += ", ";
        s += reasons[i].first;
        if (reasons.size() > 1) s += ": " + std::to_string(reasons[i].second);
    }
    return s + ")";
}

// ---------------------------------------------------------------------------
// Indicator files
// ---------------------------------------------------------------------------

inline std::string indicators_jsonl(const std::vector<IndicatorVector>& vectors) {
    std::string out;
    for (const auto& v : vectors) out += to_json(v).dump() + "\n";
    return out;
}

inline std::vector<IndicatorVector> read_indicators_jsonl(const std::string& path) {
    std::vector<IndicatorVector> out;
    std::istringstream in(detail::read_file(path));
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (detail::trim(line).empty()) continue;
        try {
            out.push_back(indicator_vector_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw IoError(path + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

/// Group labels in first-seen order.
inline std::vector<std::string> groups_of(const std::vector<IndicatorVector>& vectors) {
    std::vector<std::string> groups;
    for (const auto& v : vectors)
        if (std::find(groups.begin(), groups.end(), v.group) == groups.end()) groups.push_back(v.group);
    return groups;
}

// ---------------------------------------------------------------------------
// Full run
// ---------------------------------------------------------------------------

struct RunSummary {
    std::size_t loaded = 0;
    std::size_t kept = 0;
    std::size_t excluded = 0;
    std::size_t warnings = 0;
    std::optional<EnrichReport> enrichment;
    std::vector<std::filesystem::path> written;
};

namespace detail {

inline std::string utc_timestamp(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace detail

/// Writes report files, plot data and indicators.jsonl for a set of
/// vectors. Returns the comparison warnings.
inline std::vector<std::string> write_outputs(const std::vector<IndicatorVector>& vectors,
                                              const std::vector<std::string>& groups, const RunConfig& c,
                                              std::vector<std::filesystem::path>& written) {
    const std::filesystem::path out = c.out;
    const auto report = build_report(vectors, groups, comparison_config(c), report_settings(c));
    std::vector<ReportFormat> formats;
    for (const auto& f : c.formats) formats.push_back(parse_format(f));
    for (auto& p : emit_report(report, formats, out)) written.push_back(std::move(p));
    if (c.plots)
        for (const auto& i : kIndicators)
            for (auto& p : emit_plot_data(vectors, groups, i.name, out / "plots", c.svg)) written.push_back(std::move(p));
    std::vector<std::string> warnings;
    for (const auto& comp : report.comparisons) {
        for (const auto& w : comp.warnings) warnings.push_back(std::string(info(comp.indicator).name) + ": " + w);
        if (!comp.skipped_reason.empty())
            warnings.push_back(std::string(info(comp.indicator).name) + ": not tested (" + comp.skipped_reason + ")");
    }
    return warnings;
}

/// Runs the whole pipeline. Per-record problems are passed to `warn` and
/// counted; configuration and I/O failures throw.
inline RunSummary run_pipeline(const RunConfig& c, const WarningSink& warn = {}) {
    validate(c);
    const auto started = std::chrono::system_clock::now();
    RunSummary summary;
    auto emit = [&](const std::string& msg) {
        ++summary.warnings;
        if (warn) warn(msg);
    };

    auto in = ingest(c);
    for (const auto& e : in.line_errors) emit("line " + std::to_string(e.line) + ": " + e.message);
    for (const auto& d : in.dropped)
        for (const auto& v : d.violations)
            emit("line " + std::to_string(d.line) + " (" + d.id + "): " + v.field + ": " + v.message);
    summary.loaded = in.loaded;
    summary.excluded = in.excluded.size();

    CorpusSet corpus = std::move(in.corpus);
    if (c.enrich) {
        EnrichOptions eo;
        eo.endpoint = c.endpoint;
        eo.cache_dir = c.cache_dir;
        eo.offline = c.offline;
        eo.max_requests_per_second = c.rate_limit;
        if (c.jobs) eo.concurrency = static_cast<int>(c.jobs);
        auto groups = corpus.groups();
        auto res = enrich_from_metadata_service(corpus.records(), eo);
        for (const auto& e : res.report.fetch_errors) emit(e.id + ": metadata fetch failed: " + e.message);
        for (const auto& e : res.report.parse_errors) emit(e.id + ": " + e.message);
        corpus = CorpusSet(std::move(groups), std::move(res.records));
        summary.enrichment = std::move(res.report);
    }
    summary.kept = corpus.size();
    if (corpus.groups().size() < 2) emit("fewer than two groups; comparisons will be skipped");

    const auto icfg = load_indicator_config(c);
    auto set = compute_indicators(corpus, icfg);
    for (const auto& w : set.warnings) emit(w.id + ": " + w.message);

    const std::filesystem::path out = c.out;
    const auto jsonl = out / "indicators.jsonl";
    detail::write_text(jsonl, indicators_jsonl(set.vectors));
    summary.written.push_back(jsonl);
    for (const auto& w : write_outputs(set.vectors, corpus.groups(), c, summary.written)) emit(w);

    nlohmann::ordered_json meta;
    meta["tool"] = "artiq";
    meta["version"] = kVersion;
    meta["report_schema_version"] = kReportSchemaVersion;
    meta["config_hash"] = config_hash(c);
    meta["config"] = to_json(c);
    meta["counts"] = {{"loaded", summary.loaded},
                      {"line_errors", in.line_errors.size()},
                      {"dropped", in.dropped.size()},
                      {"excluded", summary.excluded},
                      {"analysed", summary.kept},
                      {"warnings", summary.warnings}};
    auto per_group = nlohmann::ordered_json::object();
    for (const auto& g : corpus.groups()) per_group[g] = corpus.group_size(g);
    meta["counts"]["groups"] = std::move(per_group);
    if (summary.enrichment) {
        const auto& r = *summary.enrichment;
        meta["enrichment"] = {{"matched", r.matched},
                              {"unmatched", r.unmatched.size()},
                              {"without_doi", r.without_doi.size()},
                              {"fetch_errors", r.fetch_errors.size()},
                              {"parse_errors", r.parse_errors.size()},
                              {"cache_hits", r.cache_hits},
                              {"network_calls", r.network_calls}};
    }
    meta["started_at"] = detail::utc_timestamp(started);
    meta["finished_at"] = detail::utc_timestamp(std::chrono::system_clock::now());
    const auto meta_path = out / "run_meta.json";
    detail::write_text(meta_path, meta.dump(2) + "\n");
    summary.written.push_back(meta_path);
    return summary;
}

} // namespace artiq
