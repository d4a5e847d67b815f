#pragma once

// Per-article indicator vectors and the indicator routing table.

#include <algorithm>
#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "artiq/biblio.hpp"
#include "artiq/corpus.hpp"
#include "artiq/error.hpp"
#include "artiq/mentions.hpp"
#include "artiq/spellscan.hpp"
#include "artiq/statparse.hpp"
#include "artiq/textmetrics.hpp"

namespace artiq {

/// Every per-article indicator. Optional fields are null when the value is
/// undefined for the article (empty text, no references, no participants,
/// no reported tests, ...); nulls are excluded from summaries and tests.
struct IndicatorVector {
    std::string id;
    std::string group;

    std::optional<double> abstract_words;
    std::optional<double> fulltext_words;
    std::optional<double> fre;
    std::optional<bool> title_spell_error;
    std::optional<bool> abstract_spell_error;
    double n_references = 0;
    double n_citations_total = 0;
    std::optional<double> n_citations_3yr;
    std::optional<double> pct_self_references;
    std::optional<double> pct_self_citations;
    double n_authors = 0;
    std::optional<double> n_countries;
    bool has_participants = false;
    std::optional<bool> mentions_ethics;
    std::optional<bool> mentions_consent;
    bool has_any_test = false;
    std::optional<bool> has_decision_error;
};

enum class Indicator {
    abstract_words,
    fulltext_words,
    fre,
    title_spell_error,
    abstract_spell_error,
    n_references,
    n_citations_total,
    n_citations_3yr,
    pct_self_references,
    pct_self_citations,
    n_authors,
    n_countries,
    has_participants,
    mentions_ethics,
    mentions_consent,
    has_any_test,
    has_decision_error,
};

enum class TestFamily { anova, kruskal, chisq };

inline const char* to_string(TestFamily f) noexcept {
    switch (f) {
    case TestFamily::anova: return "anova";
    case TestFamily::kruskal: return "kruskal";
    case TestFamily::chisq: return "chisq";
    }
    return "?";
}

struct IndicatorInfo {
    Indicator id;
    std::string_view name;
    bool boolean;
    TestFamily family;
    std::string_view label; // human-readable, for reports
};

// Continuous, roughly normal measures go to ANOVA + Tukey; skewed counts
// and percentages to Kruskal-Wallis + Wilcoxon; yes/no flags to the
// chi-square test of proportions.
inline constexpr std::array<IndicatorInfo, 17> kIndicators = {{
    {Indicator::abstract_words, "abstract_words", false, TestFamily::anova, "Abstract length (words)"},
    {Indicator::fulltext_words, "fulltext_words", false, TestFamily::anova, "Full-text length (words)"},
    {Indicator::fre, "fre", false, TestFamily::anova, "Flesch Reading Ease (full text)"},
    {Indicator::title_spell_error, "title_spell_error", true, TestFamily::chisq, "Titles with spelling errors"},
    {Indicator::abstract_spell_error, "abstract_spell_error", true, TestFamily::chisq, "Abstracts with spelling errors"},
    {Indicator::n_references, "n_references", false, TestFamily::kruskal, "References"},
    {Indicator::n_citations_total, "n_citations_total", false, TestFamily::kruskal, "Citations (all time)"},
    {Indicator::n_citations_3yr, "n_citations_3yr", false, TestFamily::kruskal, "Citations (3 years)"},
    {Indicator::pct_self_references, "pct_self_references", false, TestFamily::kruskal, "Self-references (%)"},
    {Indicator::pct_self_citations, "pct_self_citations", false, TestFamily::kruskal, "Self-citations (%)"},
    {Indicator::n_authors, "n_authors", false, TestFamily::kruskal, "Authors"},
    {Indicator::n_countries, "n_countries", false, TestFamily::kruskal, "Countries"},
    {Indicator::has_participants, "has_participants", true, TestFamily::chisq, "Articles with participants"},
    {Indicator::mentions_ethics, "mentions_ethics", true, TestFamily::chisq, "Mentions ethics (participant studies)"},
    {Indicator::mentions_consent, "mentions_consent", true, TestFamily::chisq, "Mentions consent (participant studies)"},
    {Indicator::has_any_test, "has_any_test", true, TestFamily::chisq, "Articles reporting APA statistics"},
    {Indicator::has_decision_error, "has_decision_error", true, TestFamily::chisq, "Decision errors (articles with statistics)"},
}};

inline const IndicatorInfo& info(Indicator i) { return kIndicators[static_cast<std::size_t>(i)]; }

inline std::optional<Indicator> indicator_from_name(std::string_view name) {
    for (const auto& i : kIndicators)
        if (i.name == name) return i.id;
    return std::nullopt;
}

/// Indicator value as a number (booleans as 0/1); nullopt when undefined.
inline std::optional<double> value_of(const IndicatorVector& v, Indicator i) {
    auto b = [](const std::optional<bool>& x) -> std::optional<double> {
        if (!x) return std::nullopt;
        return *x ? 1.0 : 0.0;
    };
    switch (i) {
    case Indicator::abstract_words: return v.abstract_words;
    case Indicator::fulltext_words: return v.fulltext_words;
    case Indicator::fre: return v.fre;
    case Indicator::title_spell_error: return b(v.title_spell_error);
    case Indicator::abstract_spell_error: return b(v.abstract_spell_error);
    case Indicator::n_references: return v.n_references;
    case Indicator::n_citations_total: return v.n_citations_total;
    case Indicator::n_citations_3yr: return v.n_citations_3yr;
    case Indicator::pct_self_references: return v.pct_self_references;
    case Indicator::pct_self_citations: return v.pct_self_citations;
    case Indicator::n_authors: return v.n_authors;
    case Indicator::n_countries: return v.n_countries;
    case Indicator::has_participants: return v.has_participants ? 1.0 : 0.0;
    case Indicator::mentions_ethics: return b(v.mentions_ethics);
    case Indicator::mentions_consent: return b(v.mentions_consent);
    case Indicator::has_any_test: return v.has_any_test ? 1.0 : 0.0;
    case Indicator::has_decision_error: return b(v.has_decision_error);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Computation
// ---------------------------------------------------------------------------

struct IndicatorConfig {
    std::shared_ptr<const SpellChecker> spell; // null: spelling indicators stay null
    SentenceSegmenter segmenter;
    MentionDetector mentions;
    StatcheckOptions statcheck;
    BiblioOptions biblio;
    unsigned threads = 0; // 0: hardware concurrency
};

struct ArticleWarning {
    std::string id;
    std::string message;
};

struct IndicatorSet {
    std::vector<IndicatorVector> vectors; // same order as the corpus
    std::vector<ArticleWarning> warnings;
};

inline IndicatorVector compute_article(const ArticleRecord& rec, const IndicatorConfig& cfg,
                                       std::vector<ArticleWarning>& warnings) {
    IndicatorVector v;
    v.id = rec.id;
    v.group = rec.group;

    const auto abstract_words = count_words(rec.abstract);
    const auto fulltext_words = count_words(rec.full_text);
    if (abstract_words > 0) v.abstract_words = static_cast<double>(abstract_words);
    if (fulltext_words > 0) v.fulltext_words = static_cast<double>(fulltext_words);
    if (fulltext_words > 0) {
        try {
            v.fre = flesch_reading_ease(rec.full_text, cfg.segmenter).fre;
        } catch (const Error& e) {
            warnings.push_back({rec.id, e.what()});
        }
    }

    if (cfg.spell) {
        if (!detail::trim(rec.title).empty())
            v.title_spell_error = !cfg.spell->scan(rec.title, TextField::title).empty();
        if (abstract_words > 0)
            v.abstract_spell_error = !cfg.spell->scan(rec.abstract, TextField::abstract).empty();
    }

    const auto b = biblio_indicators(rec, cfg.biblio);
    v.n_references = static_cast<double>(b.n_references);
    v.n_citations_total = static_cast<double>(b.n_citations_total);
    if (b.n_citations_3yr) v.n_citations_3yr = static_cast<double>(*b.n_citations_3yr);
    v.pct_self_references = b.pct_self_references;
    v.pct_self_citations = b.pct_self_citations;
    v.n_authors = static_cast<double>(b.n_authors);
    if (b.n_countries) v.n_countries = static_cast<double>(*b.n_countries);

    if (fulltext_words > 0) {
        const auto m = cfg.mentions.detect(rec.full_text);
        v.has_participants = m.has_participants;
        if (m.has_participants) {
            v.mentions_ethics = m.mentions_ethics;
            v.mentions_consent = m.mentions_consent;
        }
        const auto checked = check_text(rec.full_text, cfg.statcheck);
        for (const auto& c : checked)
            if (!c.verdict) warnings.push_back({rec.id, "unverifiable statistic '" + render(c.test) + "': " + c.error});
        const auto d = decision_error_summary(checked);
        v.has_any_test = d.has_any_test;
        if (d.has_any_test) v.has_decision_error = d.has_decision_error;
    }
    return v;
}

/// Computes indicator vectors for every record, in corpus order. Work is
/// spread over `cfg.threads` workers; output order and content do not
/// depend on the thread count.
inline IndicatorSet compute_indicators(const CorpusSet& corpus, const IndicatorConfig& cfg) {
    const auto& records = corpus.records();
    const std::size_t n = records.size();
    std::vector<IndicatorVector> vectors(n);
    std::vector<std::vector<ArticleWarning>> per_article(n);

    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < n; i += threads)
                    vectors[i] = compute_article(records[i], cfg, per_article[i]);
            });
    }
    IndicatorSet out;
    out.vectors = std::move(vectors);
    for (auto& w : per_article)
        for (auto& x : w) out.warnings.push_back(std::move(x));
    return out;
}

// ---------------------------------------------------------------------------
// Serialization (one JSON object per line)
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const IndicatorVector& v) {
    nlohmann::ordered_json j;
    j["id"] = v.id;
    j["group"] = v.group;
    for (const auto& i : kIndicators) {
        const auto x = value_of(v, i.id);
        if (!x)
            j[std::string(i.name)] = nullptr;
        else if (i.boolean)
            j[std::string(i.name)] = *x != 0.0;
        else
            j[std::string(i.name)] = *x;
    }
    return j;
}

inline IndicatorVector indicator_vector_from_json(const nlohmann::json& j) {
    IndicatorVector v;
    v.id = j.at("id").get<std::string>();
    v.group = j.at("group").get<std::string>();
    auto num = [&](const char* k) -> std::optional<double> {
        if (!j.contains(k) || j.at(k).is_null()) return std::nullopt;
        return j.at(k).get<double>();
    };
    auto flag = [&](const char* k) -> std::optional<bool> {
        if (!j.contains(k) || j.at(k).is_null()) return std::nullopt;
        return j.at(k).get<bool>();
    };
    v.abstract_words = num("abstract_words");
    v.fulltext_words = num("fulltext_words");
    v.fre = num("fre");
    v.title_spell_error = flag("title_spell_error");
    v.abstract_spell_error = flag("abstract_spell_error");
    v.n_references = num("n_references").value_or(0);
    v.n_citations_total = num("n_citations_total").value_or(0);
    v.n_citations_3yr = num("n_citations_3yr");
    v.pct_self_references = num("pct_self_references");
    v.pct_self_citations = num("pct_self_citations");
    v.n_authors = num("n_authors").value_or(0);
    v.n_countries = num("n_countries");
    v.has_participants = flag("has_participants").value_or(false);
    v.mentions_ethics = flag("mentions_ethics");
    v.mentions_consent = flag("mentions_consent");
    v.has_any_test = flag("has_any_test").value_or(false);
    v.has_decision_error = flag("has_decision_error");
    return v;
}

} // namespace artiq
