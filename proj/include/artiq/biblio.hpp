#pragma once

// Reference and citation indicators, self-reference/self-citation shares,
// and authorship size and internationality.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "artiq/corpus.hpp"

namespace artiq {

struct BiblioIndicators {
    std::size_t n_references = 0;
    std::size_t n_citations_total = 0;
    std::optional<std::size_t> n_citations_3yr;
    std::optional<double> pct_self_references;
    std::optional<double> pct_self_citations;
    std::size_t n_authors = 0;
    std::optional<std::size_t> n_countries;
};

inline std::size_t count_references(const ArticleRecord& record) { return record.references.size(); }

/// Citations received in the first `window_years` calendar years, counting
/// the publication year as the first.
inline std::size_t citations_in_window(const ArticleRecord& record, int window_years = 3) {
    const int last = record.pub_year + window_years - 1;
    return static_cast<std::size_t>(std::count_if(record.citations.begin(), record.citations.end(),
                                                  [&](const CitingWork& c) { return c.year <= last; }));
}

namespace detail {

inline std::unordered_set<std::string> author_set(const ArticleRecord& record) {
    std::unordered_set<std::string> ids;
    for (const auto& a : record.authors) ids.insert(a.author_id);
    return ids;
}

template <class Work>
std::optional<double> shared_author_pct(const std::vector<Work>& works,
                                        const std::unordered_set<std::string>& authors) {
    if (works.empty()) return std::nullopt;
    std::size_t shared = 0;
    for (const auto& w : works)
        if (std::any_of(w.author_ids.begin(), w.author_ids.end(),
                        [&](const std::string& id) { return authors.contains(id); }))
            ++shared;
    return 100.0 * static_cast<double>(shared) / static_cast<double>(works.size());
}

} // namespace detail

/// Percentage of references sharing at least one author id with the
/// article; nullopt without references.
inline std::optional<double> self_reference_pct(const ArticleRecord& record) {
    return detail::shared_author_pct(record.references, detail::author_set(record));
}

/// Percentage of citing works sharing at least one author id with the
/// article; nullopt for uncited articles.
inline std::optional<double> self_citation_pct(const ArticleRecord& record) {
    return detail::shared_author_pct(record.citations, detail::author_set(record));
}

struct AuthorshipCounts {
    std::size_t n_authors = 0;
    std::optional<std::size_t> n_countries;
};

inline AuthorshipCounts author_and_country_counts(const ArticleRecord& record) {
    std::set<std::string> countries;
    for (const auto& a : record.authors)
        if (a.country && !a.country->empty()) countries.insert(*a.country);
    AuthorshipCounts c;
    c.n_authors = record.authors.size();
    if (!countries.empty()) c.n_countries = countries.size();
    return c;
}

struct BiblioOptions {
    int window_years = 3;
    // When set, the windowed count is only defined for articles whose window
    // closed on or before this year.
    std::optional<int> census_year;
};

inline BiblioIndicators biblio_indicators(const ArticleRecord& record, const BiblioOptions& opts = {}) {
    BiblioIndicators b;
    b.n_references = count_references(record);
    b.n_citations_total = record.citations.size();
    if (!opts.census_year || record.pub_year + opts.window_years - 1 <= *opts.census_year)
        b.n_citations_3yr = citations_in_window(record, opts.window_years);
    b.pct_self_references = self_reference_pct(record);
    b.pct_self_citations = self_citation_pct(record);
    const auto counts = author_and_country_counts(record);
    b.n_authors = counts.n_authors;
    b.n_countries = counts.n_countries;
    return b;
}

} // namespace artiq
