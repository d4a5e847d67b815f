#include <gtest/gtest.h>

#include "artiq/biblio.hpp"
#include "test_support.hpp"

using namespace artiq;
using artiq::testing::make_record;

TEST(CountReferences, Examples) {
    auto r = make_record("1");
    EXPECT_EQ(count_references(r), 0u);
    for (int i = 0; i < 34; ++i) r.references.push_back({"w" + std::to_string(i), {}});
    EXPECT_EQ(count_references(r), 34u);
}

TEST(CitationsInWindow, Examples) {
    auto r = make_record("1", "A", 2018);
    EXPECT_EQ(citations_in_window(r), 0u);
    for (int y : {2018, 2019, 2020, 2021}) r.citations.push_back({"c" + std::to_string(y), {}, y});
    EXPECT_EQ(citations_in_window(r), 3u);
    auto same = make_record("2", "A", 2018);
    for (int i = 0; i < 5; ++i) same.citations.push_back({"c" + std::to_string(i), {}, 2018});
    EXPECT_EQ(citations_in_window(same), 5u);
}

TEST(CitationsInWindow, MonotoneInWindow) {
    auto r = make_record("1", "A", 2010);
    for (int y = 2010; y < 2024; ++y) r.citations.push_back({"c" + std::to_string(y), {}, y});
    std::size_t prev = 0;
    for (int w = 1; w < 20; ++w) {
        const auto c = citations_in_window(r, w);
        EXPECT_GE(c, prev);
        EXPECT_LE(c, r.citations.size());
        prev = c;
    }
}

TEST(SelfReferencePct, Examples) {
    auto r = make_record("1");
    r.authors = {{"A", std::nullopt}};
    EXPECT_FALSE(self_reference_pct(r));
    r.references = {{"w1", {"A", "B"}}, {"w2", {"C"}}, {"w3", {}}, {"w4", {"D"}}};
    EXPECT_DOUBLE_EQ(*self_reference_pct(r), 25.0);
    r.references[0].author_ids = {"B"};
    EXPECT_DOUBLE_EQ(*self_reference_pct(r), 0.0);
}

TEST(SelfCitationPct, Examples) {
    auto r = make_record("1");
    r.authors = {{"X", std::nullopt}, {"Y", std::nullopt}};
    EXPECT_FALSE(self_citation_pct(r));
    r.citations = {{"c1", {"X"}, 2016}, {"c2", {"Z"}, 2017}};
    EXPECT_DOUBLE_EQ(*self_citation_pct(r), 50.0);
}

TEST(SelfCitationPct, AddingOutsideCitationLowersShare) {
    auto r = make_record("1");
    r.authors = {{"X", std::nullopt}};
    r.citations = {{"c1", {"X"}, 2016}, {"c2", {"Q"}, 2017}};
    double prev = *self_citation_pct(r);
    for (int i = 0; i < 5; ++i) {
        r.citations.push_back({"n" + std::to_string(i), {"other"}, 2018});
        const double now = *self_citation_pct(r);
        EXPECT_LT(now, prev);
        prev = now;
    }
}

TEST(AuthorAndCountryCounts, Examples) {
    auto r = make_record("1");
    r.authors = {{"a", "DE"}, {"b", "DE"}, {"c", "US"}};
    auto c = author_and_country_counts(r);
    EXPECT_EQ(c.n_authors, 3u);
    EXPECT_EQ(c.n_countries.value_or(0), 2u);

    r.authors = {{"a", std::nullopt}};
    c = author_and_country_counts(r);
    EXPECT_EQ(c.n_authors, 1u);
    EXPECT_FALSE(c.n_countries);

    r.authors.clear();
    for (int i = 0; i < 5; ++i) r.authors.push_back({"u" + std::to_string(i), "US"});
    c = author_and_country_counts(r);
    EXPECT_EQ(c.n_authors, 5u);
    EXPECT_EQ(c.n_countries.value_or(0), 1u);
}

TEST(BiblioIndicators, CensusYearNullsOpenWindows) {
    auto r = make_record("1", "A", 2022);
    r.citations = {{"c", {}, 2023}};
    EXPECT_EQ(biblio_indicators(r).n_citations_3yr.value_or(99), 1u);
    EXPECT_FALSE(biblio_indicators(r, {3, 2023}).n_citations_3yr);
    EXPECT_TRUE(biblio_indicators(r, {3, 2024}).n_citations_3yr);
}

TEST(BiblioIndicators, WindowNeverExceedsTotal) {
    auto r = make_record("1", "A", 2015);
    for (int y = 2015; y < 2022; ++y) r.citations.push_back({"c" + std::to_string(y), {}, y});
    const auto b = biblio_indicators(r);
    EXPECT_LE(*b.n_citations_3yr, b.n_citations_total);
    EXPECT_EQ(b.n_citations_total, 7u);
}
