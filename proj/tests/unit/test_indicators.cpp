#include <gtest/gtest.h>

#include "artiq/indicators.hpp"
#include "test_support.hpp"

using namespace artiq;
using artiq::testing::make_record;

namespace {

IndicatorConfig config() {
    IndicatorConfig c;
    c.spell = std::make_shared<const SpellChecker>(WordSet{"a", "study", "of", "sleep", "we", "tested", "people"});
    c.threads = 1;
    return c;
}

CorpusSet three_articles() {
    auto a = make_record("a1", "A");
    a.abstract = "We tested people.";
    a.full_text = "Forty participants took part. Ethics approval was granted. Informed consent was obtained. "
                  "Groups differed, t(38) = 2.20, p = .03.";
    auto b = make_record("b1", "B");
    b.title = "A stduy of sleep";
    b.abstract = "We tested peeple.";
    b.full_text = "We analysed archival data. The effect was large, F(1, 20) = 1.00, p < .05.";
    auto c = make_record("a2", "A");
    return CorpusSet({"A", "B"}, {a, b, c});
}

bool same(const IndicatorVector& x, const IndicatorVector& y) { return to_json(x) == to_json(y); }

} // namespace

TEST(ComputeIndicators, EmptyFullText) {
    std::vector<ArticleWarning> w;
    const auto v = compute_article(make_record("x"), config(), w);
    EXPECT_FALSE(v.fre);
    EXPECT_FALSE(v.fulltext_words);
    EXPECT_FALSE(v.abstract_words);
    EXPECT_FALSE(v.abstract_spell_error);
    EXPECT_FALSE(v.mentions_ethics);
    EXPECT_FALSE(v.mentions_consent);
    EXPECT_FALSE(v.has_participants);
    EXPECT_FALSE(v.has_any_test);
    EXPECT_FALSE(v.has_decision_error);
    EXPECT_EQ(v.title_spell_error, false);
    EXPECT_TRUE(w.empty());
}

TEST(ComputeIndicators, ThreeArticlesInOrder) {
    const auto set = compute_indicators(three_articles(), config());
    ASSERT_EQ(set.vectors.size(), 3u);
    EXPECT_EQ(set.vectors[0].id, "a1");
    EXPECT_EQ(set.vectors[1].id, "b1");
    EXPECT_EQ(set.vectors[2].id, "a2");

    const auto& a = set.vectors[0];
    EXPECT_EQ(a.abstract_words, 3.0);
    EXPECT_EQ(a.abstract_spell_error, false);
    EXPECT_TRUE(a.has_participants);
    EXPECT_EQ(a.mentions_ethics, true);
    EXPECT_EQ(a.mentions_consent, true);
    EXPECT_TRUE(a.has_any_test);
    EXPECT_EQ(a.has_decision_error, false);
    EXPECT_TRUE(a.fre);

    const auto& b = set.vectors[1];
    EXPECT_EQ(b.title_spell_error, true);
    EXPECT_EQ(b.abstract_spell_error, true);
    EXPECT_FALSE(b.has_participants);
    EXPECT_FALSE(b.mentions_ethics);
    EXPECT_TRUE(b.has_any_test);
    EXPECT_EQ(b.has_decision_error, true);
}

TEST(ComputeIndicators, NoDictionaryLeavesSpellingNull) {
    IndicatorConfig c;
    const auto set = compute_indicators(three_articles(), c);
    for (const auto& v : set.vectors) {
        EXPECT_FALSE(v.title_spell_error);
        EXPECT_FALSE(v.abstract_spell_error);
    }
}

TEST(ComputeIndicators, ThreadCountDoesNotMatter) {
    std::vector<ArticleRecord> recs;
    for (int i = 0; i < 60; ++i) {
        auto r = make_record("r" + std::to_string(i), i % 2 ? "A" : "B", 2000 + i % 20);
        r.abstract = std::string(static_cast<std::size_t>(i % 7 + 1), 'x') + " words here";
        r.full_text = "Participants (n = " + std::to_string(i + 10) + ") were tested, t(" + std::to_string(i + 5) +
                      ") = 2." + std::to_string(i % 10) + ", p < .05.";
        r.citations = {{"c" + std::to_string(i), {}, 2000 + i % 20 + 1}};
        recs.push_back(r);
    }
    const CorpusSet corpus({"A", "B"}, recs);
    auto c = config();
    c.threads = 1;
    const auto one = compute_indicators(corpus, c);
    for (unsigned t : {2u, 3u, 8u, 64u}) {
        c.threads = t;
        const auto many = compute_indicators(corpus, c);
        ASSERT_EQ(many.vectors.size(), one.vectors.size());
        for (std::size_t i = 0; i < one.vectors.size(); ++i) EXPECT_TRUE(same(one.vectors[i], many.vectors[i])) << i;
        ASSERT_EQ(many.warnings.size(), one.warnings.size());
    }
}

TEST(ComputeIndicators, JsonRoundTrip) {
    const auto set = compute_indicators(three_articles(), config());
    for (const auto& v : set.vectors) {
        const auto back = indicator_vector_from_json(nlohmann::json::parse(to_json(v).dump()));
        EXPECT_TRUE(same(v, back));
        EXPECT_EQ(v.fre, back.fre);
    }
}

TEST(Indicators, RegistryIsConsistent) {
    for (std::size_t i = 0; i < kIndicators.size(); ++i) {
        EXPECT_EQ(static_cast<std::size_t>(kIndicators[i].id), i);
        EXPECT_EQ(indicator_from_name(kIndicators[i].name), kIndicators[i].id);
        EXPECT_EQ(kIndicators[i].boolean, kIndicators[i].family == TestFamily::chisq);
    }
    EXPECT_FALSE(indicator_from_name("nope"));
}
