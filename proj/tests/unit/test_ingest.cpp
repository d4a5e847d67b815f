#include <fstream>

#include <gtest/gtest.h>

#include "artiq/ingest.hpp"
#include "test_support.hpp"

using namespace artiq;
using artiq::testing::make_record;
using artiq::testing::TempDir;

namespace {

std::string line(const std::string& id, const std::string& group, const std::string& title = "Sleep study",
                 int year = 2015) {
    nlohmann::json j = {{"id", id},           {"doi", nullptr},     {"group", group},
                        {"title", title},     {"abstract", "Text."}, {"full_text", "Body."},
                        {"pub_year", year},   {"authors", nlohmann::json::array()},
                        {"references", nlohmann::json::array()}, {"citations", nlohmann::json::array()}};
    return j.dump();
}

} // namespace

TEST(LoadCorpus, ThreeValidLines) {
    const auto res = parse_corpus(line("1", "A") + "\n" + line("2", "B") + "\n" + line("3", "A") + "\n", {});
    EXPECT_EQ(res.corpus.size(), 3u);
    EXPECT_TRUE(res.line_errors.empty());
    EXPECT_EQ(res.corpus.groups(), (std::vector<std::string>{"A", "B"}));
}

TEST(LoadCorpus, MalformedLineIsReportedAndSkipped) {
    const auto res = parse_corpus(line("1", "A") + "\n{not json\n" + line("2", "B") + "\n", {});
    EXPECT_EQ(res.corpus.size(), 2u);
    ASSERT_EQ(res.line_errors.size(), 1u);
    EXPECT_EQ(res.line_errors[0].line, 2u);
}

TEST(LoadCorpus, MissingFieldIsALineError) {
    const auto res = parse_corpus(R"({"id": "1", "group": "A"})", {});
    EXPECT_EQ(res.corpus.size(), 0u);
    EXPECT_EQ(res.line_errors.size(), 1u);
}

TEST(LoadCorpus, EmptyFile) {
    TempDir dir;
    const auto path = (dir / "empty.jsonl").string();
    std::ofstream(path).close();
    const auto res = load_corpus(path, {});
    EXPECT_EQ(res.corpus.size(), 0u);
    EXPECT_TRUE(res.line_errors.empty());
    EXPECT_TRUE(res.dropped.empty());
}

TEST(LoadCorpus, UnreadableFileThrows) { EXPECT_THROW(load_corpus("/nonexistent/corpus.jsonl", {}), IoError); }

TEST(LoadCorpus, InvalidRecordsAreDroppedWithViolations) {
    const auto text = line("1", "A") + "\n" + line("2", "C") + "\n" + line("3", "A", "t", 1492) + "\n" +
                      line("1", "B") + "\n";
    const auto res = parse_corpus(text, {"A", "B"}, 2024);
    EXPECT_EQ(res.corpus.size(), 1u);
    ASSERT_EQ(res.dropped.size(), 3u);
    EXPECT_EQ(res.dropped[0].violations[0].message, "unknown group");
    EXPECT_EQ(res.dropped[1].violations[0].message, "pub_year out of range");
    EXPECT_EQ(res.dropped[2].violations[0].message, "duplicate id");
}

TEST(LoadCorpus, UnknownFieldsIgnoredAndNullTextsEmpty) {
    auto j = nlohmann::json::parse(line("1", "A"));
    j["extra"] = 42;
    j["abstract"] = nullptr;
    const auto res = parse_corpus(j.dump(), {});
    ASSERT_EQ(res.corpus.size(), 1u);
    EXPECT_EQ(res.corpus.records()[0].abstract, "");
}

TEST(LoadCorpus, JsonRoundTrip) {
    auto r = make_record("x");
    r.doi = "10.1/abc";
    r.authors = {{"a1", "DE"}, {"a2", std::nullopt}};
    r.references = {{"w1", {"a1", "a3"}}};
    r.citations = {{"c1", {"a9"}, 2017}};
    const auto back = record_from_json(nlohmann::json::parse(to_json(r).dump()));
    EXPECT_EQ(to_json(back).dump(), to_json(r).dump());
}

TEST(FilterNonResearch, PaperExamples) {
    std::vector<ArticleRecord> recs = {make_record("1"), make_record("2"), make_record("3")};
    recs[0].title = "Editorial: welcome to volume 12";
    recs[1].title = "Book Review of Cognitive Therapy";
    recs[2].title = "Anxiety and sleep quality in adolescents";
    const auto res = filter_non_research(recs, default_exclusion_rules());
    ASSERT_EQ(res.excluded.size(), 2u);
    EXPECT_EQ(res.excluded[0].reason, "editorial");
    EXPECT_EQ(res.excluded[1].reason, "book review");
    ASSERT_EQ(res.kept.size(), 1u);
    EXPECT_EQ(res.kept[0].id, "3");
}

TEST(FilterNonResearch, DefaultRulesAreTheSixKeywords) {
    std::vector<std::string> kw;
    for (const auto& r : default_exclusion_rules()) kw.push_back(r.keyword);
    EXPECT_EQ(kw, (std::vector<std::string>{"editorial", "book review", "letter to the editor",
                                            "letter from the editor", "correction", "opinion"}));
}

TEST(FilterNonResearch, PartitionIdempotentAndOrderPreserving) {
    std::vector<ArticleRecord> recs;
    const char* titles[] = {"Letter to the Editor", "Effects of noise", "CORRECTION to table 2", "Sleep and mood",
                            "An opinion on methods", "Working memory"};
    for (int i = 0; i < 6; ++i) {
        recs.push_back(make_record(std::to_string(i)));
        recs.back().title = titles[i];
    }
    const auto res = filter_non_research(recs, default_exclusion_rules());
    EXPECT_EQ(res.kept.size() + res.excluded.size(), recs.size());
    std::vector<std::string> kept_ids;
    for (const auto& r : res.kept) kept_ids.push_back(r.id);
    EXPECT_EQ(kept_ids, (std::vector<std::string>{"1", "3", "5"}));
    const auto again = filter_non_research(res.kept, default_exclusion_rules());
    EXPECT_TRUE(again.excluded.empty());
    EXPECT_EQ(again.kept.size(), res.kept.size());
}

TEST(FilterNonResearch, ExtraRulesFromFile) {
    TempDir dir;
    const auto path = (dir / "rules.txt").string();
    std::ofstream(path) << "# extra\nErratum\n\nobituary\n";
    const auto rules = load_exclusion_rules(path);
    ASSERT_EQ(rules.size(), 2u);
    EXPECT_EQ(rules[0].keyword, "erratum");
    auto r = make_record("1");
    r.title = "ERRATUM: dosage";
    EXPECT_EQ(filter_non_research({r}, rules).excluded.size(), 1u);
    EXPECT_THROW(filter_non_research({r}, {{""}}), std::invalid_argument);
}

TEST(FilterLanguage, ClassifierHook) {
    std::vector<ArticleRecord> recs = {make_record("1"), make_record("2")};
    recs[0].title = "The effect of sleep on memory";
    recs[1].title = "Der Einfluss von Schlaf auf das Gedächtnis";
    const auto res = filter_language(recs, ascii_english_title);
    ASSERT_EQ(res.kept.size(), 1u);
    EXPECT_EQ(res.kept[0].id, "1");
    ASSERT_EQ(res.excluded.size(), 1u);
    EXPECT_EQ(res.excluded[0].reason, "language");
    EXPECT_EQ(filter_language(recs, {}).kept.size(), 2u);
}
