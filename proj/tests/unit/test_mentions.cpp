#include <gtest/gtest.h>

#include "artiq/mentions.hpp"
#include "artiq/detail/strings.hpp"
#include "test_support.hpp"

using namespace artiq;

TEST(DetectParticipants, Examples) {
    EXPECT_TRUE(detect_participants("Fifty participants were recruited."));
    EXPECT_FALSE(detect_participants("We analysed archival records."));
    EXPECT_TRUE(detect_participants("Each participant gave consent."));
    EXPECT_TRUE(detect_participants("PARTICIPANTS"));
}

TEST(DetectEthics, Examples) {
    EXPECT_TRUE(detect_ethics("Participants were recruited. The study was approved by the institutional review board."));
    EXPECT_FALSE(detect_ethics("Participants were recruited from two schools."));
    EXPECT_FALSE(detect_ethics("The ethics committee approved the archival analysis."));
}

TEST(DetectEthics, EveryExpandedTermMatches) {
    for (const auto& term : default_ethics_terms()) {
        EXPECT_TRUE(detect_ethics("Participants. " + term + ".")) << term;
        EXPECT_FALSE(detect_ethics(term)) << term;
    }
}

TEST(DetectEthics, MisspellingAndCase) {
    EXPECT_TRUE(detect_ethics("All participants... Approved by the Ethics Commitee of X."));
    EXPECT_TRUE(detect_ethics("participant data; Committees on the Ethics of Research"));
    EXPECT_FALSE(detect_ethics("participants; ethic approval was waived")); // "ethic approval" is not a term
}

TEST(DetectConsent, Examples) {
    EXPECT_TRUE(detect_consent("participants provided informed consent"));
    EXPECT_TRUE(detect_consent("participants; the study was consented to by guardians"));
    EXPECT_FALSE(detect_consent("patients signed consent forms"));
}

TEST(DetectConsent, TermListIsCompleteAndRedundant) {
    EXPECT_EQ(default_consent_terms(), (std::vector<std::string>{"informed consent", "consented", "consent"}));
}

TEST(MentionDetector, FlagsImplyParticipants) {
    MentionDetector d;
    for (const char* text : {"ethics committee and informed consent", "participants and consent", "nothing",
                             "participants; review board"}) {
        const auto f = d.detect(text);
        if (f.mentions_ethics || f.mentions_consent) {
            EXPECT_TRUE(f.has_participants) << text;
        }
    }
}

TEST(MentionDetector, NegationsStillCount) {
    EXPECT_TRUE(detect_ethics("Participants were anonymous, so no ethics approval was required."));
}

TEST(MentionDetector, CustomTerms) {
    MentionDetector d({"irb"}, {"assent"});
    const auto f = d.detect("Participants gave assent; IRB approval obtained.");
    EXPECT_TRUE(f.mentions_ethics);
    EXPECT_TRUE(f.mentions_consent);
    EXPECT_FALSE(d.detect("Participants gave informed consent.").mentions_consent);
}

TEST(MentionDetector, ShippedTermFilesMatchDefaults) {
    EXPECT_EQ(detail::read_list_file(artiq::testing::data_file("ethics_terms.txt")), default_ethics_terms());
    EXPECT_EQ(detail::read_list_file(artiq::testing::data_file("consent_terms.txt")), default_consent_terms());
}
