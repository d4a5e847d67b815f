#pragma once

// Keyword protocol for participant studies and their ethics-approval and
// informed-consent statements. Matching is case-insensitive substring
// search over the whole document; a term only counts when the document
// also mentions "participant".

#include <string>
#include <string_view>
#include <vector>

#include "artiq/detail/strings.hpp"

namespace artiq {

inline constexpr std::string_view kParticipantTerm = "participant";

/// Ethics terms with every slash/parenthetical variant spelled out,
/// including the "commitee" misspelling.
inline std::vector<std::string> default_ethics_terms() {
    return {
        "review board",
        "ethic committee",
        "ethics committee",
        "ethical committee",
        "ethic commitee",
        "ethics commitee",
        "ethical commitee",
        "committee on ethics",
        "committees on ethics",
        "committee on the ethics",
        "committees on the ethics",
        "ethics commission",
        "ethics screening committee",
        "ethic board",
        "ethics board",
        "ethical clearance",
        "ethics statement",
        "ethical standards",
        "ethics standards",
        "ethical guidelines",
        "ethics guidelines",
        "ethical approval",
        "ethics approval",
    };
}

/// "consent" alone already covers the other two; they are kept so that the
/// list mirrors the protocol term for term.
inline std::vector<std::string> default_consent_terms() {
    return {"informed consent", "consented", "consent"};
}

struct MentionFlags {
    bool has_participants = false;
    bool mentions_ethics = false;
    bool mentions_consent = false;
};

namespace detail {

inline bool contains_any(const std::string& lower_text, const std::vector<std::string>& lower_terms) {
    for (const auto& t : lower_terms)
        if (lower_text.find(t) != std::string::npos) return true;
    return false;
}

} // namespace detail

class MentionDetector {
public:
    MentionDetector() : MentionDetector(default_ethics_terms(), default_consent_terms()) {}

    MentionDetector(std::vector<std::string> ethics_terms, std::vector<std::string> consent_terms) {
        for (auto& t : ethics_terms) ethics_.push_back(detail::lowercase(t));
        for (auto& t : consent_terms) consent_.push_back(detail::lowercase(t));
    }

    MentionFlags detect(std::string_view text) const {
        const auto lower = detail::lowercase(text);
        MentionFlags f;
        f.has_participants = lower.find(kParticipantTerm) != std::string::npos;
        if (f.has_participants) {
            f.mentions_ethics = detail::contains_any(lower, ethics_);
            f.mentions_consent = detail::contains_any(lower, consent_);
        }
        return f;
    }

    const std::vector<std::string>& ethics_terms() const noexcept { return ethics_; }
    const std::vector<std::string>& consent_terms() const noexcept { return consent_; }

private:
    std::vector<std::string> ethics_;
    std::vector<std::string> consent_;
};

inline bool detect_participants(std::string_view text) {
    return detail::lowercase(text).find(kParticipantTerm) != std::string::npos;
}

inline bool detect_ethics(std::string_view text) {
    static const MentionDetector detector;
    return detector.detect(text).mentions_ethics;
}

inline bool detect_consent(std::string_view text) {
    static const MentionDetector detector;
    return detector.detect(text).mentions_consent;
}

} // namespace artiq
