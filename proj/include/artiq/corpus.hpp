#pragma once

// Shared data model: articles, their authorship and citation metadata,
// and the grouped corpus that the rest of the pipeline consumes.

#include <algorithm>
#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace artiq {

inline constexpr int kMinPubYear = 1900;

struct AuthorRef {
    std::string author_id;
    std::optional<std::string> country; // ISO-3166 alpha-2

    friend bool operator==(const AuthorRef&, const AuthorRef&) = default;
};

struct WorkRef {
    std::string work_id;
    std::vector<std::string> author_ids;

    friend bool operator==(const WorkRef&, const WorkRef&) = default;
};

struct CitingWork {
    std::string work_id;
    std::vector<std::string> author_ids;
    int year = 0;

    friend bool operator==(const CitingWork&, const CitingWork&) = default;
};

struct ArticleRecord {
    std::string id;
    std::optional<std::string> doi;
    std::string group;
    std::string title;
    std::string abstract;
    std::string full_text; // body and end matter, without the reference list
    int pub_year = 0;
    std::vector<AuthorRef> authors;
    std::vector<WorkRef> references;
    std::vector<CitingWork> citations;

    friend bool operator==(const ArticleRecord&, const ArticleRecord&) = default;
};

struct Violation {
    std::string field;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

inline int current_year() {
    const auto now = std::chrono::system_clock::now();
    const std::chrono::year_month_day ymd{std::chrono::floor<std::chrono::days>(now)};
    return static_cast<int>(ymd.year());
}

/// Lists every invariant violation of `record`. `groups` are the labels
/// declared for the corpus; an empty list skips the group check.
inline ValidationReport validate_record(const ArticleRecord& record,
                                        const std::vector<std::string>& groups,
                                        int max_year = current_year()) {
    ValidationReport report;
    if (record.id.empty())
        report.push_back({"id", "id empty"});
    if (record.pub_year < kMinPubYear || record.pub_year > max_year)
        report.push_back({"pub_year", "pub_year out of range"});
    if (!groups.empty() &&
        std::find(groups.begin(), groups.end(), record.group) == groups.end())
        report.push_back({"group", "unknown group"});
    for (const auto& a : record.authors)
        if (a.author_id.empty())
            report.push_back({"authors", "author_id empty"});
    for (const auto& r : record.references)
        if (r.work_id.empty())
            report.push_back({"references", "work_id empty"});
    for (const auto& c : record.citations) {
        if (c.work_id.empty())
            report.push_back({"citations", "work_id empty"});
        if (c.year < kMinPubYear)
            report.push_back({"citations", "citation year before 1900"});
    }
    return report;
}

/// A validated collection of articles partitioned into named groups.
///
/// Construction checks the cross-record invariants (known group labels,
/// unique ids). At least two groups are needed to compare anything, but
/// that is checked by the comparison stage so that empty or single-group
/// corpora can still be loaded and inspected.
class CorpusSet {
public:
    CorpusSet() = default;

    CorpusSet(std::vector<std::string> groups, std::vector<ArticleRecord> records)
        : groups_(std::move(groups)), records_(std::move(records)) {
        std::unordered_set<std::string> labels(groups_.begin(), groups_.end());
        if (labels.size() != groups_.size())
            throw std::invalid_argument("duplicate group label");
        std::unordered_set<std::string> ids;
        for (const auto& r : records_) {
            if (!labels.contains(r.group))
                throw std::invalid_argument("record '" + r.id + "' has unknown group '" +
                                            r.group + "'");
            if (!ids.insert(r.id).second)
                throw std::invalid_argument("duplicate record id '" + r.id + "'");
        }
    }

    const std::vector<std::string>& groups() const noexcept { return groups_; }
    const std::vector<ArticleRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    std::size_t group_size(const std::string& label) const {
        return static_cast<std::size_t>(std::count_if(
            records_.begin(), records_.end(),
            [&](const ArticleRecord& r) { return r.group == label; }));
    }

private:
    std::vector<std::string> groups_;
    std::vector<ArticleRecord> records_;
};

} // namespace artiq
