#pragma once

// Extraction of APA-style test statistics from running text, p-value
// recomputation, and consistency / decision-error classification.
//
// Recognized shapes (case-insensitive, flexible spacing):
//   t(df) = v, p <op> q
//   F(df1, df2) = v, p <op> q
//   chi2(df[, N = n]) = v, p <op> q     (also χ2, χ², X2, chi-square)
//   r(df) = v, p <op> q
//   z = v, p <op> q
// where <op> is one of = < > (≤ and ≥ are read as < and >), numbers may use
// thousands separators, and the separator before p may be ',' or ';'.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "artiq/corpus.hpp"
#include "artiq/detail/strings.hpp"
#include "artiq/distributions.hpp"
#include "artiq/error.hpp"

namespace artiq {

enum class TestKind { t, F, chi2, r, z };
enum class Comparator { eq, lt, gt };
enum class Tails { two, one };

inline const char* to_string(TestKind k) noexcept {
    switch (k) {
    case TestKind::t: return "t";
    case TestKind::F: return "F";
    case TestKind::chi2: return "chi2";
    case TestKind::r: return "r";
    case TestKind::z: return "z";
    }
    return "?";
}

inline const char* to_string(Comparator c) noexcept {
    switch (c) {
    case Comparator::eq: return "=";
    case Comparator::lt: return "<";
    case Comparator::gt: return ">";
    }
    return "?";
}

struct SourceSpan {
    std::size_t begin = 0; // byte offsets into the original text
    std::size_t end = 0;
};

struct ReportedTest {
    TestKind kind = TestKind::t;
    double df1 = 0;                // t, r, chi2: df; F: numerator df; unused for z
    std::optional<double> df2;     // F denominator df
    std::optional<long long> n;    // chi2 sample size
    double value = 0;
    int value_decimals = 0;
    Comparator comparator = Comparator::eq;
    double p_reported = 0;
    int p_decimals = 0;
    SourceSpan span;

    /// Same claim, ignoring where it was found.
    bool same_claim(const ReportedTest& o) const {
        return kind == o.kind && df1 == o.df1 && df2 == o.df2 && n == o.n && value == o.value &&
               value_decimals == o.value_decimals && comparator == o.comparator &&
               p_reported == o.p_reported && p_decimals == o.p_decimals;
    }
};

enum class Status { consistent, inconsistency, decision_error };

inline const char* to_string(Status s) noexcept {
    switch (s) {
    case Status::consistent: return "consistent";
    case Status::inconsistency: return "inconsistency";
    case Status::decision_error: return "decision_error";
    }
    return "?";
}

struct ConsistencyVerdict {
    double p_recomputed = 0;
    Status status = Status::consistent;
    bool degenerate = false; // reported as "p < 0", "p < .00", ...
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

// Lowercased ASCII stream with Unicode variants folded, plus the original
// byte offset of every normalized byte.
struct NormalizedText {
    std::string text;
    std::vector<std::size_t> origin; // size text.size() + 1
};

inline NormalizedText normalize_stats_text(std::string_view in) {
    struct Fold {
        std::string_view from;
        std::string_view to;
    };
    static constexpr Fold folds[] = {
        {"χ", "chi"}, {"Χ", "chi"}, {"²", "2"},  {"−", "-"},
        {"–", "-"},   {"≤", "<"},   {"≥", ">"},  {"\xC2\xA0", " "},
        {"\xE2\x80\x89", " "}, {"\xE2\x80\xAF", " "},
    };
    NormalizedText out;
    out.text.reserve(in.size());
    out.origin.reserve(in.size() + 1);
    std::size_t i = 0;
    while (i < in.size()) {
        bool folded = false;
        if (static_cast<unsigned char>(in[i]) >= 0x80) {
            for (const auto& f : folds) {
                if (in.substr(i).starts_with(f.from)) {
                    for (char c : f.to) {
                        out.text.push_back(c);
                        out.origin.push_back(i);
                    }
                    i += f.from.size();
                    folded = true;
                    break;
                }
            }
        }
        if (folded) continue;
        out.text.push_back(to_lower(in[i]));
        out.origin.push_back(i);
        ++i;
    }
    out.origin.push_back(in.size());
    return out;
}

struct ParsedNumber {
    double value = 0;
    int decimals = 0;
};

class Cursor {
public:
    Cursor(std::string_view s, std::size_t pos) : s_(s), pos_(pos) {}

    std::size_t pos() const noexcept { return pos_; }
    bool done() const noexcept { return pos_ >= s_.size(); }
    char peek() const noexcept { return done() ? '\0' : s_[pos_]; }

    void skip_ws() {
        while (!done() && is_space(s_[pos_])) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    bool eat_word(std::string_view w) {
        if (s_.substr(pos_).starts_with(w)) {
            pos_ += w.size();
            return true;
        }
        return false;
    }

    // Unsigned number: digits with optional fraction, or a bare fraction
    // ".04". With `thousands`, comma groups of exactly three digits are
    // accepted in the integer part.
    std::optional<ParsedNumber> number(bool thousands) {
        skip_ws();
        const std::size_t start = pos_;
        std::string digits;
        while (!done() && is_ascii_digit(peek())) digits.push_back(s_[pos_++]);
        if (thousands && !digits.empty() && digits.size() <= 3) {
            while (peek() == ',' && pos_ + 3 < s_.size()) {
                const auto group = s_.substr(pos_ + 1, 3);
                if (!is_ascii_digit(group[0]) || !is_ascii_digit(group[1]) || !is_ascii_digit(group[2]))
                    break;
                if (pos_ + 4 < s_.size() && is_ascii_digit(s_[pos_ + 4])) break;
                digits.append(group);
                pos_ += 4;
            }
        }
        int decimals = 0;
        if (peek() == '.' && pos_ + 1 < s_.size() && is_ascii_digit(s_[pos_ + 1])) {
            digits.push_back('.');
            ++pos_;
            while (!done() && is_ascii_digit(peek())) {
                digits.push_back(s_[pos_++]);
                ++decimals;
            }
        }
        if (digits.empty() || digits == ".") {
            pos_ = start;
            return std::nullopt;
        }
        ParsedNumber n;
        n.decimals = decimals;
        const std::string text = digits.front() == '.' ? "0" + digits : digits;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n.value);
        if (ec != std::errc{}) {
            pos_ = start;
            return std::nullopt;
        }
        return n;
    }

    std::optional<ParsedNumber> signed_number(bool thousands) {
        skip_ws();
        bool negative = false;
        if (peek() == '-') {
            negative = true;
            ++pos_;
        } else if (peek() == '+') {
            ++pos_;
        }
        auto n = number(thousands);
        if (n && negative) n->value = -n->value;
        return n;
    }

private:
    std::string_view s_;
    std::size_t pos_;
};

inline bool is_word_char(char c) noexcept { return is_ascii_alpha(c) || is_ascii_digit(c); }

// Attempts to parse one statistic starting exactly at `start` of the
// normalized text; returns the test and the end position.
inline std::optional<std::pair<ReportedTest, std::size_t>> parse_statistic_at(std::string_view s,
                                                                                std::size_t start) {
    Cursor c(s, start);
    ReportedTest t;

    if (c.eat_word("chi-square") || c.eat_word("chi square") || c.eat_word("chi2") ||
        c.eat_word("chi 2") || c.eat_word("x2")) {
        t.kind = TestKind::chi2;
    } else if (c.eat_word("t")) {
        t.kind = TestKind::t;
    } else if (c.eat_word("f")) {
        t.kind = TestKind::F;
    } else if (c.eat_word("r")) {
        t.kind = TestKind::r;
    } else if (c.eat_word("z")) {
        t.kind = TestKind::z;
    } else {
        return std::nullopt;
    }
    if (!c.done() && is_word_char(c.peek())) return std::nullopt;

    if (t.kind != TestKind::z) {
        if (!c.eat('(')) return std::nullopt;
        auto df = c.number(t.kind != TestKind::F);
        if (!df) return std::nullopt;
        t.df1 = df->value;
        if (t.kind == TestKind::F) {
            if (!c.eat(',')) return std::nullopt;
            auto df2 = c.number(true);
            if (!df2) return std::nullopt;
            t.df2 = df2->value;
        } else if (t.kind == TestKind::chi2) {
            Cursor save = c;
            if (c.eat(',')) {
                c.skip_ws();
                if (c.eat_word("n") && c.eat('=')) {
                    auto n = c.number(true);
                    if (!n || n->decimals != 0) return std::nullopt;
                    t.n = static_cast<long long>(n->value);
                } else {
                    c = save;
                }
            }
        }
        if (!c.eat(')')) return std::nullopt;
    }
    if (!c.eat('=')) return std::nullopt;
    auto v = c.signed_number(true);
    if (!v) return std::nullopt;
    t.value = v->value;
    t.value_decimals = v->decimals;

    if (!c.eat(',') && !c.eat(';')) return std::nullopt;
    c.skip_ws();
    if (!c.eat_word("p")) return std::nullopt;
    c.skip_ws();
    switch (c.peek()) {
    case '=': t.comparator = Comparator::eq; break;
    case '<': t.comparator = Comparator::lt; break;
    case '>': t.comparator = Comparator::gt; break;
    default: return std::nullopt;
    }
    c.eat(c.peek());
    auto p = c.number(false);
    if (!p || p->value > 1.0) return std::nullopt;
    t.p_reported = p->value;
    t.p_decimals = p->decimals;
    return std::make_pair(t, c.pos());
}

} // namespace detail

/// All APA statistics in `text`, in order of appearance. Fragments that do
/// not fit the grammar are skipped.
inline std::vector<ReportedTest> extract_apa_statistics(std::string_view text) {
    const auto norm = detail::normalize_stats_text(text);
    const std::string_view s = norm.text;
    std::vector<ReportedTest> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char ch = s[i];
        const bool boundary = i == 0 || !detail::is_word_char(s[i - 1]);
        if (boundary && (ch == 't' || ch == 'f' || ch == 'r' || ch == 'z' || ch == 'c' || ch == 'x')) {
            if (auto hit = detail::parse_statistic_at(s, i)) {
                auto [test, end] = *hit;
                test.span = {norm.origin[i], norm.origin[end]};
                out.push_back(test);
                i = end;
                continue;
            }
        }
        ++i;
    }
    return out;
}

namespace detail {

inline std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

} // namespace detail

/// Canonical APA rendering; extract_apa_statistics(render(t)) yields a test
/// with the same claim.
inline std::string render(const ReportedTest& t) {
    std::string s;
    switch (t.kind) {
    case TestKind::t: s = "t(" + detail::shortest(t.df1) + ")"; break;
    case TestKind::r: s = "r(" + detail::shortest(t.df1) + ")"; break;
    case TestKind::F:
        s = "F(" + detail::shortest(t.df1) + ", " + detail::shortest(t.df2.value_or(0)) + ")";
        break;
    case TestKind::chi2:
        s = "χ2(" + detail::shortest(t.df1);
        if (t.n) s += ", N = " + std::to_string(*t.n);
        s += ")";
        break;
    case TestKind::z: s = "z"; break;
    }
    s += " = " + detail::fixed(t.value, t.value_decimals);
    s += ", p ";
    s += to_string(t.comparator);
    s += " ";
    auto p = detail::fixed(t.p_reported, t.p_decimals);
    if (p.starts_with("0.")) p.erase(0, 1);
    s += p;
    return s;
}

// ---------------------------------------------------------------------------
// Recomputation and classification
// ---------------------------------------------------------------------------

/// t statistic equivalent to a correlation r with df degrees of freedom.
inline double r_to_t(double r, double df) { return r * std::sqrt(df / (1.0 - r * r)); }

/// Recomputes the p-value implied by the reported statistic and dfs.
/// Throws InvalidTestError for df <= 0 or |r| >= 1.
inline double recompute_p(const ReportedTest& t, Tails tails = Tails::two) {
    auto need_df = [&](double df) {
        if (!(df > 0)) throw InvalidTestError("degrees of freedom must be positive");
    };
    double two_sided = 0;
    switch (t.kind) {
    case TestKind::t:
        need_df(t.df1);
        two_sided = 2.0 * dist::student_t_tail(t.value, t.df1);
        break;
    case TestKind::r:
        need_df(t.df1);
        if (!(std::fabs(t.value) < 1.0)) throw InvalidTestError("|r| must be below 1");
        two_sided = 2.0 * dist::student_t_tail(r_to_t(t.value, t.df1), t.df1);
        break;
    case TestKind::z: two_sided = 2.0 * dist::normal_sf(std::fabs(t.value)); break;
    case TestKind::F:
        need_df(t.df1);
        if (!t.df2) throw InvalidTestError("F test needs two degrees of freedom");
        need_df(*t.df2);
        return std::clamp(dist::f_sf(t.value, t.df1, *t.df2), 0.0, 1.0);
    case TestKind::chi2:
        need_df(t.df1);
        return std::clamp(dist::chi2_sf(t.value, t.df1), 0.0, 1.0);
    }
    const double p = tails == Tails::one ? two_sided / 2.0 : two_sided;
    return std::clamp(p, 0.0, 1.0);
}

/// Whether the reported p-value claims significance at `alpha`.
inline bool claims_significance(const ReportedTest& t, double alpha) {
    switch (t.comparator) {
    case Comparator::lt: return t.p_reported <= alpha;
    case Comparator::eq: return t.p_reported < alpha;
    case Comparator::gt: return false;
    }
    return false;
}

/// Classifies a reported test against an already recomputed p-value.
///
/// `p = q` reported to d decimals is consistent when the recomputed value
/// rounds to q, i.e. lies in [q - 0.5e-d, q + 0.5e-d). `p < q` and `p > q`
/// must hold literally, except `p < 0` / `p < .00` which is read as a
/// rounded-to-zero claim. An inconsistency becomes a decision error when
/// the claimed and recomputed significance at `alpha` differ.
inline ConsistencyVerdict classify_with(const ReportedTest& t, double p_recomputed, double alpha = 0.05) {
    ConsistencyVerdict v;
    v.p_recomputed = p_recomputed;
    bool consistent = false;
    const double scale = std::pow(10.0, t.p_decimals);
    switch (t.comparator) {
    case Comparator::eq: {
        const double units = std::round(t.p_reported * scale);
        consistent = p_recomputed >= (units - 0.5) / scale && p_recomputed < (units + 0.5) / scale;
        break;
    }
    case Comparator::lt:
        if (t.p_reported == 0.0) {
            v.degenerate = true;
            consistent = p_recomputed < 0.5 / scale;
        } else {
            consistent = p_recomputed < t.p_reported;
        }
        break;
    case Comparator::gt: consistent = p_recomputed > t.p_reported; break;
    }
    if (consistent) {
        v.status = Status::consistent;
    } else if (claims_significance(t, alpha) != (p_recomputed < alpha)) {
        v.status = Status::decision_error;
    } else {
        v.status = Status::inconsistency;
    }
    return v;
}

inline ConsistencyVerdict classify_consistency(const ReportedTest& t, double alpha = 0.05,
                                               Tails tails = Tails::two) {
    return classify_with(t, recompute_p(t, tails), alpha);
}

struct StatcheckOptions {
    double alpha = 0.05;
    Tails tails = Tails::two;
};

/// One extracted statistic with its verdict, or the reason it could not be
/// checked.
struct CheckedTest {
    ReportedTest test;
    std::optional<ConsistencyVerdict> verdict;
    std::string error;
};

inline std::vector<CheckedTest> check_text(std::string_view text, const StatcheckOptions& opts = {}) {
    std::vector<CheckedTest> out;
    for (const auto& t : extract_apa_statistics(text)) {
        CheckedTest c{t, std::nullopt, {}};
        try {
            c.verdict = classify_consistency(t, opts.alpha, opts.tails);
        } catch (const InvalidTestError& e) {
            c.error = e.what();
        }
        out.push_back(std::move(c));
    }
    return out;
}

struct ArticleDecision {
    bool has_any_test = false;
    bool has_decision_error = false;
};

inline ArticleDecision decision_error_summary(const std::vector<CheckedTest>& checked) {
    ArticleDecision d;
    d.has_any_test = !checked.empty();
    for (const auto& c : checked)
        if (c.verdict && c.verdict->status == Status::decision_error) d.has_decision_error = true;
    return d;
}

inline ArticleDecision article_decision_error(const ArticleRecord& record, const StatcheckOptions& opts = {}) {
    return decision_error_summary(check_text(record.full_text, opts));
}

inline nlohmann::ordered_json to_json(const CheckedTest& c) {
    nlohmann::ordered_json j;
    const auto& t = c.test;
    j["kind"] = to_string(t.kind);
    j["df1"] = t.kind == TestKind::z ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(t.df1);
    j["df2"] = t.df2 ? nlohmann::ordered_json(*t.df2) : nlohmann::ordered_json(nullptr);
    j["n"] = t.n ? nlohmann::ordered_json(*t.n) : nlohmann::ordered_json(nullptr);
    j["value"] = t.value;
    j["comparator"] = to_string(t.comparator);
    j["p_reported"] = t.p_reported;
    j["span"] = {t.span.begin, t.span.end};
    j["text"] = render(t);
    if (c.verdict) {
        j["p_recomputed"] = c.verdict->p_recomputed;
        j["status"] = to_string(c.verdict->status);
        j["degenerate"] = c.verdict->degenerate;
    } else {
        j["p_recomputed"] = nullptr;
        j["status"] = "invalid";
        j["error"] = c.error;
    }
    return j;
}

} // namespace artiq
