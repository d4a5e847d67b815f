#pragma once

// Group summaries, indicator-to-test routing, and report / plot-data
// emission (JSON, CSV, Markdown, SVG).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "artiq/error.hpp"
#include "artiq/indicators.hpp"
#include "artiq/inferstats.hpp"

namespace artiq {

inline constexpr const char* kReportSchemaVersion = "1.0";

// ---------------------------------------------------------------------------
// Summaries
// ---------------------------------------------------------------------------

/// Five-number summary plus mean. Quartiles use linear interpolation
/// between order statistics (R type 7).
struct FiveNumber {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0;
};

inline double quantile_sorted(const std::vector<double>& sorted, double prob) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline FiveNumber five_number(std::vector<double> values) {
    if (values.empty()) throw UndefinedError("summary of an empty sample");
    std::sort(values.begin(), values.end());
    FiveNumber f;
    f.min = values.front();
    f.max = values.back();
    f.q1 = quantile_sorted(values, 0.25);
    f.median = quantile_sorted(values, 0.5);
    f.q3 = quantile_sorted(values, 0.75);
    double s = 0;
    for (double v : values) s += v;
    f.mean = s / static_cast<double>(values.size());
    return f;
}

struct IndicatorSummary {
    Indicator indicator{};
    std::size_t n = 0;                // non-null values
    std::optional<FiveNumber> stats;  // absent when n == 0
    std::optional<std::size_t> successes; // booleans only
    std::optional<double> proportion;     // booleans only, n > 0
};

struct GroupSummary {
    std::string group;
    std::size_t size = 0; // articles in the group
    std::vector<IndicatorSummary> indicators; // kIndicators order
};

/// Non-null values of one indicator, split by group label order.
inline std::vector<Sample> values_by_group(const std::vector<IndicatorVector>& vectors,
                                           const std::vector<std::string>& groups, Indicator ind) {
    std::vector<Sample> out(groups.size());
    for (const auto& v : vectors) {
        const auto it = std::find(groups.begin(), groups.end(), v.group);
        if (it == groups.end()) continue;
        if (auto x = value_of(v, ind)) out[static_cast<std::size_t>(it - groups.begin())].push_back(*x);
    }
    return out;
}

inline std::vector<GroupSummary> summarize(const std::vector<IndicatorVector>& vectors,
                                           const std::vector<std::string>& groups) {
    std::vector<GroupSummary> out;
    for (const auto& g : groups) {
        GroupSummary s;
        s.group = g;
        s.size = static_cast<std::size_t>(
            std::count_if(vectors.begin(), vectors.end(), [&](const auto& v) { return v.group == g; }));
        out.push_back(std::move(s));
    }
    for (const auto& info : kIndicators) {
        const auto samples = values_by_group(vectors, groups, info.id);
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            IndicatorSummary is;
            is.indicator = info.id;
            is.n = samples[gi].size();
            if (is.n > 0) is.stats = five_number(samples[gi]);
            if (info.boolean) {
                std::size_t k = 0;
                for (double x : samples[gi])
                    if (x != 0.0) ++k;
                is.successes = k;
                if (is.n > 0) is.proportion = static_cast<double>(k) / static_cast<double>(is.n);
            }
            out[gi].indicators.push_back(is);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Comparisons
// ---------------------------------------------------------------------------

struct ComparisonConfig {
    double alpha = 0.05;
    Correction correction = Correction::holm;
    bool force_pairwise = false;
};

struct GroupComparison {
    Indicator indicator{};
    TestFamily family{};
    std::vector<std::string> groups;       // groups that entered the test
    std::optional<OmnibusResult> omnibus;  // absent when the comparison was skipped
    std::vector<PairwiseResult> pairwise;  // indices refer to `groups`
    bool pairwise_computed = false;
    std::vector<std::string> warnings;
    std::string skipped_reason;
};

/// Routes one indicator to its test family and runs omnibus and (when the
/// omnibus p is below alpha, or forced) pairwise tests. Groups without
/// usable data are dropped with a warning; the comparison is skipped when
/// fewer than two remain or the statistic is undefined.
inline GroupComparison compare_groups(const std::vector<IndicatorVector>& vectors,
                                      const std::vector<std::string>& groups, Indicator ind,
                                      const ComparisonConfig& cfg = {}) {
    const auto& meta = info(ind);
    GroupComparison gc;
    gc.indicator = ind;
    gc.family = meta.family;

    const auto samples = values_by_group(vectors, groups, ind);
    const std::size_t min_n = meta.family == TestFamily::anova ? 2 : 1;
    std::vector<Sample> used;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (samples[i].size() < min_n) {
            gc.warnings.push_back("group '" + groups[i] + "' skipped: " +
                                  (samples[i].empty() ? std::string("no data")
                                                      : std::string("fewer than 2 values")));
            continue;
        }
        gc.groups.push_back(groups[i]);
        used.push_back(samples[i]);
    }
    if (used.size() < 2) {
        gc.skipped_reason = "fewer than two groups with data";
        return gc;
    }

    try {
        switch (meta.family) {
        case TestFamily::anova:
            gc.omnibus = one_way_anova(used);
            if (cfg.force_pairwise || gc.omnibus->p_value < cfg.alpha) {
                gc.pairwise = tukey_hsd(used);
                gc.pairwise_computed = true;
            }
            break;
        case TestFamily::kruskal:
            gc.omnibus = kruskal_wallis(used);
            if (cfg.force_pairwise || gc.omnibus->p_value < cfg.alpha) {
                gc.pairwise = pairwise_wilcoxon(used, cfg.correction);
                gc.pairwise_computed = true;
            }
            break;
        case TestFamily::chisq: {
            std::vector<std::size_t> successes, totals;
            for (const auto& s : used) {
                totals.push_back(s.size());
                successes.push_back(static_cast<std::size_t>(std::count_if(
                    s.begin(), s.end(), [](double x) { return x != 0.0; })));
            }
            gc.omnibus = chisq_proportions(successes, totals);
            if (cfg.force_pairwise || gc.omnibus->p_value < cfg.alpha) {
                gc.pairwise = pairwise_proportions(successes, totals, cfg.correction);
                gc.pairwise_computed = true;
            }
            break;
        }
        }
    } catch (const DomainError& e) {
        gc.omnibus.reset();
        gc.pairwise.clear();
        gc.pairwise_computed = false;
        gc.skipped_reason = e.what();
    }
    return gc;
}

inline std::vector<GroupComparison> compare_all(const std::vector<IndicatorVector>& vectors,
                                                const std::vector<std::string>& groups,
                                                const ComparisonConfig& cfg = {}) {
    std::vector<GroupComparison> out;
    for (const auto& i : kIndicators) out.push_back(compare_groups(vectors, groups, i.id, cfg));
    return out;
}

// ---------------------------------------------------------------------------
// Report model and emission
// ---------------------------------------------------------------------------

struct ReportSettings {
    double alpha = 0.05;
    std::string correction = "holm";
    std::string tails = "two";
    bool force_pairwise = false;
    int citation_window_years = 3;
};

struct Report {
    ReportSettings settings;
    std::vector<std::string> groups;
    std::vector<GroupSummary> summaries;
    std::vector<GroupComparison> comparisons;
};

enum class ReportFormat { json, csv, markdown };

namespace detail {

inline std::string num(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::string fixed2(double v, int decimals = 2) {
    if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::string p_text(double p) {
    if (p < 0.001) return "p < 0.001";
    return "p = " + fixed2(p, 3);
}

inline nlohmann::ordered_json json_num(double v) {
    if (!std::isfinite(v)) return nlohmann::ordered_json(num(v));
    return nlohmann::ordered_json(v);
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline void write_text(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline std::string omnibus_text(const OmnibusResult& o) {
    std::string s;
    switch (o.test) {
    case OmnibusTest::anova_F:
        s = "F(" + num(o.df1) + ", " + num(o.df2.value_or(0)) + ") = " + fixed2(o.statistic, 1);
        break;
    case OmnibusTest::kruskal_H: s = "H(" + num(o.df1) + ") = " + fixed2(o.statistic, 1); break;
    case OmnibusTest::chisq:
        s = "χ2(" + num(o.df1) + ", N = " + std::to_string(o.n) + ") = " + fixed2(o.statistic, 1);
        break;
    }
    return s + ", " + p_text(o.p_value);
}

} // namespace detail

inline std::string render_json(const Report& r) {
    using oj = nlohmann::ordered_json;
    oj j;
    j["schema_version"] = kReportSchemaVersion;
    j["settings"] = {{"alpha", r.settings.alpha},
                     {"correction", r.settings.correction},
                     {"tails", r.settings.tails},
                     {"force_pairwise", r.settings.force_pairwise},
                     {"citation_window_years", r.settings.citation_window_years}};
    j["groups"] = r.groups;
    auto sums = oj::array();
    for (const auto& g : r.summaries) {
        oj gj;
        gj["group"] = g.group;
        gj["articles"] = g.size;
        auto inds = oj::object();
        for (const auto& s : g.indicators) {
            oj sj;
            sj["n"] = s.n;
            if (s.stats) {
                sj["mean"] = detail::json_num(s.stats->mean);
                sj["min"] = detail::json_num(s.stats->min);
                sj["q1"] = detail::json_num(s.stats->q1);
                sj["median"] = detail::json_num(s.stats->median);
                sj["q3"] = detail::json_num(s.stats->q3);
                sj["max"] = detail::json_num(s.stats->max);
            } else {
                for (const char* k : {"mean", "min", "q1", "median", "q3", "max"}) sj[k] = nullptr;
            }
            if (s.successes) {
                sj["successes"] = *s.successes;
                sj["proportion"] = s.proportion ? detail::json_num(*s.proportion) : oj(nullptr);
            }
            inds[std::string(info(s.indicator).name)] = std::move(sj);
        }
        gj["indicators"] = std::move(inds);
        sums.push_back(std::move(gj));
    }
    j["summaries"] = std::move(sums);
    auto comps = oj::array();
    for (const auto& c : r.comparisons) {
        oj cj;
        cj["indicator"] = info(c.indicator).name;
        cj["test_family"] = to_string(c.family);
        cj["groups"] = c.groups;
        if (c.omnibus) {
            const auto& o = *c.omnibus;
            cj["omnibus"] = {{"test", to_string(o.test)},
                             {"statistic", detail::json_num(o.statistic)},
                             {"df1", o.df1},
                             {"df2", o.df2 ? oj(*o.df2) : oj(nullptr)},
                             {"n", o.n},
                             {"p_value", detail::json_num(o.p_value)}};
        } else {
            cj["omnibus"] = nullptr;
        }
        cj["pairwise_computed"] = c.pairwise_computed;
        auto pw = oj::array();
        for (const auto& p : c.pairwise)
            pw.push_back({{"group_a", c.groups[p.group_a]},
                          {"group_b", c.groups[p.group_b]},
                          {"estimate", detail::json_num(p.estimate)},
                          {"statistic", detail::json_num(p.statistic)},
                          {"p_raw", detail::json_num(p.p_raw)},
                          {"p_adjusted", detail::json_num(p.p_adjusted)},
                          {"method", p.method}});
        cj["pairwise"] = std::move(pw);
        cj["warnings"] = c.warnings;
        cj["skipped_reason"] = c.skipped_reason.empty() ? oj(nullptr) : oj(c.skipped_reason);
        comps.push_back(std::move(cj));
    }
    j["comparisons"] = std::move(comps);
    return j.dump(2) + "\n";
}

inline std::string render_csv(const Report& r) {
    using detail::csv_escape;
    using detail::num;
    std::ostringstream out;
    out << "record_type,indicator,group,n,mean,min,q1,median,q3,max,proportion,"
           "test_family,test,statistic,df1,df2,p_value,group_a,group_b,estimate,p_raw,p_adjusted,method\n";
    for (const auto& g : r.summaries)
        for (const auto& s : g.indicators) {
            out << "summary," << info(s.indicator).name << ',' << csv_escape(g.group) << ',' << s.n;
            if (s.stats)
                out << ',' << num(s.stats->mean) << ',' << num(s.stats->min) << ',' << num(s.stats->q1) << ','
                    << num(s.stats->median) << ',' << num(s.stats->q3) << ',' << num(s.stats->max);
            else
                out << ",,,,,,";
            out << ',' << (s.proportion ? num(*s.proportion) : std::string());
            out << ",,,,,,,,,,,,\n";
        }
    for (const auto& c : r.comparisons) {
        const auto name = info(c.indicator).name;
        out << "omnibus," << name << ",,,,,,,,,," << to_string(c.family) << ',';
        if (c.omnibus) {
            const auto& o = *c.omnibus;
            out << to_string(o.test) << ',' << num(o.statistic) << ',' << num(o.df1) << ','
                << (o.df2 ? num(*o.df2) : std::string()) << ',' << num(o.p_value);
        } else {
            out << ",,,,";
        }
        out << ",,,,,,\n";
        for (const auto& p : c.pairwise)
            out << "pairwise," << name << ",,,,,,,,,," << to_string(c.family) << ",," << num(p.statistic)
                << ",,,," << csv_escape(c.groups[p.group_a]) << ',' << csv_escape(c.groups[p.group_b]) << ','
                << num(p.estimate) << ',' << num(p.p_raw) << ',' << num(p.p_adjusted) << ',' << p.method
                << '\n';
    }
    return out.str();
}

inline std::string render_markdown(const Report& r) {
    using detail::fixed2;
    std::ostringstream out;
    out << "# Article quality indicators\n\n";
    out << "Groups: ";
    for (std::size_t i = 0; i < r.summaries.size(); ++i)
        out << (i ? ", " : "") << r.summaries[i].group << " (n = " << r.summaries[i].size << ")";
    out << "\n\nalpha = " << detail::num(r.settings.alpha) << "; pairwise correction: " << r.settings.correction
        << "; p-value recomputation: " << r.settings.tails << "-tailed"
        << (r.settings.force_pairwise ? "; pairwise tests forced" : "") << "\n\n";

    out << "## Summary by group\n\n";
    out << "Continuous indicators show mean / median [IQR]; flags show the percentage of articles with a "
           "defined value.\n\n";
    out << "| Indicator | Test |";
    for (const auto& g : r.summaries) out << ' ' << g.group << " |";
    out << " Omnibus |\n|---|---|";
    for (std::size_t i = 0; i < r.summaries.size(); ++i) out << "---|";
    out << "---|\n";
    for (std::size_t k = 0; k < kIndicators.size(); ++k) {
        const auto& meta = kIndicators[k];
        out << "| " << meta.label << " | " << to_string(meta.family) << " |";
        for (const auto& g : r.summaries) {
            const auto& s = g.indicators[k];
            if (s.n == 0) {
                out << " - |";
            } else if (meta.boolean) {
                out << ' ' << fixed2(100.0 * s.proportion.value_or(0), 1) << "% (" << *s.successes << "/" << s.n
                    << ") |";
            } else {
                out << ' ' << fixed2(s.stats->mean, 1) << " / " << fixed2(s.stats->median, 1) << " ["
                    << fixed2(s.stats->q1, 1) << "–" << fixed2(s.stats->q3, 1) << "] |";
            }
        }
        const GroupComparison* comp = nullptr;
        for (const auto& c : r.comparisons)
            if (c.indicator == meta.id) comp = &c;
        if (comp && comp->omnibus)
            out << ' ' << detail::omnibus_text(*comp->omnibus) << " |\n";
        else
            out << " not tested |\n";
    }

    out << "\n## Pairwise comparisons\n\n";
    bool any = false;
    for (const auto& c : r.comparisons) {
        if (c.pairwise.empty()) continue;
        any = true;
        out << "### " << info(c.indicator).label << "\n\n";
        out << "| Pair | Difference | Statistic | p (adjusted) | Method |\n|---|---|---|---|---|\n";
        for (const auto& p : c.pairwise)
            out << "| " << c.groups[p.group_a] << " vs " << c.groups[p.group_b] << " | "
                << fixed2(p.estimate, 3) << " | " << fixed2(p.statistic, 2) << " | "
                << (p.p_adjusted < 0.001 ? std::string("< 0.001") : fixed2(p.p_adjusted, 3)) << " | "
                << p.method << " |\n";
        out << "\n";
    }
    if (!any) out << "No pairwise comparisons were run.\n\n";

    bool notes = false;
    for (const auto& c : r.comparisons) {
        if (c.skipped_reason.empty() && c.warnings.empty()) continue;
        if (!notes) out << "## Notes\n\n";
        notes = true;
        for (const auto& w : c.warnings) out << "- " << info(c.indicator).name << ": " << w << "\n";
        if (!c.skipped_reason.empty())
            out << "- " << info(c.indicator).name << ": not tested (" << c.skipped_reason << ")\n";
    }
    return out.str();
}

inline std::string render(const Report& r, ReportFormat f) {
    switch (f) {
    case ReportFormat::json: return render_json(r);
    case ReportFormat::csv: return render_csv(r);
    case ReportFormat::markdown: return render_markdown(r);
    }
    return {};
}

inline const char* report_filename(ReportFormat f) {
    switch (f) {
    case ReportFormat::json: return "report.json";
    case ReportFormat::csv: return "report.csv";
    case ReportFormat::markdown: return "report.md";
    }
    return "report";
}

/// Writes report.<ext> for each requested format into `dir`.
inline std::vector<std::filesystem::path> emit_report(const Report& r, const std::vector<ReportFormat>& formats,
                                                      const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> written;
    for (auto f : formats) {
        const auto path = dir / report_filename(f);
        detail::write_text(path, render(r, f));
        written.push_back(path);
    }
    return written;
}

inline Report build_report(const std::vector<IndicatorVector>& vectors, const std::vector<std::string>& groups,
                           const ComparisonConfig& cfg, ReportSettings settings) {
    Report r;
    settings.alpha = cfg.alpha;
    settings.correction = to_string(cfg.correction);
    settings.force_pairwise = cfg.force_pairwise;
    r.settings = std::move(settings);
    r.groups = groups;
    r.summaries = summarize(vectors, groups);
    r.comparisons = compare_all(vectors, groups, cfg);
    return r;
}

// ---------------------------------------------------------------------------
// Plot data
// ---------------------------------------------------------------------------

inline std::string render_plot_csv(const std::vector<IndicatorVector>& vectors,
                                   const std::vector<std::string>& groups, Indicator ind) {
    const auto samples = values_by_group(vectors, groups, ind);
    std::ostringstream out;
    if (info(ind).boolean) {
        out << "group,n,successes,proportion\n";
        for (std::size_t g = 0; g < groups.size(); ++g) {
            std::size_t k = 0;
            for (double x : samples[g])
                if (x != 0.0) ++k;
            out << detail::csv_escape(groups[g]) << ',' << samples[g].size() << ',' << k << ',';
            if (!samples[g].empty())
                out << detail::num(static_cast<double>(k) / static_cast<double>(samples[g].size()));
            out << '\n';
        }
    } else {
        out << "group,n,min,q1,median,q3,max,mean\n";
        for (std::size_t g = 0; g < groups.size(); ++g) {
            out << detail::csv_escape(groups[g]) << ',' << samples[g].size();
            if (samples[g].empty()) {
                out << ",,,,,,\n";
                continue;
            }
            const auto f = five_number(samples[g]);
            out << ',' << detail::num(f.min) << ',' << detail::num(f.q1) << ',' << detail::num(f.median) << ','
                << detail::num(f.q3) << ',' << detail::num(f.max) << ',' << detail::num(f.mean) << '\n';
        }
    }
    return out.str();
}

inline std::string render_plot_values_csv(const std::vector<IndicatorVector>& vectors,
                                          const std::vector<std::string>& groups, Indicator ind) {
    std::ostringstream out;
    out << "group,id,value\n";
    for (const auto& g : groups)
        for (const auto& v : vectors) {
            if (v.group != g) continue;
            if (auto x = value_of(v, ind))
                out << detail::csv_escape(g) << ',' << detail::csv_escape(v.id) << ',' << detail::num(*x) << '\n';
        }
    return out.str();
}

/// Minimal static chart: box plots for numeric indicators, bars for flags.
inline std::string render_plot_svg(const std::vector<IndicatorVector>& vectors,
                                   const std::vector<std::string>& groups, Indicator ind) {
    const auto samples = values_by_group(vectors, groups, ind);
    const double width = 120.0 * static_cast<double>(std::max<std::size_t>(groups.size(), 1)) + 80.0;
    const double height = 320.0, top = 30.0, bottom = 270.0, left = 60.0;
    double lo = 0.0, hi = 1.0;
    const bool boolean = info(ind).boolean;
    if (!boolean) {
        bool first = true;
        for (const auto& s : samples)
            for (double x : s) {
                if (first) {
                    lo = hi = x;
                    first = false;
                }
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
        if (hi == lo) hi = lo + 1.0;
    }
    auto y = [&](double v) { return bottom - (v - lo) / (hi - lo) * (bottom - top); };
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fixed2(width, 0) << "\" height=\""
        << detail::fixed2(height, 0) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<text x=\"" << detail::fixed2(left, 0) << "\" y=\"18\">" << info(ind).label << "</text>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << detail::fixed2(y(hi), 1) << "\" text-anchor=\"end\">"
        << detail::fixed2(hi, 1) << "</text>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << detail::fixed2(y(lo), 1) << "\" text-anchor=\"end\">"
        << detail::fixed2(lo, 1) << "</text>\n";
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const double cx = left + 60.0 + 120.0 * static_cast<double>(g);
        out << "<text x=\"" << detail::fixed2(cx, 1) << "\" y=\"" << bottom + 20
            << "\" text-anchor=\"middle\">" << groups[g] << "</text>\n";
        if (samples[g].empty()) continue;
        if (boolean) {
            double k = 0;
            for (double x : samples[g]) k += x;
            const double prop = k / static_cast<double>(samples[g].size());
            out << "<rect x=\"" << detail::fixed2(cx - 30, 1) << "\" y=\"" << detail::fixed2(y(prop), 1)
                << "\" width=\"60\" height=\"" << detail::fixed2(bottom - y(prop), 1)
                << "\" fill=\"#8da0cb\" stroke=\"black\"/>\n";
        } else {
            const auto f = five_number(samples[g]);
            out << "<line x1=\"" << detail::fixed2(cx, 1) << "\" y1=\"" << detail::fixed2(y(f.min), 1)
                << "\" x2=\"" << detail::fixed2(cx, 1) << "\" y2=\"" << detail::fixed2(y(f.max), 1)
                << "\" stroke=\"black\"/>\n";
            out << "<rect x=\"" << detail::fixed2(cx - 30, 1) << "\" y=\"" << detail::fixed2(y(f.q3), 1)
                << "\" width=\"60\" height=\"" << detail::fixed2(y(f.q1) - y(f.q3), 1)
                << "\" fill=\"#8da0cb\" stroke=\"black\"/>\n";
            out << "<line x1=\"" << detail::fixed2(cx - 30, 1) << "\" y1=\"" << detail::fixed2(y(f.median), 1)
                << "\" x2=\"" << detail::fixed2(cx + 30, 1) << "\" y2=\"" << detail::fixed2(y(f.median), 1)
                << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

/// Writes <dir>/<indicator>.csv (and _values.csv for numeric indicators,
/// .svg when requested). Throws ConfigError for an unknown indicator name.
inline std::vector<std::filesystem::path> emit_plot_data(const std::vector<IndicatorVector>& vectors,
                                                         const std::vector<std::string>& groups,
                                                         std::string_view indicator,
                                                         const std::filesystem::path& dir, bool svg = false) {
    const auto ind = indicator_from_name(indicator);
    if (!ind) throw ConfigError("unknown indicator '" + std::string(indicator) + "'");
    const std::string name(indicator);
    std::vector<std::filesystem::path> written;
    const auto summary_path = dir / (name + ".csv");
    detail::write_text(summary_path, render_plot_csv(vectors, groups, *ind));
    written.push_back(summary_path);
    if (!info(*ind).boolean) {
        const auto values_path = dir / (name + "_values.csv");
        detail::write_text(values_path, render_plot_values_csv(vectors, groups, *ind));
        written.push_back(values_path);
    }
    if (svg) {
        const auto svg_path = dir / (name + ".svg");
        detail::write_text(svg_path, render_plot_svg(vectors, groups, *ind));
        written.push_back(svg_path);
    }
    return written;
}

} // namespace artiq
