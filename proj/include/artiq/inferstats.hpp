#pragma once

// Group comparison tests: one-way ANOVA with Tukey-Kramer HSD,
// Kruskal-Wallis with pairwise Wilcoxon rank-sum tests, and the k-sample
// chi-square test of equal proportions with pairwise 2x2 follow-ups.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "artiq/distributions.hpp"
#include "artiq/error.hpp"

namespace artiq {

using Sample = std::vector<double>;

enum class OmnibusTest { anova_F, kruskal_H, chisq };
enum class Correction { holm, bonferroni, none };
enum class RankSumMethod { automatic, exact, normal };

inline const char* to_string(OmnibusTest t) noexcept {
    switch (t) {
    case OmnibusTest::anova_F: return "anova_F";
    case OmnibusTest::kruskal_H: return "kruskal_H";
    case OmnibusTest::chisq: return "chisq";
    }
    return "?";
}

inline const char* to_string(Correction c) noexcept {
    switch (c) {
    case Correction::holm: return "holm";
    case Correction::bonferroni: return "bonferroni";
    case Correction::none: return "none";
    }
    return "?";
}

struct OmnibusResult {
    OmnibusTest test = OmnibusTest::anova_F;
    double statistic = 0;
    double df1 = 0;
    std::optional<double> df2;
    std::size_t n = 0;
    double p_value = 1;
};

struct PairwiseResult {
    std::size_t group_a = 0; // indices into the input groups
    std::size_t group_b = 0;
    double estimate = 0;     // a minus b: mean, median or proportion difference
    double statistic = 0;    // Tukey q, rank-sum W of a, or 2x2 chi-square
    double p_raw = 1;        // before multiplicity adjustment (Tukey: same as adjusted)
    double p_adjusted = 1;
    std::string method;      // "tukey", "wilcoxon_<correction>", "prop_<correction>"
};

namespace detail {

inline double mean(const Sample& s) {
    return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

inline double median(Sample s) {
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    return n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

inline void require_groups(const std::vector<Sample>& groups, std::size_t min_each) {
    if (groups.size() < 2) throw DomainError("at least two groups are required");
    for (const auto& g : groups)
        if (g.size() < min_each)
            throw DomainError("each group needs at least " + std::to_string(min_each) + " values");
}

struct AnovaParts {
    std::vector<double> means;
    std::vector<std::size_t> sizes;
    double ss_between = 0;
    double ss_within = 0;
    std::size_t n = 0;
    std::size_t k = 0;
};

inline AnovaParts anova_parts(const std::vector<Sample>& groups) {
    require_groups(groups, 2);
    AnovaParts a;
    a.k = groups.size();
    double total = 0;
    for (const auto& g : groups) {
        a.means.push_back(mean(g));
        a.sizes.push_back(g.size());
        a.n += g.size();
        total += std::accumulate(g.begin(), g.end(), 0.0);
    }
    const double grand = total / static_cast<double>(a.n);
    for (std::size_t i = 0; i < a.k; ++i) {
        const double d = a.means[i] - grand;
        a.ss_between += static_cast<double>(a.sizes[i]) * d * d;
        for (double x : groups[i]) {
            const double e = x - a.means[i];
            a.ss_within += e * e;
        }
    }
    if (a.n <= a.k) throw DomainError("no within-group degrees of freedom");
    return a;
}

// Mid-ranks of the pooled sample plus the tie-group sizes.
struct Ranking {
    std::vector<double> ranks; // same order as the pooled input
    std::vector<std::size_t> ties;
};

inline Ranking rank_pooled(const std::vector<double>& pooled) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
    Ranking r;
    r.ranks.assign(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && pooled[order[j]] == pooled[order[i]]) ++j;
        const double mid = 0.5 * static_cast<double>(i + 1 + j); // average of ranks i+1..j
        for (std::size_t t = i; t < j; ++t) r.ranks[order[t]] = mid;
        if (j - i > 1) r.ties.push_back(j - i);
        i = j;
    }
    return r;
}

inline double tie_sum(const std::vector<std::size_t>& ties) {
    double s = 0;
    for (auto t : ties) {
        const double d = static_cast<double>(t);
        s += d * d * d - d;
    }
    return s;
}

inline void check_proportions(const std::vector<std::size_t>& successes,
                              const std::vector<std::size_t>& totals) {
    if (successes.size() != totals.size()) throw DomainError("successes and totals differ in length");
    if (totals.size() < 2) throw DomainError("at least two groups are required");
    for (std::size_t i = 0; i < totals.size(); ++i) {
        if (totals[i] == 0) throw DomainError("group total is zero");
        if (successes[i] > totals[i]) throw DomainError("successes exceed total");
    }
}

// Pearson chi-square on a k x 2 table of successes/failures. With `yates`
// every |O - E| is reduced by min(0.5, |O - E|).
inline double proportions_chisq(const std::vector<std::size_t>& successes,
                                const std::vector<std::size_t>& totals, bool yates) {
    double s_total = 0, n_total = 0;
    for (std::size_t i = 0; i < totals.size(); ++i) {
        s_total += static_cast<double>(successes[i]);
        n_total += static_cast<double>(totals[i]);
    }
    const double pooled = s_total / n_total;
    if (pooled == 0.0 || pooled == 1.0) return 0.0;
    double stat = 0;
    for (std::size_t i = 0; i < totals.size(); ++i) {
        const double n = static_cast<double>(totals[i]);
        const double obs[2] = {static_cast<double>(successes[i]), n - static_cast<double>(successes[i])};
        const double exp[2] = {n * pooled, n * (1.0 - pooled)};
        for (int c = 0; c < 2; ++c) {
            double d = std::fabs(obs[c] - exp[c]);
            if (yates) d -= std::min(0.5, d);
            stat += d * d / exp[c];
        }
    }
    return stat;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Multiplicity adjustment
// ---------------------------------------------------------------------------

inline std::vector<double> adjust_p(const std::vector<double>& p, Correction method) {
    const std::size_t m = p.size();
    std::vector<double> out(p);
    if (method == Correction::none || m == 0) return out;
    if (method == Correction::bonferroni) {
        for (auto& v : out) v = std::min(1.0, v * static_cast<double>(m));
        return out;
    }
    // Holm step-down
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] < p[b]; });
    double running = 0;
    for (std::size_t rank = 0; rank < m; ++rank) {
        const auto idx = order[rank];
        const double adj = std::min(1.0, static_cast<double>(m - rank) * p[idx]);
        running = std::max(running, adj);
        out[idx] = running;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parametric
// ---------------------------------------------------------------------------

/// Classical one-way ANOVA. Throws UndefinedError when every value in every
/// group is identical.
inline OmnibusResult one_way_anova(const std::vector<Sample>& groups) {
    const auto a = detail::anova_parts(groups);
    const double df1 = static_cast<double>(a.k - 1);
    const double df2 = static_cast<double>(a.n - a.k);
    if (a.ss_within == 0.0 && a.ss_between == 0.0)
        throw UndefinedError("F undefined: all values identical");
    OmnibusResult r;
    r.test = OmnibusTest::anova_F;
    r.df1 = df1;
    r.df2 = df2;
    r.n = a.n;
    if (a.ss_within == 0.0) {
        r.statistic = std::numeric_limits<double>::infinity();
        r.p_value = 0.0;
        return r;
    }
    r.statistic = (a.ss_between / df1) / (a.ss_within / df2);
    r.p_value = std::clamp(dist::f_sf(r.statistic, df1, df2), 0.0, 1.0);
    return r;
}

/// Tukey-Kramer HSD for all pairs (i < j) in input order.
inline std::vector<PairwiseResult> tukey_hsd(const std::vector<Sample>& groups) {
    const auto a = detail::anova_parts(groups);
    if (a.ss_within == 0.0 && a.ss_between == 0.0)
        throw UndefinedError("Tukey HSD undefined: all values identical");
    const double df = static_cast<double>(a.n - a.k);
    const double msw = a.ss_within / df;
    std::vector<PairwiseResult> out;
    for (std::size_t i = 0; i < a.k; ++i)
        for (std::size_t j = i + 1; j < a.k; ++j) {
            PairwiseResult p;
            p.group_a = i;
            p.group_b = j;
            p.method = "tukey";
            p.estimate = a.means[i] - a.means[j];
            const double se = std::sqrt(msw / 2.0 *
                                        (1.0 / static_cast<double>(a.sizes[i]) +
                                         1.0 / static_cast<double>(a.sizes[j])));
            if (se == 0.0) {
                p.statistic = p.estimate == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
                p.p_raw = p.estimate == 0.0 ? 1.0 : 0.0;
            } else {
                p.statistic = std::fabs(p.estimate) / se;
                p.p_raw = std::clamp(
                    dist::studentized_range_sf(p.statistic, static_cast<int>(a.k), df), 0.0, 1.0);
            }
            p.p_adjusted = p.p_raw;
            out.push_back(p);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Rank-based
// ---------------------------------------------------------------------------

/// Kruskal-Wallis H with tie correction; p from chi-square with k - 1 df.
inline OmnibusResult kruskal_wallis(const std::vector<Sample>& groups) {
    detail::require_groups(groups, 1);
    std::vector<double> pooled;
    for (const auto& g : groups) pooled.insert(pooled.end(), g.begin(), g.end());
    const std::size_t n = pooled.size();
    if (n < 3) throw DomainError("Kruskal-Wallis needs at least 3 observations");
    const auto ranking = detail::rank_pooled(pooled);
    const double nd = static_cast<double>(n);
    const double correction = 1.0 - detail::tie_sum(ranking.ties) / (nd * nd * nd - nd);
    if (correction <= 0.0) throw UndefinedError("H undefined: all values tied");

    double h = 0;
    std::size_t offset = 0;
    const double centre = (nd + 1.0) / 2.0;
    for (const auto& g : groups) {
        double rank_sum = 0;
        for (std::size_t i = 0; i < g.size(); ++i) rank_sum += ranking.ranks[offset + i];
        offset += g.size();
        const double d = rank_sum / static_cast<double>(g.size()) - centre;
        h += static_cast<double>(g.size()) * d * d;
    }
    h = 12.0 / (nd * (nd + 1.0)) * h / correction;

    OmnibusResult r;
    r.test = OmnibusTest::kruskal_H;
    r.statistic = h;
    r.df1 = static_cast<double>(groups.size() - 1);
    r.n = n;
    r.p_value = std::clamp(dist::chi2_sf(h, r.df1), 0.0, 1.0);
    return r;
}

struct RankSumResult {
    double w = 0;     // rank sum of the first sample
    double p = 1;     // two-sided
    bool exact = false;
};

/// Null distribution of the rank sum of m items drawn from ranks 1..n, as
/// probabilities indexed by sum.
inline std::vector<double> rank_sum_distribution(std::size_t m, std::size_t n) {
    const std::size_t max_sum = m * (2 * n - m + 1) / 2;
    // ways[j][s]: subsets of size j with sum s, rolled over ranks 1..n
    std::vector<std::vector<double>> ways(m + 1, std::vector<double>(max_sum + 1, 0.0));
    ways[0][0] = 1.0;
    for (std::size_t r = 1; r <= n; ++r)
        for (std::size_t j = std::min(m, r); j >= 1; --j)
            for (std::size_t s = max_sum; s >= r; --s) ways[j][s] += ways[j - 1][s - r];
    double total = 0;
    for (double w : ways[m]) total += w;
    for (auto& w : ways[m]) w /= total;
    return ways[m];
}

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) test. `automatic` uses the
/// exact null distribution when n_a + n_b <= 12 and there are no ties, and
/// the continuity-corrected normal approximation with tie-corrected
/// variance otherwise.
inline RankSumResult rank_sum_test(const Sample& a, const Sample& b,
                                   RankSumMethod method = RankSumMethod::automatic) {
    if (a.empty() || b.empty()) throw DomainError("rank-sum test needs two non-empty samples");
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto ranking = detail::rank_pooled(pooled);
    const std::size_t na = a.size(), nb = b.size(), n = na + nb;

    RankSumResult r;
    for (std::size_t i = 0; i < na; ++i) r.w += ranking.ranks[i];

    const bool ties = !ranking.ties.empty();
    bool exact = false;
    switch (method) {
    case RankSumMethod::automatic: exact = n <= 12 && !ties; break;
    case RankSumMethod::exact:
        if (ties) throw DomainError("exact rank-sum distribution requires untied data");
        exact = true;
        break;
    case RankSumMethod::normal: exact = false; break;
    }
    r.exact = exact;

    if (exact) {
        const auto pmf = rank_sum_distribution(na, n);
        const auto w = static_cast<std::size_t>(std::llround(r.w));
        double lower = 0, upper = 0;
        for (std::size_t s = 0; s < pmf.size(); ++s) {
            if (s <= w) lower += pmf[s];
            if (s >= w) upper += pmf[s];
        }
        r.p = std::min(1.0, 2.0 * std::min(lower, upper));
        return r;
    }

    const double dna = static_cast<double>(na), dnb = static_cast<double>(nb), dn = static_cast<double>(n);
    const double u = r.w - dna * (dna + 1.0) / 2.0;
    const double mu = dna * dnb / 2.0;
    const double var =
        dna * dnb / 12.0 * ((dn + 1.0) - detail::tie_sum(ranking.ties) / (dn * (dn - 1.0)));
    if (var <= 0.0) {
        r.p = 1.0;
        return r;
    }
    const double z = (std::fabs(u - mu) - 0.5) / std::sqrt(var);
    r.p = std::min(1.0, 2.0 * dist::normal_sf(z));
    return r;
}

/// Rank-sum test for every pair (i < j), adjusted for multiplicity.
inline std::vector<PairwiseResult> pairwise_wilcoxon(const std::vector<Sample>& groups,
                                                     Correction correction = Correction::holm,
                                                     RankSumMethod method = RankSumMethod::automatic) {
    detail::require_groups(groups, 1);
    std::vector<PairwiseResult> out;
    std::vector<double> raw;
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            const auto t = rank_sum_test(groups[i], groups[j], method);
            PairwiseResult p;
            p.group_a = i;
            p.group_b = j;
            p.estimate = detail::median(groups[i]) - detail::median(groups[j]);
            p.statistic = t.w;
            p.p_raw = t.p;
            p.method = std::string("wilcoxon_") + to_string(correction);
            raw.push_back(t.p);
            out.push_back(p);
        }
    const auto adj = adjust_p(raw, correction);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].p_adjusted = adj[i];
    return out;
}

// ---------------------------------------------------------------------------
// Proportions
// ---------------------------------------------------------------------------

/// k-sample chi-square test of equal proportions. The continuity correction
/// is applied only for k = 2. When no group has any success (or all are
/// successes) the statistic is 0 and p is 1.
inline OmnibusResult chisq_proportions(const std::vector<std::size_t>& successes,
                                       const std::vector<std::size_t>& totals) {
    detail::check_proportions(successes, totals);
    OmnibusResult r;
    r.test = OmnibusTest::chisq;
    r.df1 = static_cast<double>(totals.size() - 1);
    r.n = std::accumulate(totals.begin(), totals.end(), std::size_t{0});
    r.statistic = detail::proportions_chisq(successes, totals, totals.size() == 2);
    r.p_value = std::clamp(dist::chi2_sf(r.statistic, r.df1), 0.0, 1.0);
    return r;
}

/// Continuity-corrected 2x2 chi-square for every pair, adjusted.
inline std::vector<PairwiseResult> pairwise_proportions(const std::vector<std::size_t>& successes,
                                                        const std::vector<std::size_t>& totals,
                                                        Correction correction = Correction::holm) {
    detail::check_proportions(successes, totals);
    std::vector<PairwiseResult> out;
    std::vector<double> raw;
    for (std::size_t i = 0; i < totals.size(); ++i)
        for (std::size_t j = i + 1; j < totals.size(); ++j) {
            const std::vector<std::size_t> s{successes[i], successes[j]};
            const std::vector<std::size_t> n{totals[i], totals[j]};
            PairwiseResult p;
            p.group_a = i;
            p.group_b = j;
            p.estimate = static_cast<double>(successes[i]) / static_cast<double>(totals[i]) -
                         static_cast<double>(successes[j]) / static_cast<double>(totals[j]);
            p.statistic = detail::proportions_chisq(s, n, true);
            p.p_raw = std::clamp(dist::chi2_sf(p.statistic, 1.0), 0.0, 1.0);
            p.method = std::string("prop_") + to_string(correction);
            raw.push_back(p.p_raw);
            out.push_back(p);
        }
    const auto adj = adjust_p(raw, correction);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].p_adjusted = adj[i];
    return out;
}

} // namespace artiq
