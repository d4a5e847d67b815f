#!/usr/bin/env python3
"""Generate tests/fixtures/reference_battery.json from SciPy/statsmodels.

The fixture freezes reference results for 50 randomized small data sets
(k in {2, 3, 4} groups, 3..30 observations per group):

  anova      scipy.stats.f_oneway
  tukey      scipy.stats.tukey_hsd (Tukey-Kramer)
  kruskal    scipy.stats.kruskal
  wilcoxon   scipy.stats.mannwhitneyu, exact when n_a + n_b <= 12 and the
             pair has no ties, otherwise normal with continuity correction;
             Holm via statsmodels.stats.multitest.multipletests
  chisq      scipy.stats.chi2_contingency on the 2 x k table (Yates only
             for k = 2); pairwise 2 x 2 tables with Yates, Holm-adjusted

Run:  python3 tests/oracle/gen_reference.py
"""

import json
import pathlib

import numpy as np
import scipy
import statsmodels
from scipy import stats
from statsmodels.stats.multitest import multipletests

SEED = 20240611
N_FIXTURES = 50
OUT = pathlib.Path(__file__).resolve().parents[1] / "fixtures" / "reference_battery.json"


def make_groups(rng, k):
    small = rng.random() < 0.3
    sizes = [int(rng.integers(3, 7 if small else 31)) for _ in range(k)]
    shifts = rng.normal(0.0, 1.0, size=k)
    integer = rng.random() < 0.4
    groups = []
    for n, s in zip(sizes, shifts):
        x = rng.normal(10.0 + s, 2.0, size=n)
        x = np.round(x) if integer else np.round(x, 3)
        groups.append([float(v) for v in x])
    return groups


def make_proportions(rng, sizes):
    while True:
        p = rng.uniform(0.15, 0.85, size=len(sizes))
        succ = [int(rng.binomial(n, q)) for n, q in zip(sizes, p)]
        ok = True
        for i in range(len(sizes)):
            for j in range(i + 1, len(sizes)):
                s = succ[i] + succ[j]
                if s == 0 or s == sizes[i] + sizes[j]:
                    ok = False
        if ok:
            return succ


def has_ties(a, b):
    pooled = list(a) + list(b)
    return len(set(pooled)) != len(pooled)


def fixture(rng, idx):
    k = int(rng.integers(2, 5))
    groups = make_groups(rng, k)
    sizes = [len(g) for g in groups]
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]

    f = stats.f_oneway(*groups)
    tk = stats.tukey_hsd(*groups)
    kw = stats.kruskal(*groups)

    means = [float(np.mean(g)) for g in groups]
    n_total = sum(sizes)
    ssw = sum(float(np.sum((np.asarray(g) - m) ** 2)) for g, m in zip(groups, means))
    msw = ssw / (n_total - k)

    tukey = []
    for i, j in pairs:
        se = np.sqrt(msw / 2.0 * (1.0 / sizes[i] + 1.0 / sizes[j]))
        tukey.append({
            "a": i, "b": j,
            "estimate": float(tk.statistic[i][j]),
            "q": float(abs(means[i] - means[j]) / se),
            "p": float(tk.pvalue[i][j]),
        })

    wil = []
    raw = []
    for i, j in pairs:
        a, b = groups[i], groups[j]
        exact = len(a) + len(b) <= 12 and not has_ties(a, b)
        r = stats.mannwhitneyu(a, b, alternative="two-sided", use_continuity=True,
                               method="exact" if exact else "asymptotic")
        w = float(r.statistic) + len(a) * (len(a) + 1) / 2.0
        wil.append({"a": i, "b": j, "w": w, "p_raw": float(r.pvalue), "exact": exact})
        raw.append(float(r.pvalue))
    holm = multipletests(raw, method="holm")[1]
    for entry, p in zip(wil, holm):
        entry["p_holm"] = float(p)

    succ = make_proportions(rng, sizes)
    table = np.array([succ, [n - s for n, s in zip(sizes, succ)]])
    chi = stats.chi2_contingency(table, correction=True)
    prop_pairs = []
    praw = []
    for i, j in pairs:
        t2 = np.array([[succ[i], succ[j]], [sizes[i] - succ[i], sizes[j] - succ[j]]])
        c2 = stats.chi2_contingency(t2, correction=True)
        prop_pairs.append({"a": i, "b": j, "statistic": float(c2.statistic), "p_raw": float(c2.pvalue)})
        praw.append(float(c2.pvalue))
    pholm = multipletests(praw, method="holm")[1]
    for entry, p in zip(prop_pairs, pholm):
        entry["p_holm"] = float(p)

    return {
        "id": idx,
        "groups": groups,
        "anova": {"F": float(f.statistic), "df1": k - 1, "df2": n_total - k, "p": float(f.pvalue)},
        "tukey": tukey,
        "kruskal": {"H": float(kw.statistic), "df": k - 1, "p": float(kw.pvalue)},
        "wilcoxon": wil,
        "proportions": {
            "successes": succ,
            "totals": sizes,
            "statistic": float(chi.statistic),
            "df": int(chi.dof),
            "p": float(chi.pvalue),
            "pairs": prop_pairs,
        },
    }


def main():
    rng = np.random.default_rng(SEED)
    fixtures = [fixture(rng, i) for i in range(N_FIXTURES)]
    doc = {
        "generator": "tests/oracle/gen_reference.py",
        "seed": SEED,
        "scipy": scipy.__version__,
        "statsmodels": statsmodels.__version__,
        "numpy": np.__version__,
        "fixtures": fixtures,
    }
    OUT.write_text(json.dumps(doc, indent=1) + "\n")
    print(f"wrote {OUT} ({len(fixtures)} fixtures)")


if __name__ == "__main__":
    main()
