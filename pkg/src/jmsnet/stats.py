"""Descriptive summaries and rank-based tests with effect sizes.

Distribution tails (normal, chi-squared, Student t) come from scipy; the test
statistics themselves are computed here.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Literal, Sequence

import numpy as np
from scipy.stats import chi2, norm
from scipy.stats import t as student_t


@dataclass(frozen=True)
class DescriptiveSummary:
    n: int
    min: float
    q1: float
    median: float
    mean: float
    q3: float
    max: float
    iqr: float


@dataclass(frozen=True)
class TestResult:
    test: str
    statistic: float
    p_value: float
    effect_size: float | None = None
    group_labels: tuple[str, ...] = ()
    n: int = 0
    method: str = ""
    extra: dict = field(default_factory=dict)

    def to_row(self) -> dict:
        row = asdict(self)
        row["group_labels"] = "|".join(self.group_labels)
        row.update(row.pop("extra"))
        return row


def _clip_p(p: float) -> float:
    return float(min(1.0, max(0.0, p)))


def describe(values: Sequence[float]) -> DescriptiveSummary:
    """Five-number summary and mean; quartiles by linear interpolation (type 7)."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("cannot describe an empty sample")
    q1, median, q3 = np.quantile(x, [0.25, 0.5, 0.75], method="linear")
    return DescriptiveSummary(
        n=int(x.size),
        min=float(x.min()),
        q1=float(q1),
        median=float(median),
        mean=float(x.mean()),
        q3=float(q3),
        max=float(x.max()),
        iqr=float(q3 - q1),
    )


def rankdata(values: Sequence[float]) -> np.ndarray:
    """Midranks (average ranks for ties), 1-based."""
    x = np.asarray(values, dtype=float)
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(len(x))
    sorted_x = x[order]
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and sorted_x[j + 1] == sorted_x[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def _tie_sum(values: Sequence[float]) -> float:
    """Sum of t^3 - t over tie groups."""
    return float(sum(t ** 3 - t for t in Counter(np.asarray(values, dtype=float).tolist()).values()))


# ---------------------------------------------------------------------------
# correlation and normality


def pearson_p_value(r: float, n: int) -> float:
    """Two-sided p of a sample correlation via ``t = r sqrt((n-2)/(1-r^2))``."""
    if n < 3:
        raise ValueError("need n >= 3")
    if abs(r) >= 1.0:
        return 0.0
    t_stat = r * math.sqrt((n - 2) / (1 - r * r))
    return _clip_p(2 * student_t.sf(abs(t_stat), n - 2))


def pearson(x: Sequence[float], y: Sequence[float], labels: tuple[str, str] = ("x", "y")
            ) -> TestResult:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) != len(y):
        raise ValueError("pearson needs equal-length samples")
    if len(x) < 3:
        raise ValueError("pearson needs at least 3 pairs")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise ValueError("pearson undefined for a zero-variance sample")
    r = float(np.clip((dx @ dy) / math.sqrt(sxx * syy), -1.0, 1.0))
    return TestResult("pearson", r, pearson_p_value(r, len(x)), r, labels, len(x))


_SW_C1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
_SW_C2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)
_SW_C3 = (0.5440, -0.39978, 0.025054, -6.714e-4)
_SW_C4 = (1.3822, -0.77857, 0.062767, -0.0020322)
_SW_C5 = (-1.5861, -0.31082, -0.083751, 0.0038915)
_SW_C6 = (-0.4803, -0.082676, 0.0030302)
_SW_G = (-2.273, 0.459)


def _poly(coef: Sequence[float], x: float) -> float:
    return sum(c * x ** i for i, c in enumerate(coef))


def shapiro_wilk(values: Sequence[float], label: str = "") -> TestResult:
    """Shapiro-Wilk W with Royston's (1995, AS R94) coefficients and p-value."""
    x = np.sort(np.asarray(values, dtype=float))
    n = len(x)
    if not 3 <= n <= 5000:
        raise ValueError(f"shapiro-wilk needs 3 <= n <= 5000, got {n}")
    if x[-1] - x[0] == 0:
        raise ValueError("shapiro-wilk undefined for identical values")

    half = n // 2
    a = np.zeros(half)
    if n == 3:
        a[0] = math.sqrt(0.5)
    else:
        m = norm.ppf((np.arange(1, half + 1) - 0.375) / (n + 0.25))
        summ2 = 2.0 * float(m @ m)
        ssumm2 = math.sqrt(summ2)
        rsn = 1.0 / math.sqrt(n)
        a1 = _poly(_SW_C1, rsn) - m[0] / ssumm2
        if n > 5:
            first = 2
            a2 = -m[1] / ssumm2 + _poly(_SW_C2, rsn)
            fac = math.sqrt((summ2 - 2 * m[0] ** 2 - 2 * m[1] ** 2)
                            / (1 - 2 * a1 ** 2 - 2 * a2 ** 2))
            a[1] = a2
        else:
            first = 1
            fac = math.sqrt((summ2 - 2 * m[0] ** 2) / (1 - 2 * a1 ** 2))
        a[0] = a1
        a[first:] = -m[first:] / fac

    centered = x - x.mean()
    numerator = float(a @ (x[::-1][:half] - x[:half])) ** 2
    w = min(1.0, numerator / float(centered @ centered))

    if n == 3:
        p = (6 / math.pi) * (math.asin(math.sqrt(w)) - math.asin(math.sqrt(0.75)))
        return TestResult("shapiro_wilk", w, _clip_p(p), None, (label,), n)
    y = math.log(1 - w) if w < 1 else -math.inf
    if n <= 11:
        gamma = _poly(_SW_G, n)
        if y >= gamma:
            return TestResult("shapiro_wilk", w, 1e-99, None, (label,), n)
        y = -math.log(gamma - y)
        mu = _poly(_SW_C3, n)
        sigma = math.exp(_poly(_SW_C4, n))
    else:
        ln = math.log(n)
        mu = _poly(_SW_C5, ln)
        sigma = math.exp(_poly(_SW_C6, ln))
    p = norm.sf((y - mu) / sigma) if math.isfinite(y) else 1.0
    return TestResult("shapiro_wilk", w, _clip_p(p), None, (label,), n)


# ---------------------------------------------------------------------------
# Wilcoxon rank-sum


EXACT_LIMIT = 25


def rank_sum_distribution(n_a: int, n_b: int) -> np.ndarray:
    """Counts of each achievable rank sum of ``n_a`` ranks drawn from 1..n_a+n_b.

    Index ``s`` holds the number of subsets with sum ``s``.
    """
    total = n_a + n_b
    max_sum = sum(range(total - n_a + 1, total + 1))
    # ways[k][s]: subsets of size k with sum s over ranks seen so far
    ways = np.zeros((n_a + 1, max_sum + 1), dtype=object)
    ways[0][0] = 1
    for rank in range(1, total + 1):
        for k in range(min(rank, n_a), 0, -1):
            ways[k][rank:] = ways[k][rank:] + ways[k - 1][:max_sum + 1 - rank]
    return ways[n_a]


def wilcoxon_rank_sum(a: Sequence[float], b: Sequence[float],
                      labels: tuple[str, str] = ("a", "b"),
                      method: Literal["auto", "exact", "normal"] = "auto") -> TestResult:
    """Two-sided Wilcoxon rank-sum test of ``a`` against ``b``.

    ``statistic`` is the rank sum of ``a`` (midranks for ties). ``auto`` uses
    the exact null distribution when n_a + n_b <= 25 without ties, and the
    tie-corrected normal approximation with continuity correction otherwise.
    The effect size is ``|Z| / sqrt(N)`` from the uncorrected Z.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n_a, n_b = len(a), len(b)
    if n_a == 0 or n_b == 0:
        raise ValueError("wilcoxon rank-sum needs two non-empty groups")
    pooled = np.concatenate([a, b])
    total = n_a + n_b
    ranks = rankdata(pooled)
    rank_sum = float(ranks[:n_a].sum())
    expected = n_a * (total + 1) / 2
    ties = _tie_sum(pooled)
    variance = n_a * n_b / 12 * ((total + 1) - ties / (total * (total - 1))) if total > 1 else 0.0
    diff = rank_sum - expected
    z = diff / math.sqrt(variance) if variance > 0 else 0.0
    effect = abs(z) / math.sqrt(total)

    if method == "auto":
        method = "exact" if total <= EXACT_LIMIT and ties == 0 else "normal"
    if method == "exact":
        if ties:
            raise ValueError("exact rank-sum p-value requires tie-free data")
        counts = rank_sum_distribution(n_a, n_b)
        observed = int(round(rank_sum))
        denom = math.comb(total, n_a)
        lower = sum(counts[:observed + 1]) / denom
        upper = sum(counts[observed:]) / denom
        p = min(1.0, 2 * min(lower, upper))
    elif method == "normal":
        if variance > 0:
            corrected = (diff - math.copysign(0.5, diff) if diff else 0.0) / math.sqrt(variance)
            p = 2 * norm.sf(abs(corrected))
        else:
            p = 1.0
    else:
        raise ValueError(f"unknown method {method!r}")
    return TestResult("wilcoxon_rank_sum", rank_sum, _clip_p(p), effect, labels, total, method,
                      {"z": z, "u": rank_sum - n_a * (n_a + 1) / 2})


# ---------------------------------------------------------------------------
# Kruskal-Wallis and Dunn


def _check_groups(groups: Sequence[Sequence[float]]) -> list[np.ndarray]:
    if len(groups) < 2:
        raise ValueError("need at least 2 groups")
    arrays = [np.asarray(g, dtype=float) for g in groups]
    if any(len(g) == 0 for g in arrays):
        raise ValueError("every group must be non-empty")
    return arrays


def _eta_squared_h(h: float, k: int, n: int) -> float | None:
    return (h - k + 1) / (n - k) if n > k else None


def kruskal_wallis(groups: Sequence[Sequence[float]], labels: Sequence[str] | None = None
                   ) -> TestResult:
    """Tie-corrected H with a chi-squared (k-1 df) p-value and eta^2[H]."""
    arrays = _check_groups(groups)
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(len(arrays)))
    pooled = np.concatenate(arrays)
    n = len(pooled)
    k = len(arrays)
    ranks = rankdata(pooled)
    correction = 1 - _tie_sum(pooled) / (n ** 3 - n) if n > 1 else 0.0
    if correction <= 0:
        h = 0.0
    else:
        bounds = np.cumsum([0] + [len(g) for g in arrays])
        h0 = 12 / (n * (n + 1)) * sum(
            ranks[lo:hi].sum() ** 2 / (hi - lo) for lo, hi in zip(bounds[:-1], bounds[1:])
        ) - 3 * (n + 1)
        h = max(0.0, float(h0) / correction)
    p = _clip_p(chi2.sf(h, k - 1)) if h > 0 else 1.0
    return TestResult("kruskal_wallis", h, p, _eta_squared_h(h, k, n), labels, n)


def holm(p_values: Sequence[float]) -> list[float]:
    m = len(p_values)
    order = sorted(range(m), key=lambda i: p_values[i])
    adjusted = [0.0] * m
    running = 0.0
    for rank, i in enumerate(order):
        running = max(running, (m - rank) * p_values[i])
        adjusted[i] = min(1.0, running)
    return adjusted


def dunn_pairwise(groups: Sequence[Sequence[float]], labels: Sequence[str] | None = None,
                  adjust: Literal["none", "holm"] = "none") -> list[TestResult]:
    """Dunn's z for every pair of groups, two-sided.

    ``z = (mean_rank_i - mean_rank_j) / sqrt((N(N+1)/12 - T) (1/n_i + 1/n_j))``
    with ``T = sum(t^3 - t) / (12 (N - 1))``. Every pair carries the omnibus
    eta^2[H] as its effect size.
    """
    arrays = _check_groups(groups)
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(len(arrays)))
    if adjust not in ("none", "holm"):
        raise ValueError(f"unknown adjustment {adjust!r}")
    omnibus = kruskal_wallis(arrays, labels)
    pooled = np.concatenate(arrays)
    n = len(pooled)
    ranks = rankdata(pooled)
    bounds = np.cumsum([0] + [len(g) for g in arrays])
    mean_ranks = [ranks[lo:hi].mean() for lo, hi in zip(bounds[:-1], bounds[1:])]
    spread = n * (n + 1) / 12 - (_tie_sum(pooled) / (12 * (n - 1)) if n > 1 else 0.0)

    pairs = []
    for i, j in combinations(range(len(arrays)), 2):
        scale = spread * (1 / len(arrays[i]) + 1 / len(arrays[j]))
        z = (mean_ranks[i] - mean_ranks[j]) / math.sqrt(scale) if scale > 0 else 0.0
        pairs.append((i, j, z, _clip_p(2 * norm.sf(abs(z)))))
    raw = [p for *_, p in pairs]
    final = holm(raw) if adjust == "holm" else raw
    return [
        TestResult("dunn_pair", z, p_adj, omnibus.effect_size, (labels[i], labels[j]),
                   len(arrays[i]) + len(arrays[j]), adjust, {"p_unadjusted": p_raw})
        for (i, j, z, p_raw), p_adj in zip(pairs, final)
    ]

