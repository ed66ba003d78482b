"""Paired-comparison statistics: Wilcoxon signed-rank, McNemar with odds
ratios, Holm's correction, Cliff's delta, and Cohen's kappa.

Everything is stdlib math; the Wilcoxon exact branch builds the rank-sum
distribution by convolution, which with midranks equals full sign
enumeration. Degenerate inputs (all-zero differences; chance agreement of
1) return None rather than a fabricated number.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

CLIFF_THRESHOLDS = (0.10, 0.33, 0.474)
WILCOXON_EXACT_MAX_N = 25


@dataclass(frozen=True)
class StatResult:
    p_value: float | None
    effect: float | None = None
    effect_label: str | None = None


def _midranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(values):
        j = i
        while j < len(values) and values[order[j]] == values[order[i]]:
            j += 1
        mid = (i + 1 + j) / 2
        for k in range(i, j):
            ranks[order[k]] = mid
        i = j
    return ranks


def wilcoxon_signed_rank(diffs: list[float]) -> float | None:
    """Two-sided p for paired differences; zeros are dropped first.

    n <= 25 uses the exact sign-enumeration distribution; larger n uses the
    normal approximation with tie correction and continuity correction.
    All differences zero returns None.
    """
    nonzero = [d for d in diffs if d != 0]
    n = len(nonzero)
    if n == 0:
        return None
    ranks = _midranks([abs(d) for d in nonzero])
    w_plus = sum(r for d, r in zip(nonzero, ranks) if d > 0)
    if n <= WILCOXON_EXACT_MAX_N:
        return _wilcoxon_exact(ranks, w_plus)
    mean = n * (n + 1) / 4
    tie_counts = Counter(abs(d) for d in nonzero).values()
    tie_term = sum(t**3 - t for t in tie_counts) / 48
    var = n * (n + 1) * (2 * n + 1) / 24 - tie_term
    if var <= 0:
        return 1.0
    delta = w_plus - mean
    shift = min(0.5, abs(delta))  # continuity correction toward the mean
    z = (abs(delta) - shift) / math.sqrt(var)
    return min(1.0, math.erfc(z / math.sqrt(2)))


def _wilcoxon_exact(ranks: list[float], w_obs: float) -> float:
    # doubled ranks are integers even with midranks; convolve the
    # achievable rank-sum counts over all 2^n sign assignments
    doubled = [round(2 * r) for r in ranks]
    total_sum = sum(doubled)
    counts = [0] * (total_sum + 1)
    counts[0] = 1
    for r in doubled:
        for s in range(total_sum, r - 1, -1):
            if counts[s - r]:
                counts[s] += counts[s - r]
    total = 2 ** len(ranks)
    w2 = round(2 * w_obs)
    le = sum(counts[: w2 + 1])
    ge = sum(counts[w2:])
    p = 2 * min(le / total, ge / total)
    return min(p, 1.0)


def chi2_sf_1df(x: float) -> float:
    """Survival function of the chi-square distribution with 1 df."""
    if x <= 0:
        return 1.0
    return math.erfc(math.sqrt(x / 2))


def mcnemar(outcomes_a: list[bool], outcomes_b: list[bool]) -> tuple[float, float, int, int]:
    """Continuity-corrected McNemar test on paired boolean outcomes.

    Returns (statistic, p_value, b, c) with b = a-only successes and
    c = b-only successes. |b - c| <= 1 clamps the statistic to 0; no
    discordant pairs at all gives p = 1.
    """
    if len(outcomes_a) != len(outcomes_b):
        raise ValueError("paired outcome lists must have equal length")
    b = sum(1 for x, y in zip(outcomes_a, outcomes_b) if x and not y)
    c = sum(1 for x, y in zip(outcomes_a, outcomes_b) if not x and y)
    if b + c == 0:
        return 0.0, 1.0, b, c
    if abs(b - c) <= 1:
        statistic = 0.0
    else:
        statistic = (abs(b - c) - 1) ** 2 / (b + c)
    return statistic, chi2_sf_1df(statistic), b, c


def odds_ratio_paired(b: int, c: int) -> tuple[float, float]:
    """Discordant-pair odds ratio b/c and its Haldane-corrected variant."""
    if b < 0 or c < 0:
        raise ValueError("counts must be non-negative")
    raw = math.inf if c == 0 else b / c
    haldane = (b + 0.5) / (c + 0.5)
    return raw, haldane


def holm(p_values: list[float]) -> list[float]:
    """Holm step-down adjustment, returned in input order."""
    if any(p < 0 or p > 1 for p in p_values):
        raise ValueError("p-values must lie in [0, 1]")
    m = len(p_values)
    order = sorted(range(m), key=lambda i: p_values[i])
    adjusted = [0.0] * m
    running = 0.0
    for rank, idx in enumerate(order):
        running = max(running, (m - rank) * p_values[idx])
        adjusted[idx] = min(1.0, running)
    return adjusted


def cliffs_delta(sample_a: list[float], sample_b: list[float]) -> tuple[float, str]:
    """Dominance effect size d and its magnitude label."""
    if not sample_a or not sample_b:
        raise ValueError("samples must be non-empty")
    gt = lt = 0
    for x in sample_a:
        for y in sample_b:
            if x > y:
                gt += 1
            elif x < y:
                lt += 1
    d = (gt - lt) / (len(sample_a) * len(sample_b))
    return d, cliff_label(d)


def cliff_label(d: float) -> str:
    small, medium, large = CLIFF_THRESHOLDS
    mag = abs(d)
    if mag < small:
        return "negligible"
    if mag < medium:
        return "small"
    if mag < large:
        return "medium"
    return "large"


def cohens_kappa(labels_a: list, labels_b: list) -> float | None:
    """Chance-corrected agreement between two raters over the same items.

    Perfect observed agreement is 1.0 regardless of the chance term;
    a degenerate chance term of 1 with imperfect agreement returns None.
    """
    if len(labels_a) != len(labels_b):
        raise ValueError("label lists must have equal length")
    if not labels_a:
        raise ValueError("label lists must be non-empty")
    n = len(labels_a)
    po = sum(1 for x, y in zip(labels_a, labels_b) if x == y) / n
    if po == 1.0:
        return 1.0
    count_a = Counter(labels_a)
    count_b = Counter(labels_b)
    pe = sum(
        (count_a[k] / n) * (count_b[k] / n)
        for k in set(count_a) | set(count_b)
    )
    if pe >= 1.0:
        return None
    return (po - pe) / (1 - pe)
