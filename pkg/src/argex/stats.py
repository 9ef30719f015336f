"""Significance tests for binary-selection results.

Self-contained implementations: a one-degree-of-freedom chi-square
goodness-of-fit test against the 50/50 baseline, and the two-sided
Wilcoxon rank-sum test (Mann-Whitney form) with midrank tie handling,
tie-corrected variance, and continuity correction under the normal
approximation.
"""

from __future__ import annotations

import itertools
import math
from typing import NamedTuple, Sequence


def normal_sf(z: float) -> float:
    """Upper tail of the standard normal distribution."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def chi_square_sf(x: float) -> float:
    """Upper tail of the chi-square distribution with one degree of freedom.

    For df=1 the survival function reduces to erfc(sqrt(x/2)).
    """
    if x < 0:
        raise ValueError(f"chi-square statistic must be >= 0, got {x}")
    return math.erfc(math.sqrt(x / 2.0))


class ChiSquareTest(NamedTuple):
    statistic: float
    p_value: float
    yates_statistic: float
    yates_p_value: float


def chi_square_vs_chance(wins: int, n: int) -> ChiSquareTest:
    """Goodness of fit of a win count against the uniform 50/50 split.

    Reported both plain and with Yates' continuity correction; callers
    decide which to quote.
    """
    if n < 1:
        raise ValueError(f"need at least one trial, got n={n}")
    if not 0 <= wins <= n:
        raise ValueError(f"wins={wins} outside [0, {n}]")
    expected = n / 2.0
    losses = n - wins
    statistic = (wins - expected) ** 2 / expected + (losses - expected) ** 2 / expected
    adjusted = max(0.0, abs(wins - expected) - 0.5)
    yates = (adjusted**2 / expected) * 2.0
    return ChiSquareTest(statistic, chi_square_sf(statistic), yates, chi_square_sf(yates))


def rank_data(values: Sequence[float]) -> list[float]:
    """Ranks starting at 1, with tied values sharing their midrank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        midrank = (i + j + 2) / 2.0  # ranks are 1-based
        for pos in range(i, j + 1):
            ranks[order[pos]] = midrank
        i = j + 1
    return ranks


class RankSumTest(NamedTuple):
    statistic: float  # rank sum W of the first sample
    p_value: float
    degenerate: bool  # True when the tie-corrected variance vanished


def wilcoxon_rank_sum(a: Sequence[float], b: Sequence[float]) -> RankSumTest:
    """Two-sided rank-sum test that the two samples share a distribution.

    W is the first sample's rank sum over the pooled midranks. The
    p-value comes from the normal approximation on the larger of the two
    U statistics, with tie-corrected variance and a 0.5 continuity
    correction. A vanishing variance (all pooled values identical) is
    flagged degenerate with p = 1.
    """
    n1, n2 = len(a), len(b)
    if n1 == 0 or n2 == 0:
        raise ValueError("both samples must be non-empty")
    pooled = list(a) + list(b)
    ranks = rank_data(pooled)
    w = sum(ranks[:n1])
    u1 = w - n1 * (n1 + 1) / 2.0
    u2 = n1 * n2 - u1
    u = max(u1, u2)
    total = n1 + n2
    tie_term = 0.0
    for count in _tie_counts(pooled):
        tie_term += count**3 - count
    variance = n1 * n2 / 12.0 * ((total + 1) - tie_term / (total * (total - 1)))
    if variance <= 0.0:
        return RankSumTest(w, 1.0, True)
    z = (u - n1 * n2 / 2.0 - 0.5) / math.sqrt(variance)
    return RankSumTest(w, min(1.0, 2.0 * normal_sf(z)), False)


def _tie_counts(values: Sequence[float]) -> list[int]:
    return [len(list(group)) for _, group in itertools.groupby(sorted(values))]
