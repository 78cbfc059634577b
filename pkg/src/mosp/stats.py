"""Quartile summaries and the paired Wilcoxon signed-rank test."""
from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np

__all__ = ["Summary", "WilcoxonResult", "summarize", "quantile", "wilcoxon_signed_rank", "EXACT_MAX_N"]

Alternative = Literal["two_sided", "greater", "less"]
ALTERNATIVES = ("two_sided", "greater", "less")
EXACT_MAX_N = 20


@dataclass(frozen=True)
class Summary:
    count: int
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class WilcoxonResult:
    n_effective: int
    w_plus: float
    p_value: float
    alternative: Alternative
    method: Literal["exact", "normal_approx"]

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def quantile(sorted_xs: Sequence[float], p: float) -> float:
    """Linear interpolation between order statistics: position ``p (n - 1)`` (0-based)."""
    n = len(sorted_xs)
    h = p * (n - 1)
    lo = math.floor(h)
    hi = min(lo + 1, n - 1)
    return float(sorted_xs[lo] + (h - lo) * (sorted_xs[hi] - sorted_xs[lo]))


def summarize(sample: Sequence[float]) -> Summary:
    xs = sorted(float(x) for x in sample)
    if not xs:
        raise ValueError("cannot summarize an empty sample")
    return Summary(
        count=len(xs),
        min=xs[0],
        q1=quantile(xs, 0.25),
        median=quantile(xs, 0.5),
        q3=quantile(xs, 0.75),
        max=xs[-1],
        mean=math.fsum(xs) / len(xs),
    )


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing their mean rank."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    sv = values[order]
    i = 0
    n = len(values)
    while i < n:
        j = i
        while j + 1 < n and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _exact_distribution(doubled_ranks: Sequence[int]) -> np.ndarray:
    """Counts of every attainable ``2 W+`` over all ``2^n`` sign assignments."""
    dist = np.zeros(sum(doubled_ranks) + 1, dtype=np.float64)
    dist[0] = 1.0
    top = 0
    for r in doubled_ranks:
        # each rank either joins W+ or not: convolve with {0, r}
        dist[r:top + r + 1] += dist[:top + 1].copy()
        top += r
    return dist


def wilcoxon_signed_rank(x: Sequence[float], y: Sequence[float], alternative: Alternative = "two_sided") -> WilcoxonResult:
    """Paired test on ``x - y``; ``greater`` tests whether the differences tend to be positive.

    Zero differences are dropped.  Up to ``EXACT_MAX_N`` remaining pairs the
    p-value comes from the full sign-flip distribution of W+ (ties keep their
    average ranks); beyond that a normal approximation with tie-corrected
    variance and a 0.5 continuity correction is used.
    """
    if alternative not in ALTERNATIVES:
        raise ValueError(f"alternative must be one of {ALTERNATIVES}, got {alternative!r}")
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise ValueError("x and y must be 1-d sequences of equal length")
    if xa.size == 0:
        raise ValueError("need at least one pair")
    diff = xa - ya
    diff = diff[diff != 0]
    n = int(diff.size)
    if n == 0:
        raise ValueError("all differences are zero; no effective pairs")
    ranks = _average_ranks(np.abs(diff))
    w_plus = float(ranks[diff > 0].sum())
    total = n * (n + 1) / 2.0

    if n <= EXACT_MAX_N:
        # average ranks are multiples of 1/2, so doubled ranks are exact integers
        doubled = [int(round(2 * r)) for r in ranks]
        dist = _exact_distribution(doubled)
        w2 = int(round(2 * w_plus))
        denom = 2.0 ** n
        p_ge = dist[w2:].sum() / denom
        p_le = dist[:w2 + 1].sum() / denom
        if alternative == "greater":
            p = p_ge
        elif alternative == "less":
            p = p_le
        else:
            p = min(1.0, 2.0 * min(p_ge, p_le))
        method = "exact"
    else:
        mean = total / 2.0
        _, counts = np.unique(np.abs(diff), return_counts=True)
        var = n * (n + 1) * (2 * n + 1) / 24.0 - float((counts ** 3 - counts).sum()) / 48.0
        sd = math.sqrt(var) if var > 0 else 0.0
        if sd == 0.0:
            p = 1.0
        elif alternative == "greater":
            p = _norm_sf((w_plus - mean - 0.5) / sd)
        elif alternative == "less":
            p = _norm_sf((mean - w_plus - 0.5) / sd)
        else:
            z = (abs(w_plus - mean) - 0.5) / sd
            p = min(1.0, 2.0 * _norm_sf(z))
        method = "normal_approx"
    p = float(min(1.0, max(0.0, p)))
    return WilcoxonResult(n_effective=n, w_plus=w_plus, p_value=p, alternative=alternative, method=method)


def _norm_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))
