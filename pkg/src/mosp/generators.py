"""Seeded benchmark instance generators.

Every instance draws from its own Philox4x64-10 stream whose 128-bit key is
the BLAKE2b digest of ``(family, parameters, seed)``; regenerating one
instance never requires generating another.  Only raw 64-bit words are
taken from the bit generator; every conversion to integers, floats and
normal variates is done here, so outputs do not depend on numpy's
distribution code.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import asdict, dataclass, replace
from typing import Literal

import numpy as np

from .graph import Graph

__all__ = [
    "GenSpec", "Instance", "Stream", "generate", "gen_random", "gen_complete", "gen_grid",
    "gen_correlated_random", "normal_cdf", "equicorrelation_cholesky",
]

Family = Literal["random", "complete", "grid", "correlated_random"]
FAMILIES = ("random", "complete", "grid", "correlated_random")

_TWO_M53 = 2.0 ** -53


class Stream:
    """Deterministic variates from a Philox4x64-10 counter-based generator."""

    def __init__(self, *key_parts):
        digest = hashlib.blake2b(repr(key_parts).encode(), digest_size=16).digest()
        key = np.frombuffer(digest, dtype="<u8").astype(np.uint64)
        self._bits = np.random.Philox(key=key)

    def raw(self, size: int) -> np.ndarray:
        return self._bits.random_raw(size).astype(np.uint64)

    def uniform(self, size: int) -> np.ndarray:
        """Floats in [0, 1) with 53 random bits."""
        return (self.raw(size) >> np.uint64(11)).astype(np.float64) * _TWO_M53

    def integers(self, lo: int, hi: int, size: int) -> np.ndarray:
        """Integers uniform on ``[lo, hi]``."""
        span = hi - lo + 1
        x = np.floor(self.uniform(size) * span).astype(np.int64)
        np.minimum(x, span - 1, out=x)
        return x + lo

    def normals(self, size: int) -> np.ndarray:
        """Standard normal variates by the Box-Muller transform."""
        half = (size + 1) // 2
        u1 = ((self.raw(half) >> np.uint64(11)).astype(np.float64) + 1.0) * _TWO_M53  # (0, 1]
        u2 = self.uniform(half)
        r = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * np.pi * u2
        return np.concatenate([r * np.cos(theta), r * np.sin(theta)])[:size]

    def permutation(self, n: int) -> np.ndarray:
        return np.argsort(self.raw(n), kind="stable").astype(np.int64)


# Abramowitz & Stegun 26.2.17, |error| < 7.5e-8
_P = 0.2316419
_B = (0.319381530, -0.356563782, 1.781477937, -1.821255978, 1.330274429)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def normal_cdf(x) -> np.ndarray:
    """Standard normal CDF; absolute error below 7.5e-8."""
    x = np.asarray(x, dtype=np.float64)
    ax = np.abs(x)
    t = 1.0 / (1.0 + _P * ax)
    poly = t * (_B[0] + t * (_B[1] + t * (_B[2] + t * (_B[3] + t * _B[4]))))
    upper = _INV_SQRT_2PI * np.exp(-0.5 * ax * ax) * poly
    return np.where(x >= 0, 1.0 - upper, upper)


def equicorrelation_cholesky(d: int, rho: float) -> list[list[float]]:
    """Lower Cholesky factor of the d x d matrix with unit diagonal and ``rho`` elsewhere."""
    if d >= 2 and not (-1.0 / (d - 1) < rho < 1.0):
        raise ValueError(
            f"rho={rho} gives a correlation matrix that is not positive definite for d={d}"
        )
    L = [[0.0] * d for _ in range(d)]
    for i in range(d):
        for j in range(i + 1):
            target = 1.0 if i == j else rho
            acc = target - sum(L[i][k] * L[j][k] for k in range(j))
            if i == j:
                if acc <= 0.0:
                    raise ValueError(f"correlation matrix not positive definite (rho={rho})")
                L[i][j] = math.sqrt(acc)
            else:
                L[i][j] = acc / L[j][j]
    return L


@dataclass(frozen=True)
class GenSpec:
    """Parameters of one generated instance.

    ``n`` is the node count, or the side length for ``grid``.  ``m`` is the
    arc budget of ``random`` (default ``10 n``); ``density`` the arc fraction
    of ``correlated_random``.
    """

    family: Family
    n: int
    d: int
    seed: int = 0
    m: int | None = None
    density: float = 0.3
    rho: float = 0.7
    cost_lo: int = 1
    cost_hi: int = 1000

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if self.cost_lo < 0 or self.cost_lo > self.cost_hi:
            raise ValueError(f"invalid cost range [{self.cost_lo}, {self.cost_hi}]")
        if not 0 < self.density <= 1:
            raise ValueError("density must lie in (0, 1]")
        if self.family == "correlated_random" and self.d >= 2:
            if not -1.0 / (self.d - 1) < self.rho < 1.0:
                raise ValueError(f"rho={self.rho} out of range for d={self.d}")

    @property
    def arc_budget(self) -> int | None:
        if self.family == "random":
            return self.m if self.m is not None else 10 * self.n
        if self.family == "correlated_random":
            return math.floor(self.density * self.n * (self.n - 1))
        return None

    @property
    def name(self) -> str:
        parts = [self.family, f"n{self.n}", f"d{self.d}"]
        if self.family == "random":
            parts.append(f"m{self.arc_budget}")
        if self.family == "correlated_random":
            parts += [f"dens{self.density:g}", f"rho{self.rho:g}"]
        if (self.cost_lo, self.cost_hi) != (1, 1000):
            parts.append(f"c{self.cost_lo}-{self.cost_hi}")
        parts.append(f"s{self.seed}")
        return "_".join(parts)

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_dict(cls, data: dict) -> GenSpec:
        return cls(**data)

    def with_seed(self, seed: int) -> GenSpec:
        return replace(self, seed=seed)


@dataclass(frozen=True)
class Instance:
    graph: Graph
    source: int
    target: int
    spec: GenSpec | None = None


def _key(spec: GenSpec) -> tuple:
    return (spec.family, spec.n, spec.d, spec.arc_budget, spec.density, spec.rho,
            spec.cost_lo, spec.cost_hi, spec.seed)


def _cycle_plus_random_arcs(stream: Stream, n: int, m: int):
    if n < 2:
        raise ValueError("random families need n >= 2")
    if not n <= m <= n * (n - 1):
        raise ValueError(f"arc count m={m} outside [{n}, {n * (n - 1)}] for n={n}")
    perm = stream.permutation(n)
    tails = [perm]
    heads = [np.roll(perm, -1)]
    have = np.sort(perm * n + np.roll(perm, -1))
    missing = m - n
    while missing > 0:
        batch = max(64, int(missing * 1.3) + 16)
        cand = stream.integers(0, n - 1, 2 * batch).reshape(batch, 2)
        codes = cand[:, 0] * n + cand[:, 1]
        codes = codes[cand[:, 0] != cand[:, 1]]
        codes = codes[~np.isin(codes, have)]
        _, first = np.unique(codes, return_index=True)
        codes = codes[np.sort(first)][:missing]
        tails.append(codes // n)
        heads.append(codes % n)
        have = np.union1d(have, codes)
        missing -= codes.shape[0]
    return np.concatenate(tails), np.concatenate(heads), int(perm[0]), int(perm[-1])


def gen_random(n: int, m: int, d: int, cost_lo: int = 1, cost_hi: int = 1000, seed: int = 0) -> Instance:
    """Hamiltonian cycle over a random permutation plus ``m - n`` distinct random arcs.

    ``s`` and ``t`` are the first and last node of the permutation.
    """
    spec = GenSpec("random", n, d, seed=seed, m=m, cost_lo=cost_lo, cost_hi=cost_hi)
    stream = Stream(*_key(spec))
    tails, heads, s, t = _cycle_plus_random_arcs(stream, n, m)
    costs = stream.integers(cost_lo, cost_hi, tails.shape[0] * d).reshape(-1, d)
    return Instance(Graph.from_arrays(n, tails, heads, costs), s, t, spec)


def gen_complete(n: int, d: int, cost_lo: int = 1, cost_hi: int = 1000, seed: int = 0) -> Instance:
    if n < 2:
        raise ValueError("complete graphs need n >= 2")
    spec = GenSpec("complete", n, d, seed=seed, cost_lo=cost_lo, cost_hi=cost_hi)
    stream = Stream(*_key(spec))
    u, v = np.divmod(np.arange(n * n, dtype=np.int64), n)
    keep = u != v
    tails, heads = u[keep], v[keep]
    costs = stream.integers(cost_lo, cost_hi, tails.shape[0] * d).reshape(-1, d)
    return Instance(Graph.from_arrays(n, tails, heads, costs), 0, n - 1, spec)


def gen_grid(side: int, d: int, cost_lo: int = 1, cost_hi: int = 1000, seed: int = 0) -> Instance:
    """Square grid, row-major numbering, an arc in each direction between 4-neighbours.

    Each node lists its out-arcs in increasing head order (up, left, right, down).
    """
    if side < 2:
        raise ValueError("grid side must be at least 2")
    spec = GenSpec("grid", side, d, seed=seed, cost_lo=cost_lo, cost_hi=cost_hi)
    stream = Stream(*_key(spec))
    tails, heads = [], []
    for r in range(side):
        for c in range(side):
            u = r * side + c
            for rr, cc in ((r - 1, c), (r, c - 1), (r, c + 1), (r + 1, c)):
                if 0 <= rr < side and 0 <= cc < side:
                    tails.append(u)
                    heads.append(rr * side + cc)
    tails = np.array(tails, dtype=np.int64)
    heads = np.array(heads, dtype=np.int64)
    costs = stream.integers(cost_lo, cost_hi, tails.shape[0] * d).reshape(-1, d)
    return Instance(Graph.from_arrays(side * side, tails, heads, costs), 0, side * side - 1, spec)


def copula_costs(stream: Stream, count: int, d: int, rho: float, cost_lo: int, cost_hi: int) -> np.ndarray:
    """``count`` cost vectors with uniform integer marginals joined by a Gaussian copula."""
    L = equicorrelation_cholesky(d, rho)
    g = stream.normals(count * d).reshape(count, d)
    span = cost_hi - cost_lo + 1
    out = np.empty((count, d), dtype=np.int64)
    for i in range(d):
        z = np.zeros(count)
        for j in range(i + 1):
            z += L[i][j] * g[:, j]
        u = normal_cdf(z)
        c = np.floor(u * span).astype(np.int64)
        np.clip(c, 0, span - 1, out=c)
        out[:, i] = c + cost_lo
    return out


def gen_correlated_random(
    n: int, density: float, d: int, rho: float = 0.7,
    cost_lo: int = 1, cost_hi: int = 1000, seed: int = 0,
) -> Instance:
    """As :func:`gen_random` with ``m = floor(density n (n-1))`` and copula-correlated costs."""
    spec = GenSpec("correlated_random", n, d, seed=seed, density=density, rho=rho,
                   cost_lo=cost_lo, cost_hi=cost_hi)
    m = spec.arc_budget
    if m < n:
        raise ValueError(f"density {density} yields {m} arcs, fewer than n={n}")
    stream = Stream(*_key(spec))
    tails, heads, s, t = _cycle_plus_random_arcs(stream, n, m)
    costs = copula_costs(stream, tails.shape[0], d, rho, cost_lo, cost_hi)
    return Instance(Graph.from_arrays(n, tails, heads, costs), s, t, spec)


def generate(spec: GenSpec) -> Instance:
    if spec.family == "random":
        return gen_random(spec.n, spec.arc_budget, spec.d, spec.cost_lo, spec.cost_hi, spec.seed)
    if spec.family == "complete":
        return gen_complete(spec.n, spec.d, spec.cost_lo, spec.cost_hi, spec.seed)
    if spec.family == "grid":
        return gen_grid(spec.n, spec.d, spec.cost_lo, spec.cost_hi, spec.seed)
    return gen_correlated_random(spec.n, spec.density, spec.d, spec.rho, spec.cost_lo, spec.cost_hi, spec.seed)
