"""Counting functions, densities and threshold functions for colorful Helly bounds.

Counts are exact integers. Densities and thresholds are floats unless a
``Fraction`` route is requested explicitly.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from math import comb, prod
from typing import NamedTuple, Sequence

import numpy as np

from .complex import ColoredComplex


def binom(a: int, b: int) -> int:
    """Binomial coefficient, zero outside ``0 <= b <= a``."""
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


def falling(x: int, m: int) -> int:
    """Falling factorial x (x-1) ... (x-m+1)."""
    out = 1
    for j in range(m):
        out *= x - j
    return out


@dataclass(frozen=True)
class PParams:
    """Parameters (n, d, r) of the reference family P_k(n, d, r)."""

    n: tuple[int, ...]
    d: int
    r: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(x) for x in self.n))
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        if len(self.n) != len(self.r):
            raise ValueError(f"n={self.n} and r={self.r} differ in length")
        if any(x < 1 for x in self.n):
            raise ValueError(f"all color classes must be nonempty, got n={self.n}")
        if any(not 0 <= ri <= ni for ri, ni in zip(self.r, self.n)):
            raise ValueError(f"need 0 <= r <= n componentwise, got r={self.r}, n={self.n}")
        if self.d < 0:
            raise ValueError("d must be non-negative")

    @property
    def c(self) -> int:
        return len(self.n)

    def reference_mask(self) -> int:
        """Canonical R: the lowest r_i vertices of every color block."""
        mask, off = 0, 0
        for ni, ri in zip(self.n, self.r):
            mask |= ((1 << ri) - 1) << off
            off += ni
        return mask

    def check_k(self, k: Sequence[int]) -> tuple[int, ...]:
        k = tuple(int(x) for x in k)
        if len(k) != self.c:
            raise ValueError(f"k={k} has length {len(k)}, expected {self.c}")
        if any(not 0 <= ki <= ni for ki, ni in zip(k, self.n)):
            raise ValueError(f"need 0 <= k <= n componentwise, got k={k}, n={self.n}")
        return k


def enumerate_P(params: PParams, k: Sequence[int], cap: int = 2_000_000) -> set[tuple[int, ...]]:
    """The k-colorful sets meeting the complement of R in at most d vertices."""
    k = params.check_k(k)
    total = prod(comb(ni, ki) for ni, ki in zip(params.n, k))
    if total > cap:
        raise ValueError(f"{total} candidate sets exceed the enumeration cap {cap}")
    # per block: (chosen vertices, how many of them lie outside R)
    blocks, off = [], 0
    for ni, ri, ki in zip(params.n, params.r, k):
        blocks.append([(part, sum(v >= off + ri for v in part)) for part in combinations(range(off, off + ni), ki)])
        off += ni
    out: set[tuple[int, ...]] = set()

    def extend(i: int, acc: tuple[int, ...], budget: int):
        if i == len(blocks):
            out.add(acc)
            return
        for part, outside in blocks[i]:
            if outside <= budget:
                extend(i + 1, acc + part, budget - outside)

    extend(0, (), params.d)
    return out


@lru_cache(maxsize=4096)
def _L_set_cached(k: tuple[int, ...], d: int) -> tuple[tuple[int, ...], ...]:
    return tuple(L_set(k, d))


def L_set(k: Sequence[int], d: int) -> list[tuple[int, ...]]:
    """Vectors l with 0 <= l <= k and sum(l) <= d."""
    out = []

    def rec(i: int, left: int, acc: list[int]):
        if i == len(k):
            out.append(tuple(acc))
            return
        for li in range(min(k[i], left) + 1):
            acc.append(li)
            rec(i + 1, left - li, acc)
            acc.pop()

    rec(0, d, [])
    return out


def p_closed_form(params: PParams, k: Sequence[int]) -> int:
    k = params.check_k(k)
    return sum(
        prod(binom(ni - ri, li) * binom(ri, ki - li) for ni, ri, ki, li in zip(params.n, params.r, k, l))
        for l in _L_set_cached(k, params.d)
    )


def kim_bound(n: Sequence[int], r: Sequence[int], d: int) -> int:
    """Upper bound n_1...n_{d+1} - prod(n_i - r_i) on the number of colorful d-faces."""
    if len(n) != d + 1 or len(r) != d + 1:
        raise ValueError(f"need d+1 = {d + 1} color classes, got n={tuple(n)}, r={tuple(r)}")
    return prod(n) - prod(ni - ri for ni, ri in zip(n, r))


def density_p_exact(params: PParams, k: Sequence[int]) -> Fraction:
    k = params.check_k(k)
    return Fraction(p_closed_form(params, k), prod(comb(ni, ki) for ni, ki in zip(params.n, k)))


def density_p_falling(params: PParams, k: Sequence[int]) -> float:
    """Density of P_k written with falling factorials, evaluated in floats."""
    k = params.check_k(k)
    total = 0.0
    for l in L_set(k, params.d):
        term = 1.0
        for ni, ri, ki, li in zip(params.n, params.r, k, l):
            num = comb(ki, li) * falling(ni - ri, li) * falling(ri, ki - li)
            term *= num / falling(ni, ki)
        total += term
    return total


def density_p(params: PParams, k: Sequence[int]) -> float:
    return float(density_p_exact(params, k))


def alpha_k(k: Sequence[int], d: int, beta: Sequence[float | Fraction], exact: bool = False) -> float | Fraction:
    """Probability that at most d of the uniform draws exceed their thresholds."""
    if len(beta) != len(k):
        raise ValueError(f"beta has length {len(beta)}, expected {len(k)}")
    if exact:
        betas = [Fraction(b) for b in beta]
        one = Fraction(1)
    else:
        betas = [float(b) for b in beta]
        one = 1.0
    total = 0 * one
    for l in L_set(k, d):
        term = one
        for ki, li, b in zip(k, l, betas):
            term *= comb(ki, li) * (one - b) ** li * b ** (ki - li)
        total += term
    return total


class MonteCarloEstimate(NamedTuple):
    estimate: float
    stderr: float
    samples: int


def alpha_monte_carlo(
    k: Sequence[int], d: int, beta: Sequence[float], samples: int = 1_000_000, seed: int = 0
) -> MonteCarloEstimate:
    """Estimate alpha_k by sampling the layered uniform experiment."""
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    k = [int(x) for x in k]
    thresholds = np.repeat(np.asarray(beta, dtype=float), k)
    ktot = int(sum(k))
    hits = 0
    chunk = 1 << 17
    done = 0
    while done < samples:
        size = min(chunk, samples - done)
        if ktot == 0:
            hits += size
        else:
            x = rng.random((size, ktot))
            exceed = (x > thresholds).sum(axis=1)
            hits += int((exceed <= d).sum())
        done += size
    p = hits / samples
    return MonteCarloEstimate(p, math.sqrt(p * (1 - p) / samples), samples)


def beta_optimal(alpha: float, d: int) -> float:
    return 1 - (1 - alpha) ** (1 / (d + 1))


def beta_bfmop(alpha: float, d: int) -> float:
    return alpha / (d + 1)


def beta_kim(alpha: float, d: int) -> float:
    return max(alpha / (d + 1), 1 - (d + 1) * (1 - alpha) ** (1 / (d + 1)))


# -- verdicts ---------------------------------------------------------------------


@dataclass
class TckpVerdict:
    holds: bool
    f: int
    p: int
    r_used: tuple[int, ...]
    k: tuple[int, ...]
    d: int

    def to_dict(self) -> dict:
        out = asdict(self)
        out["r_used"] = list(self.r_used)
        out["k"] = list(self.k)
        return out


def dims_plus_one(cx: ColoredComplex) -> tuple[int, ...]:
    return tuple(cx.dim_in_color(i) + 1 for i in range(1, cx.c + 1))


def verify_tckp(cx: ColoredComplex, d: int, k: Sequence[int]) -> TckpVerdict:
    """Compare f_k(K) with p_k(n, d, r) where r_i = dim K[N_i] + 1.

    The caller is responsible for ``cx`` being d-collapsible; a violation
    is reported, not raised.
    """
    r = dims_plus_one(cx)
    params = PParams(cx.n_per_color, d, r)
    k = params.check_k(k)
    f = cx.colorful_f(k)
    p = p_closed_form(params, k)
    return TckpVerdict(f <= p, f, p, r, k, d)


@dataclass
class CfhVerdict:
    holds: bool
    alpha: float
    beta: float
    i_witness: int | None
    margins: list[float]

    def to_dict(self) -> dict:
        return asdict(self)


def verify_cfh(cx: ColoredComplex, d: int, tol: float = 1e-9) -> CfhVerdict:
    """Look for a color i with dim K[N_i] >= beta_optimal(alpha, d) n_i - 1.

    ``alpha`` is the fraction of colorful d-faces. A zero fraction makes the
    statement vacuous and is reported as holding with no witness.
    ``margins[i]`` is (dim K[N_i] + 1) - beta n_i.
    """
    if cx.c != d + 1:
        raise ValueError(f"need d+1 = {d + 1} colors, complex has {cx.c}")
    ones = (1,) * cx.c
    alpha = cx.colorful_f(ones) / prod(cx.n_per_color)
    beta = beta_optimal(alpha, d)
    margins = [cx.dim_in_color(i + 1) + 1 - beta * ni for i, ni in enumerate(cx.n_per_color)]
    if alpha == 0:
        return CfhVerdict(True, alpha, beta, None, margins)
    witness = next((i + 1 for i, m in enumerate(margins) if m >= -tol * cx.n_per_color[i]), None)
    return CfhVerdict(witness is not None, alpha, beta, witness, margins)


@dataclass
class KimVerdict:
    holds: bool
    f: int
    bound: int
    r_used: tuple[int, ...]

    def to_dict(self) -> dict:
        out = asdict(self)
        out["r_used"] = list(self.r_used)
        return out


def verify_kim(cx: ColoredComplex, d: int) -> KimVerdict:
    """Colorful d-faces against n_1...n_{d+1} - prod(n_i - r_i), r_i = dim K[N_i] + 1."""
    r = dims_plus_one(cx)
    f = cx.colorful_f((1,) * cx.c)
    bound = kim_bound(cx.n_per_color, r, d)
    return KimVerdict(f <= bound, f, bound, r)
