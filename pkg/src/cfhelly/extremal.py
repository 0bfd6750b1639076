"""The tightness construction: whole-space copies plus hyperplanes in general position.

Each color block of size ``m`` holds ``r_i`` copies of R^d (the lowest
indices of the block) followed by ``m - r_i`` hyperplanes. The nerve is
built combinatorially: a set of vertices is a face iff it contains at most
``d`` hyperplanes.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .bounds import PParams, alpha_k, density_p_exact, p_closed_form
from .collapse import CollapseSequence, find_collapse
from .complex import ColoredComplex


@dataclass(frozen=True)
class ExtremalSpec:
    c: int
    d: int
    m: int
    r: tuple[int, ...]
    beta_prime: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        if self.c < 1 or self.d < 1 or self.m < 1:
            raise ValueError(f"need c, d, m >= 1, got c={self.c}, d={self.d}, m={self.m}")
        if len(self.r) != self.c:
            raise ValueError(f"r={self.r} must have c={self.c} entries")
        if any(not 0 <= ri <= self.m for ri in self.r):
            raise ValueError(f"need 0 <= r_i <= m={self.m}, got r={self.r}")

    @classmethod
    def from_beta(cls, c: int, d: int, m: int, beta_prime: Sequence[float]) -> "ExtremalSpec":
        """r_i = floor(beta'_i m), with beta' read as the decimal it prints as."""
        if len(beta_prime) != c:
            raise ValueError(f"beta_prime must have c={c} entries")
        if any(not 0 < b <= 1 for b in beta_prime):
            raise ValueError(f"beta_prime entries must lie in (0, 1], got {tuple(beta_prime)}")
        r = tuple(math.floor(Fraction(str(b)) * m) for b in beta_prime)
        return cls(c, d, m, r, tuple(float(b) for b in beta_prime))

    @property
    def n(self) -> tuple[int, ...]:
        return (self.m,) * self.c

    def params(self) -> PParams:
        return PParams(self.n, self.d, self.r)


@dataclass(frozen=True)
class ExtremalComplex:
    complex: ColoredComplex
    whole_space: tuple[int, ...]
    hyperplanes: tuple[int, ...]

    def labels(self) -> list[str]:
        ws = set(self.whole_space)
        return ["whole" if v in ws else "hyperplane" for v in range(self.complex.n)]


def build_extremal(spec: ExtremalSpec) -> ExtremalComplex:
    whole, hyper = [], []
    for i, ri in enumerate(spec.r):
        base = i * spec.m
        whole.extend(range(base, base + ri))
        hyper.extend(range(base + ri, base + spec.m))
    size = min(spec.d, len(hyper))
    faces = [list(whole) + list(H) for H in combinations(hyper, size)]
    cx = ColoredComplex(spec.n, faces)
    return ExtremalComplex(cx, tuple(whole), tuple(hyper))


def expected_color_dims(spec: ExtremalSpec) -> tuple[int, ...]:
    return tuple(ri + min(spec.d, spec.m - ri) - 1 for ri in spec.r)


@dataclass
class TightnessReport:
    m: int
    d: int
    k: tuple[int, ...]
    r: tuple[int, ...]
    f_k: int
    p_k: int
    candidates: int
    density: float
    alpha_beta_prime: float | None
    gap: float | None
    color_dims: tuple[int, ...]
    dims_below_r_plus_d: bool
    dims_below_beta_m: bool | None
    meets_alpha_target: bool | None

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("k", "r", "color_dims"):
            out[key] = list(out[key])
        return out


def check_tightness(
    spec: ExtremalSpec,
    k: Sequence[int],
    alpha_target: float | None = None,
    beta: Sequence[float] | None = None,
) -> TightnessReport:
    """Measure how close the construction gets to the optimal threshold.

    ``alpha_beta_prime`` needs ``spec.beta_prime``; ``dims_below_beta_m``
    needs the original ``beta`` (dim K[N_i] < beta_i m - 1 for every i).
    """
    k = tuple(int(x) for x in k)
    ext = build_extremal(spec)
    cx = ext.complex
    f = cx.colorful_f(k)
    params = spec.params()
    p = p_closed_form(params, k)
    total = cx.num_colorful_candidates(k)
    density = f / total
    if spec.beta_prime is not None:
        a = float(alpha_k(k, spec.d, spec.beta_prime))
        gap = abs(density - a)
    else:
        a = gap = None
    dims = tuple(cx.dim_in_color(i) for i in range(1, spec.c + 1))
    below_rd = all(di < ri + spec.d for di, ri in zip(dims, spec.r))
    below_beta = None
    if beta is not None:
        below_beta = all(di < b * spec.m - 1 for di, b in zip(dims, beta))
    meets = None if alpha_target is None else density >= alpha_target
    return TightnessReport(spec.m, spec.d, k, spec.r, f, p, total, density, a, gap, dims, below_rd, below_beta, meets)


def extremal_density_exact(spec: ExtremalSpec, k: Sequence[int]) -> Fraction:
    return density_p_exact(spec.params(), k)


def extremal_is_collapsible(spec: ExtremalSpec, budget: int = 200_000) -> CollapseSequence | None:
    return find_collapse(build_extremal(spec).complex, spec.d, budget)
