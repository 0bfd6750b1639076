"""Nerves of families of convex polyhedra, decided by exact LP feasibility."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .complex import ColoredComplex, from_mask
from .extremal import ExtremalSpec
from .linalg import int_det

RELATIONS = ("<=", "=")


@dataclass(frozen=True)
class Constraint:
    """a . x <= b or a . x = b."""

    a: tuple[Fraction, ...]
    b: Fraction
    rel: str = "<="

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")


@dataclass(frozen=True)
class ConvexBody:
    kind: str  # "whole" or "hpoly"
    constraints: tuple[Constraint, ...] = ()

    @classmethod
    def whole(cls) -> "ConvexBody":
        return cls("whole")

    @classmethod
    def hyperplane(cls, a: Sequence, b) -> "ConvexBody":
        return cls("hpoly", (Constraint(tuple(Fraction(x) for x in a), Fraction(b), "="),))

    @classmethod
    def box(cls, lo: Sequence, hi: Sequence) -> "ConvexBody":
        d = len(lo)
        cons = []
        for j in range(d):
            e = [Fraction(0)] * d
            e[j] = Fraction(1)
            cons.append(Constraint(tuple(e), Fraction(hi[j])))
            cons.append(Constraint(tuple(-x for x in e), -Fraction(lo[j])))
        return cls("hpoly", tuple(cons))

    @property
    def is_whole(self) -> bool:
        return self.kind == "whole"


@dataclass
class GeometricFamily:
    d: int
    blocks: list[list[ConvexBody]]

    def bodies(self) -> list[ConvexBody]:
        return [b for block in self.blocks for b in block]

    @property
    def n_per_color(self) -> list[int]:
        return [len(b) for b in self.blocks]


# -- exact phase-1 simplex -------------------------------------------------------


def _phase1_feasible(A: list[list[Fraction]], b: list[Fraction]) -> bool:
    """Is {y >= 0 : A y = b} nonempty?  Bland's rule, exact arithmetic."""
    m = len(A)
    if m == 0:
        return True
    n = len(A[0])
    rows = []
    for i in range(m):
        if b[i] < 0:
            rows.append([-x for x in A[i]] + [Fraction(int(j == i)) for j in range(m)] + [-b[i]])
        else:
            rows.append(list(A[i]) + [Fraction(int(j == i)) for j in range(m)] + [b[i]])
    width = n + m
    basis = [n + i for i in range(m)]
    # reduced costs of the phase-1 objective (sum of artificials)
    cost = [-sum(rows[i][j] for i in range(m)) for j in range(n)] + [Fraction(0)] * m
    value = -sum(rows[i][-1] for i in range(m))
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best, leave = None, None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # unbounded direction cannot occur for the phase-1 objective
            raise AssertionError("phase-1 problem reported unbounded")
        piv = rows[leave][enter]
        prow = [x / piv for x in rows[leave]]
        rows[leave] = prow
        for i in range(m):
            if i != leave and rows[i][enter]:
                f = rows[i][enter]
                rows[i] = [x - f * y for x, y in zip(rows[i], prow)]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, prow[:-1])]
        value -= f * prow[-1]
        basis[leave] = enter
    return value == 0


def feasible(bodies: Sequence[ConvexBody], d: int) -> bool:
    """Do the bodies have a common point?  Whole-space members are ignored."""
    cons = [c for body in bodies if not body.is_whole for c in body.constraints]
    for c in cons:
        if len(c.a) != d:
            raise ValueError(f"constraint of dimension {len(c.a)} in a family of dimension {d}")
    if not cons:
        return True
    ineq = [c for c in cons if c.rel == "<="]
    A, b = [], []
    for c in cons:
        # x = u - w with u, w >= 0, one slack per inequality
        row = list(c.a) + [-x for x in c.a]
        row += [Fraction(int(c is s)) for s in ineq]
        A.append(row)
        b.append(c.b)
    return _phase1_feasible(A, b)


# -- nerve -------------------------------------------------------------------------


class FaceCapExceeded(RuntimeError):
    def __init__(self, cap: int, example: tuple[int, ...]):
        super().__init__(f"nerve has a face of size {cap + 1} > cap {cap}, e.g. {example}")
        self.cap = cap
        self.example = example


def nerve(
    fam: GeometricFamily,
    max_face_size: int | None = None,
    helly: bool = True,
    lp_cache: dict | None = None,
) -> ColoredComplex:
    """Nerve of the family, colored by block.

    With ``helly`` on, a set larger than d+1 whose facets are all faces is a
    face without an LP call. If faces larger than ``max_face_size`` exist,
    :class:`FaceCapExceeded` is raised. ``lp_cache`` maps tuples of bodies
    to feasibility and may be shared between calls on related families.
    """
    bodies = fam.bodies()
    n = len(bodies)
    cap = n if max_face_size is None else max_face_size
    whole_mask = sum(1 << i for i, b in enumerate(bodies) if b.is_whole)
    cache: dict[int, bool] = {}

    def lp(mask: int) -> bool:
        key = mask & ~whole_mask
        if key not in cache:
            members = tuple(bodies[i] for i in from_mask(key))
            if lp_cache is None:
                cache[key] = feasible(members, fam.d)
            else:
                shared = (fam.d, members)
                if shared not in lp_cache:
                    lp_cache[shared] = feasible(members, fam.d)
                cache[key] = lp_cache[shared]
        return cache[key]

    levels: list[set[int]] = [{0}]
    size = 0
    while levels[-1]:
        size += 1
        prev = levels[-1]
        nxt = set()
        for F in prev:
            top = F.bit_length()
            for v in range(top, n):
                G = F | (1 << v)
                if any((G & ~(1 << u)) not in prev for u in from_mask(F)):
                    continue
                if (helly and size > fam.d + 1) or lp(G):
                    nxt.add(G)
        if size > cap:
            if nxt:
                raise FaceCapExceeded(cap, from_mask(min(nxt)))
            break
        levels.append(nxt)
    maximal = []
    for s, level in enumerate(levels):
        above = levels[s + 1] if s + 1 < len(levels) else set()
        covered = {G & ~(1 << u) for G in above for u in from_mask(G)}
        maximal.extend(F for F in level if F not in covered)
    return ColoredComplex(fam.n_per_color, maximal)


# -- generic hyperplanes --------------------------------------------------------------


@dataclass
class GenericityCertificate:
    ok: bool
    independent_subsets_checked: int
    inconsistent_subsets_checked: int
    attempts: int
    digest: str = field(default="")


def check_generic(normals: list[list[int]], offsets: list[int], d: int) -> tuple[bool, int, int]:
    """Every d of the hyperplanes meet in a point and no d+1 share a point."""
    count = len(normals)
    ind = inc = 0
    if count < d:
        # independent normals: some count x count minor is nonzero
        ok = count == 0 or any(
            int_det([[normals[i][j] for j in cols] for i in range(count)]) != 0
            for cols in combinations(range(d), count)
        )
        return ok, 1, 0
    for idx in combinations(range(count), d):
        ind += 1
        if int_det([normals[i] for i in idx]) == 0:
            return False, ind, inc
    for idx in combinations(range(count), d + 1):
        inc += 1
        if int_det([normals[i] + [offsets[i]] for i in idx]) == 0:
            return False, ind, inc
    return True, ind, inc


def random_generic_hyperplanes(
    count: int, d: int, seed: int = 0, coef: int = 1000, max_attempts: int = 50
) -> tuple[list[ConvexBody], GenericityCertificate]:
    """Hyperplanes a.x = b with integer coefficients in [-coef, coef], in general position."""
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_attempts + 1):
        normals = rng.integers(-coef, coef + 1, size=(count, d)).tolist()
        offsets = rng.integers(-coef, coef + 1, size=count).tolist()
        if any(not any(row) for row in normals):
            continue
        ok, ind, inc = check_generic(normals, offsets, d)
        if ok:
            digest = hashlib.sha256(repr((normals, offsets)).encode()).hexdigest()[:16]
            cert = GenericityCertificate(True, ind, inc, attempt, digest)
            return [ConvexBody.hyperplane(a, b) for a, b in zip(normals, offsets)], cert
    raise RuntimeError(f"no generic configuration found after {max_attempts} attempts")


def realize_extremal(spec: ExtremalSpec, seed: int = 0) -> tuple[GeometricFamily, GenericityCertificate]:
    """Geometric family for the construction: per block r_i copies of R^d, then hyperplanes."""
    h = sum(spec.m - ri for ri in spec.r)
    planes, cert = random_generic_hyperplanes(h, spec.d, seed)
    it = iter(planes)
    blocks = []
    for ri in spec.r:
        blocks.append([ConvexBody.whole() for _ in range(ri)] + [next(it) for _ in range(spec.m - ri)])
    return GeometricFamily(spec.d, blocks), cert


# -- JSON --------------------------------------------------------------------------------


def _frac(x) -> Fraction:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return Fraction(str(x).strip())


def _frac_str(x: Fraction) -> str:
    return str(x)


def body_from_dict(data: dict, d: int) -> ConvexBody:
    kind = data.get("kind")
    if kind == "whole":
        return ConvexBody.whole()
    if kind != "hpoly":
        raise ValueError(f"unknown body kind {kind!r}")
    cons = []
    for c in data.get("constraints", []):
        a = tuple(_frac(x) for x in c["a"])
        if len(a) != d:
            raise ValueError(f"constraint {c} does not live in dimension {d}")
        b = _frac(c["b"])
        rel = c.get("rel", "<=")
        if rel == ">=":
            a, b, rel = tuple(-x for x in a), -b, "<="
        elif rel == "==":
            rel = "="
        cons.append(Constraint(a, b, rel))
    return ConvexBody("hpoly", tuple(cons))


def body_to_dict(body: ConvexBody) -> dict:
    if body.is_whole:
        return {"kind": "whole"}
    return {
        "kind": "hpoly",
        "constraints": [{"a": [_frac_str(x) for x in c.a], "b": _frac_str(c.b), "rel": c.rel} for c in body.constraints],
    }


def family_from_dict(data: dict) -> GeometricFamily:
    d = int(data["d"])
    blocks = [[body_from_dict(b, d) for b in block] for block in data["blocks"]]
    if not blocks or any(not block for block in blocks):
        raise ValueError("a family needs at least one block and no empty blocks")
    return GeometricFamily(d, blocks)


def family_to_dict(fam: GeometricFamily) -> dict:
    return {"d": fam.d, "blocks": [[body_to_dict(b) for b in block] for block in fam.blocks]}
