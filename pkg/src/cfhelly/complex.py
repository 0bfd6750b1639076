"""Colored simplicial complexes stored by their maximal faces.

Vertices are the integers ``0..n-1``. The color classes are contiguous
blocks: the first ``n_1`` vertices have color 1, the next ``n_2`` color 2,
and so on. Faces are handled internally as integer bitmasks; the public
methods accept any iterable of vertex indices as well.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from itertools import combinations, product
from math import comb, prod
from typing import Iterable, Iterator, Sequence

FaceLike = Iterable[int] | int


def to_mask(face: FaceLike) -> int:
    if isinstance(face, int):
        return face
    mask = 0
    for v in face:
        mask |= 1 << v
    return mask


@lru_cache(maxsize=1 << 16)
def from_mask(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return mask.bit_count()


def _is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def reduce_to_maximal(masks: Iterable[int]) -> tuple[int, ...]:
    """Drop duplicates and every mask contained in another one."""
    uniq = sorted(set(masks), key=lambda m: (-popcount(m), m))
    kept: list[int] = []
    for m in uniq:
        if not any(_is_subset(m, k) for k in kept):
            kept.append(m)
    return tuple(sorted(kept))


class ColoredComplex:
    """Immutable simplicial complex with a vertex partition into color blocks.

    ``maximal_faces`` may contain redundant (non-maximal) faces; they are
    removed on construction. An empty list gives the void complex (no faces
    at all), while ``[[]]`` gives the complex whose only face is the empty set.
    """

    __slots__ = ("n_per_color", "maximal", "offsets", "_color_masks")

    def __init__(self, n_per_color: Sequence[int], maximal_faces: Iterable[FaceLike] = ()):
        n_per_color = tuple(int(x) for x in n_per_color)
        if not n_per_color:
            raise ValueError("at least one color class is required")
        if any(x < 0 for x in n_per_color):
            raise ValueError(f"negative color class size in {n_per_color}")
        offsets = [0]
        for x in n_per_color:
            offsets.append(offsets[-1] + x)
        n = offsets[-1]
        masks = [to_mask(f) for f in maximal_faces]
        for m in masks:
            if m >> n:
                raise ValueError(f"face {from_mask(m)} has a vertex outside [0, {n})")
        self.n_per_color = n_per_color
        self.offsets = tuple(offsets)
        self.maximal = reduce_to_maximal(masks)
        self._color_masks = tuple(
            ((1 << offsets[i + 1]) - 1) ^ ((1 << offsets[i]) - 1) for i in range(len(n_per_color))
        )

    # -- basic structure -------------------------------------------------

    @property
    def n(self) -> int:
        return self.offsets[-1]

    @property
    def c(self) -> int:
        return len(self.n_per_color)

    def color_mask(self, i: int) -> int:
        """Bitmask of color class ``i`` (1-based)."""
        return self._color_masks[i - 1]

    def color_block(self, i: int) -> range:
        return range(self.offsets[i - 1], self.offsets[i])

    def color_of(self, v: int) -> int:
        """1-based color of vertex ``v``."""
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range [0, {self.n})")
        for i in range(self.c):
            if v < self.offsets[i + 1]:
                return i + 1
        raise AssertionError("unreachable")

    def signature(self, face: FaceLike) -> tuple[int, ...]:
        """Number of vertices of ``face`` in each color class."""
        m = to_mask(face)
        return tuple(popcount(m & cm) for cm in self._color_masks)

    def is_void(self) -> bool:
        return not self.maximal

    def is_face(self, face: FaceLike) -> bool:
        m = to_mask(face)
        return any(m & ~M == 0 for M in self.maximal)

    def maximal_faces(self) -> list[tuple[int, ...]]:
        return [from_mask(m) for m in self.maximal]

    @property
    def dim(self) -> int:
        if not self.maximal:
            return -1
        return max(popcount(m) for m in self.maximal) - 1

    def dim_in_color(self, i: int) -> int:
        """Dimension of the subcomplex induced on color class ``i`` (1-based)."""
        cm = self.color_mask(i)
        if not self.maximal:
            return -1
        return max(popcount(m & cm) for m in self.maximal) - 1

    def induced(self, vertices: FaceLike) -> "ColoredComplex":
        """Induced subcomplex on ``vertices``; the vertex numbering is kept."""
        u = to_mask(vertices)
        return ColoredComplex(self.n_per_color, [m & u for m in self.maximal])

    # -- enumeration ------------------------------------------------------

    def faces(self) -> Iterator[int]:
        """Yield every face once, as a bitmask. Exponential in the face sizes."""
        seen: set[int] = set()
        for M in self.maximal:
            verts = from_mask(M)
            for s in range(len(verts) + 1):
                for sub in combinations(verts, s):
                    m = to_mask(sub)
                    if m not in seen:
                        seen.add(m)
                        yield m

    def num_faces(self) -> int:
        return sum(1 for _ in self.faces())

    def signature_counts(self) -> Counter:
        """Counter mapping each color signature to its number of faces."""
        return Counter(self.signature(m) for m in self.faces())

    def colorful_candidates(self, k: Sequence[int]) -> Iterator[int]:
        """All k-colorful subsets of the vertex set, as bitmasks."""
        k = self._check_k(k)
        per_color = [
            [to_mask(s) for s in combinations(self.color_block(i + 1), k[i])] for i in range(self.c)
        ]
        for parts in product(*per_color):
            yield sum(parts)

    def colorful_faces(self, k: Sequence[int]) -> Iterator[int]:
        """Iterate over the k-colorful faces (bitmasks)."""
        for m in self.colorful_candidates(k):
            if self.is_face(m):
                yield m

    def num_colorful_candidates(self, k: Sequence[int]) -> int:
        k = self._check_k(k)
        return prod(comb(ni, ki) for ni, ki in zip(self.n_per_color, k))

    def colorful_f(self, k: Sequence[int], method: str = "auto") -> int:
        """Number of k-colorful faces.

        ``method`` is ``"enumerate"`` (test every k-colorful subset for
        membership), ``"inclusion_exclusion"`` (signed sum over the
        distinct intersections of maximal faces) or ``"auto"``.
        """
        k = self._check_k(k)
        if any(ki > ni for ki, ni in zip(k, self.n_per_color)):
            return 0
        if method == "auto":
            cheap = self.num_colorful_candidates(k) <= 20000
            method = "enumerate" if cheap else "inclusion_exclusion"
        if method == "enumerate":
            return sum(1 for _ in self.colorful_faces(k))
        if method == "inclusion_exclusion":
            return self._colorful_f_ie(k)
        raise ValueError(f"unknown method {method!r}")

    def _colorful_f_ie(self, k: tuple[int, ...]) -> int:
        # signed multiplicity of every distinct intersection of maximal faces
        cms = self._color_masks

        def count(mask: int) -> int:
            return prod(comb(popcount(mask & cm), ki) for cm, ki in zip(cms, k))

        coeff: dict[int, int] = {}
        for F in self.maximal:
            if count(F) == 0:
                continue
            update: dict[int, int] = {F: 1}
            for X, cx in coeff.items():
                Y = X & F
                if count(Y):
                    update[Y] = update.get(Y, 0) - cx
            for Y, dc in update.items():
                v = coeff.get(Y, 0) + dc
                if v:
                    coeff[Y] = v
                else:
                    coeff.pop(Y, None)
        return sum(cx * count(X) for X, cx in coeff.items())

    def density(self, k: Sequence[int]) -> float:
        total = self.num_colorful_candidates(k)
        if total == 0:
            raise ValueError(f"no {tuple(k)}-colorful subsets exist for n={self.n_per_color}")
        return self.colorful_f(k) / total

    def all_k(self) -> Iterator[tuple[int, ...]]:
        """Every color vector ``k <= n``."""
        return product(*(range(ni + 1) for ni in self.n_per_color))

    def _check_k(self, k: Sequence[int]) -> tuple[int, ...]:
        k = tuple(int(x) for x in k)
        if len(k) != self.c:
            raise ValueError(f"color vector {k} has length {len(k)}, expected {self.c}")
        if any(x < 0 for x in k):
            raise ValueError(f"negative entry in color vector {k}")
        return k

    # -- misc -------------------------------------------------------------

    def to_dict(self) -> dict:
        return {"n_per_color": list(self.n_per_color), "maximal_faces": [list(f) for f in self.maximal_faces()]}

    @classmethod
    def from_dict(cls, data: dict) -> "ColoredComplex":
        try:
            n = data["n_per_color"]
            faces = data["maximal_faces"]
        except KeyError as exc:
            raise ValueError(f"complex JSON is missing key {exc}") from None
        return cls(n, [list(f) for f in faces])

    def key(self) -> tuple:
        return (self.n_per_color, self.maximal)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColoredComplex):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"ColoredComplex({list(self.n_per_color)}, {self.maximal_faces()})"


def full_simplex(n_per_color: Sequence[int]) -> ColoredComplex:
    n = sum(n_per_color)
    return ColoredComplex(n_per_color, [range(n)])
