"""Exterior algebra over R^N and the A_k / W_k rank certificate.

For a d-collapsible complex K, a block-diagonal generic basis (g_i) and a
color vector k, the certificate builds

* W_k: the span of e_S over the k-colorful faces S of K, and
* A_k: the k-colorful multivectors m with g_T _| m = 0 for every
  (|k|-d)-subset T of the reference set R,

and checks that they meet only in 0 and that dim A_k >= |binom(N,k)| - p_k.
Together these re-derive f_k(K) <= p_k(n, d, r).

Both arithmetic modes use orthogonal blocks whose square submatrices are
all nonsingular. ``float`` draws Haar-random blocks and takes ranks from
singular values; ``exact`` uses rational Cayley transforms and exact
rational elimination. The bound on dim A_k is checked two ways: every g_S
with S outside P_k satisfies the constraints, and (exact mode) the
constraint rows lie in the span of the g_S with S in P_k.
"""

from __future__ import annotations

import hashlib
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .bounds import PParams, p_closed_form
from .collapse import CollapseSequence, find_special_collapse
from .complex import ColoredComplex, from_mask, popcount, to_mask
from .linalg import RowSpace, cayley_orthogonal, exact_det, float_rank


def wedge_sign(S: int, T: int) -> int:
    """Sign of e_S ^ e_T relative to e_{S u T}: (-1)^(pairs s in S, t in T with s > t)."""
    inv = 0
    t = T
    while t:
        low = t & -t
        inv += popcount(S & ~((low << 1) - 1))
        t ^= low
    return -1 if inv & 1 else 1


class MultiVector:
    """Sparse element of the exterior algebra on ``n`` generators.

    ``terms`` maps subset bitmasks to coefficients (ints, Fractions or
    floats); zero coefficients are dropped.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[int, object] | None = None):
        self.n = n
        self.terms = {S: c for S, c in (terms or {}).items() if c != 0}

    @classmethod
    def basis(cls, n: int, S: Iterable[int] | int, coeff=1) -> "MultiVector":
        return cls(n, {to_mask(S): coeff})

    def _check(self, other: "MultiVector"):
        if other.n != self.n:
            raise ValueError(f"ground sets differ: {self.n} vs {other.n}")

    def __add__(self, other: "MultiVector") -> "MultiVector":
        self._check(other)
        out = dict(self.terms)
        for S, c in other.terms.items():
            out[S] = out.get(S, 0) + c
        return MultiVector(self.n, out)

    def __sub__(self, other: "MultiVector") -> "MultiVector":
        return self + other.scale(-1)

    def scale(self, a) -> "MultiVector":
        return MultiVector(self.n, {S: a * c for S, c in self.terms.items()})

    def wedge(self, other: "MultiVector") -> "MultiVector":
        self._check(other)
        out: dict[int, object] = {}
        for S, a in self.terms.items():
            for T, b in other.terms.items():
                if S & T:
                    continue
                U = S | T
                out[U] = out.get(U, 0) + wedge_sign(S, T) * a * b
        return MultiVector(self.n, out)

    __xor__ = wedge

    def interior(self, f: "MultiVector") -> "MultiVector":
        """Left interior product self _| f, adjoint to right wedging by self."""
        self._check(f)
        out: dict[int, object] = {}
        for T, a in self.terms.items():
            for S, b in f.terms.items():
                if T & ~S:
                    continue
                D = S & ~T
                out[D] = out.get(D, 0) + wedge_sign(D, T) * a * b
        return MultiVector(self.n, out)

    def inner(self, other: "MultiVector"):
        self._check(other)
        return sum(c * other.terms.get(S, 0) for S, c in self.terms.items())

    def coefficient(self, S: Iterable[int] | int):
        return self.terms.get(to_mask(S), 0)

    def grades(self) -> set[int]:
        return {popcount(S) for S in self.terms}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiVector):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def isclose(self, other: "MultiVector", atol: float = 1e-9) -> bool:
        diff = self - other
        return all(abs(c) <= atol for c in diff.terms.values())

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = [f"{c}*e{list(from_mask(S))}" for S, c in sorted(self.terms.items())]
        return " + ".join(parts)


def wedge(u: MultiVector, v: MultiVector) -> MultiVector:
    return u.wedge(v)


def interior(g: MultiVector, f: MultiVector) -> MultiVector:
    return g.interior(f)


# -- compound matrices -----------------------------------------------------------


def _det(sub, exact: bool):
    if exact:
        return exact_det(sub)
    return float(np.linalg.det(np.asarray(sub, dtype=float))) if len(sub) else 1.0


def compound(A, k: int):
    """Matrix of k x k minors, rows and columns in lexicographic subset order.

    A numpy array gives a float result; nested lists of ints/Fractions give
    an exact result (list of lists of Fractions).
    """
    exact = not isinstance(A, np.ndarray)
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if k > min(rows, cols):
        raise ValueError(f"k={k} exceeds the matrix shape {rows}x{cols}")
    rsubs = list(combinations(range(rows), k))
    csubs = list(combinations(range(cols), k))
    out = [[_det([[A[i][j] for j in T] for i in S], exact) for T in csubs] for S in rsubs]
    return out if exact else np.array(out, dtype=float)


# -- generic block bases -------------------------------------------------------------


@dataclass
class BlockBasis:
    """Block-diagonal transition matrix: g_i = sum_j a_ij e_j."""

    n_per_color: tuple[int, ...]
    mode: str
    blocks: list
    seed: int
    attempts: int = 1
    minors_checked: int = 0
    exhaustive: bool = True
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    @property
    def n(self) -> int:
        return sum(self.n_per_color)

    def offsets(self) -> list[int]:
        out = [0]
        for x in self.n_per_color:
            out.append(out[-1] + x)
        return out

    def matrix(self):
        """The full n x n matrix (numpy in float mode, lists of Fractions in exact mode)."""
        n, off = self.n, self.offsets()
        if self.exact:
            A = [[Fraction(0)] * n for _ in range(n)]
        else:
            A = np.zeros((n, n))
        for b, blk in enumerate(self.blocks):
            for i in range(self.n_per_color[b]):
                for j in range(self.n_per_color[b]):
                    A[off[b] + i][off[b] + j] = Fraction(blk[i][j]) if self.exact else blk[i][j]
        return A

    def block_minor(self, b: int, rows: tuple[int, ...], cols: tuple[int, ...]):
        key = (b, rows, cols)
        if key not in self._cache:
            blk = self.blocks[b]
            self._cache[key] = _det([[blk[i][j] for j in cols] for i in rows], self.exact)
        return self._cache[key]

    def minor(self, S: int, T: int):
        """det A_{S|T} using the block structure (zero unless signatures match)."""
        off = self.offsets()
        val = Fraction(1) if self.exact else 1.0
        for b in range(len(self.n_per_color)):
            lo, hi = off[b], off[b + 1]
            rows = tuple(v - lo for v in from_mask(S) if lo <= v < hi)
            cols = tuple(v - lo for v in from_mask(T) if lo <= v < hi)
            if len(rows) != len(cols):
                return 0 * val
            if rows:
                val *= self.block_minor(b, rows, cols)
        return val

    def minor_full(self, S: int, T: int):
        """det A_{S|T} computed from the full matrix, ignoring the block structure."""
        A = self.matrix()
        rows, cols = from_mask(S), from_mask(T)
        if len(rows) != len(cols):
            raise ValueError("minor of a non-square submatrix")
        return _det([[A[i][j] for j in cols] for i in rows], self.exact)

    def digest(self) -> str:
        data = [[[str(Fraction(x)) if self.exact else repr(float(x)) for x in row] for row in blk] for blk in self.blocks]
        return hashlib.sha256(repr((self.mode, data)).encode()).hexdigest()[:16]


def _all_minors_nonzero(blk, exact: bool, rng: np.random.Generator, exhaustive: bool, samples: int, tol: float):
    size = len(blk)
    checked = 0

    def ok(rows, cols) -> bool:
        v = _det([[blk[i][j] for j in cols] for i in rows], exact)
        return v != 0 if exact else abs(v) > tol

    if exhaustive:
        for s in range(1, size + 1):
            for rows in combinations(range(size), s):
                for cols in combinations(range(size), s):
                    checked += 1
                    if not ok(rows, cols):
                        return False, checked
        return True, checked
    for _ in range(samples):
        s = int(rng.integers(1, size + 1))
        rows = tuple(sorted(rng.choice(size, s, replace=False).tolist()))
        cols = tuple(sorted(rng.choice(size, s, replace=False).tolist()))
        checked += 1
        if not ok(rows, cols):
            return False, checked
    return True, checked


def generic_block_basis(
    n_per_color: Sequence[int],
    seed: int = 0,
    mode: str = "float",
    coef: int = 30,
    max_attempts: int = 100,
    exhaustive_limit: int = 6,
    samples: int = 2000,
    tol: float = 1e-9,
) -> BlockBasis:
    """Random block-diagonal basis whose blocks have only nonzero square minors.

    Float mode: each block is a Haar-random orthogonal matrix. Exact mode:
    each block is the Cayley transform of a random integer skew-symmetric
    matrix with entries in [-coef, coef], hence exactly orthogonal. Minors are checked
    exhaustively for blocks up to ``exhaustive_limit`` and by sampling above.
    """
    if mode not in ("float", "exact"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    blocks = []
    attempts_total, checked_total, exhaustive_all = 0, 0, True
    for ni in n_per_color:
        for attempt in range(1, max_attempts + 1):
            if mode == "float":
                q, r = np.linalg.qr(rng.standard_normal((ni, ni)))
                blk = q * np.sign(np.diag(r))
            else:
                upper = np.triu(rng.integers(-coef, coef + 1, size=(ni, ni)), 1)
                blk = cayley_orthogonal((upper - upper.T).tolist())
            exhaustive = ni <= exhaustive_limit
            good, checked = _all_minors_nonzero(blk, mode == "exact", rng, exhaustive, samples, tol)
            checked_total += checked
            if good:
                break
        else:
            raise RuntimeError(f"no generic block of size {ni} after {max_attempts} attempts")
        attempts_total += attempt
        exhaustive_all &= exhaustive
        blocks.append(blk)
    return BlockBasis(tuple(int(x) for x in n_per_color), mode, blocks, seed, attempts_total, checked_total, exhaustive_all)


def transition_gS(basis: BlockBasis, S: Iterable[int] | int, restrict: bool = True) -> MultiVector:
    """g_S expanded in the standard basis: sum over T of det A_{S|T} e_T.

    With ``restrict`` only T of the same color signature as S are visited
    (all other minors vanish); otherwise every |S|-subset is used and the
    minor is taken from the full matrix.
    """
    S = to_mask(S)
    n = basis.n
    size = popcount(S)
    terms = {}
    if restrict:
        off = basis.offsets()
        per_block = []
        for b in range(len(basis.n_per_color)):
            lo, hi = off[b], off[b + 1]
            cnt = sum(1 for v in from_mask(S) if lo <= v < hi)
            per_block.append([to_mask(c) for c in combinations(range(lo, hi), cnt)])
        for parts in _product_masks(per_block):
            terms[parts] = basis.minor(S, parts)
    else:
        for T in combinations(range(n), size):
            Tm = to_mask(T)
            terms[Tm] = basis.minor_full(S, Tm)
    return MultiVector(n, terms)


def _product_masks(per_block: list[list[int]]) -> Iterable[int]:
    if not per_block:
        yield 0
        return
    head, rest = per_block[0], per_block[1:]
    for tail in _product_masks(rest):
        for h in head:
            yield h | tail


# -- the certificate ------------------------------------------------------------------


@dataclass
class CertificateReport:
    branch: str
    mode: str
    d: int
    k: tuple[int, ...]
    r: tuple[int, ...]
    total: int
    f_k: int
    p_k: int
    dim_W: int
    dim_A: int | None = None
    dim_A_lower: int | None = None
    dim_intersection: int | None = None
    constraint_rank: int | None = None
    row_space_in_span_gP: bool | None = None
    outside_P_in_kernel: bool | None = None
    spectral_gap: float | None = None
    steps_checked: int | None = None
    steps_independent: bool | None = None
    basis_digest: str = ""
    basis_exhaustive: bool = True
    note: str = ""

    @property
    def holds(self) -> bool:
        if self.branch != "core":
            return self.f_k <= self.p_k
        return self.dim_intersection == 0 and self.dim_A >= self.dim_A_lower

    def to_dict(self) -> dict:
        out = asdict(self)
        out["k"] = list(self.k)
        out["r"] = list(self.r)
        out["holds"] = self.holds
        return out


MAX_GROUND_SET = 12
MAX_COLUMNS = 5000


def constraint_rows(basis: BlockBasis, params: PParams, k: tuple[int, ...], columns: list[int]):
    """Rows of the map m -> (<e_L ^ g_T, m>) over T in binom(R, |k|-d), L of matching signature.

    Columns are the k-colorful sets in ``columns`` order. Zero rows are skipped.
    """
    col_index = {S: j for j, S in enumerate(columns)}
    R = params.reference_mask()
    off = basis.offsets()
    ksum = sum(k)
    zero = Fraction(0) if basis.exact else 0.0
    for T in combinations(from_mask(R), ksum - params.d):
        Tm = to_mask(T)
        t = [sum(1 for v in T if off[b] <= v < off[b + 1]) for b in range(len(k))]
        rest = [ki - ti for ki, ti in zip(k, t)]
        if any(x < 0 for x in rest):
            continue
        per_block = [[to_mask(c) for c in combinations(range(off[b], off[b + 1]), rest[b])] for b in range(len(k))]
        for L in _product_masks(per_block):
            row = [zero] * len(columns)
            nonzero = False
            for S, j in col_index.items():
                if L & ~S:
                    continue
                P = S & ~L
                v = basis.minor(Tm, P)
                if v:
                    row[j] = wedge_sign(L, P) * v
                    nonzero = True
            if nonzero:
                yield row


def certificate(
    cx: ColoredComplex,
    d: int,
    k: Sequence[int],
    basis: BlockBasis,
    witness: CollapseSequence | None = None,
    instrument: bool = True,
    check_row_space: bool = True,
    budget: int = 200_000,
) -> CertificateReport:
    """Run the A_k / W_k argument on ``cx`` and report the dimensions involved.

    ``witness`` should be a special collapse sequence; when ``instrument``
    is set and no witness is given, one is searched for. For every special
    step whose M contains a k-colorful face through L (with |L| = d), the
    columns of the compound matrix C_{|k|-d}(A_{R | M \\ L}) are checked
    for independence.
    """
    k = tuple(int(x) for x in k)
    if tuple(basis.n_per_color) != cx.n_per_color:
        raise ValueError(f"basis is for n={basis.n_per_color}, complex has n={cx.n_per_color}")
    if cx.n > MAX_GROUND_SET:
        raise ValueError(f"ground set of {cx.n} vertices exceeds the limit {MAX_GROUND_SET}")
    r = tuple(cx.dim_in_color(i) + 1 for i in range(1, cx.c + 1))
    params = PParams(cx.n_per_color, d, r)
    k = params.check_k(k)
    columns = list(cx.colorful_candidates(k))
    total = len(columns)
    if total > MAX_COLUMNS:
        raise ValueError(f"{total} k-colorful sets exceed the dense limit {MAX_COLUMNS}")
    faces = [S for S in columns if cx.is_face(S)]
    f = len(faces)
    p = p_closed_form(params, k)
    report = CertificateReport(
        "core", basis.mode, d, k, r, total, f, p, f,
        basis_digest=basis.digest(), basis_exhaustive=basis.exhaustive,
    )
    ksum = sum(k)
    if ksum <= d:
        report.branch = "small_k"
        return report
    if ksum > sum(r):
        report.branch = "large_k"
        return report

    rows = list(constraint_rows(basis, params, k, columns))
    face_idx = [columns.index(S) for S in faces]
    report.dim_A_lower = total - p
    if basis.exact:
        space = RowSpace(total)
        for row in rows:
            space.add(row)
        rank_c = space.rank
        sub = RowSpace(f)
        for row in rows:
            if sub.rank == f:
                break
            sub.add([row[j] for j in face_idx])
        rank_f = sub.rank
        if check_row_space:
            gspace = RowSpace(total)
            for S in columns:
                if bin(S & ~params.reference_mask()).count("1") <= d:
                    g = transition_gS(basis, S)
                    gspace.add([g.terms.get(col, 0) for col in columns])
            report.row_space_in_span_gP = all(gspace.contains(row) for row in rows)
        outside = [S for S in columns if bin(S & ~params.reference_mask()).count("1") > d]
        report.outside_P_in_kernel = all(
            sum(x * transition_gS(basis, S).terms.get(col, 0) for x, col in zip(row, columns)) == 0
            for S in outside
            for row in rows
        )
    else:
        C = np.array(rows, dtype=float).reshape(len(rows), total)
        rank_c, gap_c = float_rank(C)
        rank_f, gap_f = float_rank(C[:, face_idx]) if f else (0, float("inf"))
        report.spectral_gap = min(gap_c, gap_f)
        outside = [S for S in columns if bin(S & ~params.reference_mask()).count("1") > d]
        ok = True
        scale = max(1.0, float(np.abs(C).max())) if C.size else 1.0
        for S in outside:
            g = transition_gS(basis, S)
            vec = np.array([g.terms.get(col, 0.0) for col in columns])
            if C.size and np.abs(C @ vec).max() > 1e-8 * scale:
                ok = False
                break
        report.outside_P_in_kernel = ok
    report.constraint_rank = rank_c
    report.dim_A = total - rank_c
    report.dim_intersection = f - rank_f

    if instrument:
        if witness is None:
            witness = find_special_collapse(cx, d, budget)
        if witness is not None:
            checked, independent = instrument_steps(cx, d, k, basis, params, witness)
            report.steps_checked = checked
            report.steps_independent = independent
    return report


def instrument_steps(
    cx: ColoredComplex, d: int, k: tuple[int, ...], basis: BlockBasis, params: PParams, witness: CollapseSequence
) -> tuple[int, bool]:
    """Check column independence of C_{|k|-d}(A_{R | M \\ L}) along a special collapse."""
    R = from_mask(params.reference_mask())
    ksum = sum(k)
    checked = 0
    for step in witness.steps:
        L, M = to_mask(step.L), to_mask(step.M)
        if popcount(L) != d or popcount(M) < ksum:
            continue
        # is there a k-colorful U with L <= U <= M?
        sig_L, sig_M = cx.signature(L), cx.signature(M)
        if any(not lo <= ki <= hi for lo, ki, hi in zip(sig_L, k, sig_M)):
            continue
        checked += 1
        rest = from_mask(M & ~L)
        colsets = [to_mask(P) for P in combinations(rest, ksum - d)]
        space = RowSpace(len(colsets)) if basis.exact else None
        mat = []
        for T in combinations(R, ksum - d):
            Tm = to_mask(T)
            row = [basis.minor(Tm, P) for P in colsets]
            if space is not None:
                space.add(row)
            else:
                mat.append(row)
        rank = space.rank if space is not None else float_rank(np.array(mat, dtype=float).reshape(-1, len(colsets)))[0]
        if rank != len(colsets):
            return checked, False
    return checked, True
