"""Elementary d-collapses, collapsibility search, vertex splitting and boosting.

A complex is represented during the search by the sorted tuple of its
maximal-face bitmasks. The void complex (no faces, not even the empty one)
is the empty tuple; it is the target of every collapse sequence. The empty
face is a legal ``L`` (its dimension is -1), so a complex with a single
maximal face always collapses in one step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

from .complex import ColoredComplex, FaceLike, from_mask, popcount, reduce_to_maximal, to_mask

State = tuple[int, ...]


class NotCollapsible(ValueError):
    """Raised when a requested elementary collapse is not legal."""


class BudgetExhausted(RuntimeError):
    def __init__(self, nodes: int):
        super().__init__(f"collapse search budget exhausted after {nodes} nodes")
        self.nodes = nodes


class InvalidWitness(ValueError):
    pass


@dataclass(frozen=True)
class CollapseStep:
    L: tuple[int, ...]
    M: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"L": list(self.L), "M": list(self.M)}


@dataclass
class CollapseSequence:
    d: int
    steps: list[CollapseStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def to_dict(self) -> dict:
        return {"d": self.d, "steps": [s.to_dict() for s in self.steps]}

    @classmethod
    def from_dict(cls, data: dict) -> "CollapseSequence":
        steps = [CollapseStep(tuple(s["L"]), tuple(s["M"])) for s in data["steps"]]
        return cls(int(data["d"]), steps)

    def is_special(self) -> bool:
        return all(is_special_step(to_mask(s.L), to_mask(s.M), self.d) for s in self.steps)


def is_special_step(L: int, M: int, d: int) -> bool:
    """Either a maximal face of dimension <= d-1 is removed, or dim L = d-1."""
    return popcount(L) == d or (L == M and popcount(M) <= d)


def _unique_superface(state: State, L: int) -> int | None:
    found = None
    for M in state:
        if L & ~M == 0:
            if found is not None:
                return None
            found = M
    return found


def _apply(state: State, L: int, M: int) -> State:
    rest = [F for F in state if F != M]
    pieces = [M & ~(1 << v) for v in from_mask(L)]
    return reduce_to_maximal(rest + pieces)


def elementary_collapse(cx: ColoredComplex, L: FaceLike, d: int) -> ColoredComplex:
    """Remove every face containing ``L``; ``L`` must lie in a unique maximal face."""
    Lm = to_mask(L)
    if popcount(Lm) > d:
        raise NotCollapsible(f"dim {from_mask(Lm)} = {popcount(Lm) - 1} exceeds d-1 = {d - 1}")
    M = _unique_superface(cx.maximal, Lm)
    if M is None:
        raise NotCollapsible(f"{from_mask(Lm)} is not contained in a unique maximal face")
    return ColoredComplex(cx.n_per_color, _apply(cx.maximal, Lm, M))


def free_faces(state: State, d: int, special: bool = False) -> list[tuple[int, int]]:
    """All legal (L, M) pairs for one elementary d-collapse, smallest L first."""
    moves = []
    for M in state:
        others = [M & F for F in state if F != M]
        verts = from_mask(M)
        sizes = [d] if special else range(min(d, len(verts)) + 1)
        for s in sizes:
            if s > len(verts):
                continue
            for sub in combinations(verts, s):
                L = to_mask(sub)
                if any(L & ~o == 0 for o in others):
                    continue
                moves.append((L, M))
        if special and popcount(M) < d and not any(M & ~o == 0 for o in others):
            moves.append((M, M))
    moves.sort(key=lambda lm: (popcount(lm[0]), from_mask(lm[0]), from_mask(lm[1])))
    return moves


def _successors(state: State, d: int, special: bool) -> Iterator[tuple[int, int, State]]:
    seen = set()
    for L, M in free_faces(state, d, special):
        nxt = _apply(state, L, M)
        if nxt not in seen:
            seen.add(nxt)
            yield L, M, nxt


def _search(start: State, d: int, budget: int, special: bool) -> list[tuple[int, int]] | None:
    if not start:
        return []
    dead: set[State] = set()
    nodes = 1
    stack = [(start, _successors(start, d, special))]
    path: list[tuple[int, int]] = []
    while stack:
        state, it = stack[-1]
        for L, M, nxt in it:
            if nxt in dead:
                continue
            path.append((L, M))
            if not nxt:
                return path
            nodes += 1
            if nodes > budget:
                raise BudgetExhausted(nodes)
            stack.append((nxt, _successors(nxt, d, special)))
            break
        else:
            dead.add(state)
            stack.pop()
            if path:
                path.pop()
    return None


def find_collapse(
    cx: ColoredComplex, d: int, budget: int = 200_000, special: bool = False
) -> CollapseSequence | None:
    """Search for a d-collapse sequence ending at the void complex.

    Returns ``None`` when the exhaustive search proves that no sequence
    exists. Raises :class:`BudgetExhausted` if more than ``budget`` states
    are expanded. The returned witness has been replayed on ``cx``.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    path = _search(cx.maximal, d, budget, special)
    if path is None:
        return None
    seq = CollapseSequence(d, [CollapseStep(from_mask(L), from_mask(M)) for L, M in path])
    replay(cx, seq)
    return seq


def find_special_collapse(cx: ColoredComplex, d: int, budget: int = 200_000) -> CollapseSequence | None:
    return find_collapse(cx, d, budget, special=True)


def is_collapsible(cx: ColoredComplex, d: int, budget: int = 200_000) -> bool:
    return find_collapse(cx, d, budget) is not None


def replay(cx: ColoredComplex, seq: CollapseSequence, require_special: bool = False) -> list[State]:
    """Check every step of ``seq`` on ``cx``; return the visited states.

    Raises :class:`InvalidWitness` on the first illegal step, or if the
    final complex is not void.
    """
    state = cx.maximal
    states = [state]
    for i, step in enumerate(seq.steps):
        L, M = to_mask(step.L), to_mask(step.M)
        if L & ~M:
            raise InvalidWitness(f"step {i}: L={step.L} is not a subset of M={step.M}")
        if popcount(L) > seq.d:
            raise InvalidWitness(f"step {i}: dim L = {popcount(L) - 1} > d-1")
        if _unique_superface(state, L) != M:
            raise InvalidWitness(f"step {i}: M={step.M} is not the unique maximal face containing L={step.L}")
        if require_special and not is_special_step(L, M, seq.d):
            raise InvalidWitness(f"step {i} is not special")
        state = _apply(state, L, M)
        states.append(state)
    if state:
        raise InvalidWitness(f"sequence ends at {[from_mask(m) for m in state]}, not the void complex")
    return states


# -- vertex splitting and boosting ------------------------------------------------


def _split_mask(mask: int, v: int) -> int:
    low = mask & ((1 << (v + 1)) - 1)
    high = (mask >> (v + 1)) << (v + 2)
    out = low | high
    if mask >> v & 1:
        out |= 1 << (v + 1)
    return out


def split_vertex(cx: ColoredComplex, v: int) -> ColoredComplex:
    """Replace vertex ``v`` by two clones ``v`` and ``v+1`` of the same color.

    Later vertices shift up by one; every maximal face through ``v`` now
    contains both clones.
    """
    i = cx.color_of(v)
    n = list(cx.n_per_color)
    n[i - 1] += 1
    return ColoredComplex(n, [_split_mask(m, v) for m in cx.maximal])


def split_witness(seq: CollapseSequence, v: int) -> CollapseSequence:
    """Turn a collapse sequence of K into one of K split at ``v``.

    Steps with ``v`` in L become two steps, one per clone.
    """
    steps = []
    bit, bit2 = 1 << v, 1 << (v + 1)
    for step in seq.steps:
        L, M = to_mask(step.L), to_mask(step.M)
        M2 = _split_mask(M, v)
        if not L & bit:
            steps.append((_split_mask(L, v), M2))
        else:
            base = _split_mask(L & ~bit, v)
            steps.append((base | bit, M2))
            steps.append((base | bit2, M2 & ~bit))
    return CollapseSequence(seq.d, [CollapseStep(from_mask(L), from_mask(M)) for L, M in steps])


def boost(cx: ColoredComplex, m: int) -> ColoredComplex:
    """Replace each vertex ``u`` by clones ``u*m .. u*m+m-1``; maximal faces S x [m]."""
    if m < 1:
        raise ValueError("m must be positive")
    block = (1 << m) - 1
    faces = []
    for S in cx.maximal:
        faces.append(sum(block << (u * m) for u in from_mask(S)))
    return ColoredComplex([x * m for x in cx.n_per_color], faces)


def boost_witness(cx: ColoredComplex, seq: CollapseSequence, m: int) -> CollapseSequence:
    """Collapse sequence of ``boost(cx, m)`` built by repeated vertex splitting."""
    for u in reversed(range(cx.n)):
        for _ in range(m - 1):
            seq = split_witness(seq, u)
    return seq


def boost_by_splitting(cx: ColoredComplex, m: int) -> ColoredComplex:
    for u in reversed(range(cx.n)):
        for _ in range(m - 1):
            cx = split_vertex(cx, u)
    return cx


def relabel_witness(seq: CollapseSequence, perm: Sequence[int]) -> CollapseSequence:
    """Apply the vertex map ``u -> perm[u]`` to every step."""
    return CollapseSequence(
        seq.d,
        [CollapseStep(tuple(sorted(perm[u] for u in s.L)), tuple(sorted(perm[u] for u in s.M))) for s in seq.steps],
    )
