"""Verification campaigns over exhaustive or random suites of d-collapsible complexes."""

from __future__ import annotations

import hashlib
import json
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product, repeat
from typing import Iterator, Sequence

import numpy as np

from .bounds import PParams, kim_bound, p_closed_form, verify_cfh
from .collapse import BudgetExhausted, CollapseSequence, CollapseStep, find_collapse
from .complex import ColoredComplex, from_mask

State = tuple[int, ...]


# -- exhaustive enumeration by inverse collapses ------------------------------------


def _faces_of(state: State) -> set[int]:
    out: set[int] = set()
    for M in state:
        sub = M
        while True:
            out.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & M
    return out


def _inverse_moves(state: State, n: int, d: int) -> Iterator[tuple[int, int]]:
    """(L, M) such that adding the interval [L, M] gives a complex collapsing back via (L, M)."""
    if not state:
        for M in range(1 << n):
            yield 0, M
        return
    faces = _faces_of(state)
    verts = range(n)
    for s in range(1, d + 1):
        for Lt in combinations(verts, s):
            L = sum(1 << v for v in Lt)
            if L in faces:
                continue
            for X in faces:
                if X & L:
                    continue
                M = X | L
                if all((M & ~(1 << v)) in faces for v in Lt):
                    yield L, M


def _color_permutations(n_per_color: Sequence[int]) -> list[tuple[int, ...]]:
    offsets = [0]
    for x in n_per_color:
        offsets.append(offsets[-1] + x)
    per_block = [list(permutations(range(offsets[i], offsets[i + 1]))) for i in range(len(n_per_color))]
    return [tuple(v for block in combo for v in block) for combo in product(*per_block)]


class _Canonicalizer:
    def __init__(self, n_per_color: Sequence[int], symmetry: bool):
        n = sum(n_per_color)
        perms = _color_permutations(n_per_color) if symmetry else [tuple(range(n))]
        self.perms = perms
        self.tables = []
        for p in perms:
            table = [0] * (1 << n)
            for mask in range(1 << n):
                out = 0
                for v in from_mask(mask):
                    out |= 1 << p[v]
                table[mask] = out
            self.tables.append(table)

    def canon(self, state: State) -> tuple[State, int]:
        best, best_i = None, 0
        for i, table in enumerate(self.tables):
            img = tuple(sorted(map(table.__getitem__, state)))
            if best is None or img < best:
                best, best_i = img, i
        return best, best_i


def enumerate_collapsible(
    n_per_color: Sequence[int], d: int, symmetry: bool = True, limit: int | None = None
) -> Iterator[tuple[ColoredComplex, "WitnessBuilder"]]:
    """Every d-collapsible complex on the given colored vertex set.

    Complexes are generated from the void complex by inverse elementary
    d-collapses, so each one comes with a collapse sequence. With
    ``symmetry`` only one representative per orbit of color-preserving
    vertex permutations is produced.
    """
    n = sum(n_per_color)
    canon = _Canonicalizer(n_per_color, symmetry)
    parent: dict[State, tuple[State, int, int, int] | None] = {(): None}
    queue = deque([()])
    produced = 0
    builder = WitnessBuilder(parent, canon.perms, d)
    seen_raw: set[State] = set()
    while queue:
        state = queue.popleft()
        yield ColoredComplex(n_per_color, state), builder.bind(state)
        produced += 1
        if limit is not None and produced >= limit:
            return
        for L, M in _inverse_moves(state, n, d):
            nxt = tuple(sorted([F for F in state if F & ~M] + [M]))
            if nxt in seen_raw:
                continue
            seen_raw.add(nxt)
            key, pi = canon.canon(nxt)
            if key not in parent:
                parent[key] = (state, L, M, pi)
                queue.append(key)


class WitnessBuilder:
    """Rebuilds collapse sequences from the parent links of the enumeration."""

    def __init__(self, parent, perms, d: int):
        self.parent = parent
        self.perms = perms
        self.d = d
        self._state: State | None = None

    def bind(self, state: State) -> "WitnessBuilder":
        out = WitnessBuilder(self.parent, self.perms, self.d)
        out._state = state
        return out

    def __call__(self) -> CollapseSequence:
        # walk to the root collecting (L, M, pi); later steps must be mapped by all earlier permutations
        chain = []
        state = self._state
        while self.parent[state] is not None:
            prev, L, M, pi = self.parent[state]
            chain.append((L, M, pi))
            state = prev
        steps: list[CollapseStep] = []
        composite = None  # maps vertices of the current representative to the bound state's labels
        for L, M, pi in chain:
            p = self.perms[pi]
            composite = p if composite is None else tuple(composite[p[v]] for v in range(len(p)))
            steps.append(
                CollapseStep(
                    tuple(sorted(composite[v] for v in from_mask(L))),
                    tuple(sorted(composite[v] for v in from_mask(M))),
                )
            )
        return CollapseSequence(self.d, steps)


# -- random sampling -------------------------------------------------------------------


def sample_complex(n_per_color: Sequence[int], d: int, rng: np.random.Generator, max_faces: int = 8) -> ColoredComplex:
    """Random complex spanned by 2..max_faces random faces.

    Face sizes are 1 + Binomial(n-1, (d+1)/n), so most faces sit near
    dimension d where collapsibility is neither automatic nor hopeless.
    """
    n = sum(n_per_color)
    t = int(rng.integers(2, max_faces + 1))
    faces = []
    for _ in range(t):
        s = 1 + int(rng.binomial(n - 1, min(1.0, (d + 1) / n)))
        faces.append(rng.choice(n, s, replace=False).tolist())
    return ColoredComplex(n_per_color, faces)


def random_collapsible_suite(
    n_per_color: Sequence[int], d: int, count: int, seed: int = 0, budget: int = 20_000, max_tries: int | None = None
) -> tuple[list[tuple[ColoredComplex, CollapseSequence]], dict]:
    """Sample until ``count`` complexes are certified d-collapsible."""
    rng = np.random.default_rng(seed)
    out = []
    stats = {"sampled": 0, "not_collapsible": 0, "budget_exhausted": 0}
    max_tries = max_tries or 200 * max(count, 1)
    while len(out) < count and stats["sampled"] < max_tries:
        cx = sample_complex(n_per_color, d, rng)
        stats["sampled"] += 1
        try:
            w = find_collapse(cx, d, budget)
        except BudgetExhausted:
            stats["budget_exhausted"] += 1
            continue
        if w is None:
            stats["not_collapsible"] += 1
            continue
        out.append((cx, w))
    return out, stats


# -- campaign -------------------------------------------------------------------------


@dataclass
class CampaignConfig:
    mode: str = "enumerate"  # "enumerate" or "random"
    colors: int = 2
    min_vertices: int = 2
    max_vertices: int = 5
    n_per_color: list[list[int]] | None = None  # explicit vertex vectors override the range
    d_values: list[int] = field(default_factory=lambda: [1])
    k: list[int] | None = None
    count: int = 100
    seed: int = 0
    budget: int = 20_000
    max_tries: int = 50
    symmetry: bool = True

    def validate(self):
        if self.mode not in ("enumerate", "random"):
            raise ValueError(f"unknown campaign mode {self.mode!r}")
        if self.colors < 1 or not self.d_values or min(self.d_values) < 1:
            raise ValueError("need at least one color and d values >= 1")
        if self.budget < 1 or self.max_tries < 1 or self.count < 0:
            raise ValueError("budgets must be positive and count non-negative")
        if not self.vectors():
            raise ValueError("vertex range is empty")
        if self.k is not None and len(self.k) != self.colors:
            raise ValueError(f"k must have {self.colors} entries")

    def vectors(self) -> list[tuple[int, ...]]:
        if self.n_per_color is not None:
            out = [tuple(int(x) for x in n) for n in self.n_per_color]
            if any(len(n) != self.colors or min(n) < 1 for n in out):
                raise ValueError(f"every vertex vector needs {self.colors} positive entries")
            return out
        return [
            n
            for n in product(range(1, self.max_vertices + 1), repeat=self.colors)
            if self.min_vertices <= sum(n) <= self.max_vertices
        ]


@dataclass
class CampaignReport:
    config: dict
    instances: int = 0
    checks: int = 0
    discarded_not_collapsible: int = 0
    discarded_budget: int = 0
    violations: list[dict] = field(default_factory=list)
    extremes: list[dict] = field(default_factory=list)
    per_class: list[dict] = field(default_factory=list)
    elapsed_seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self, timing: bool = True) -> dict:
        out = asdict(self)
        out["violations"] = sorted(out["violations"], key=lambda v: json.dumps(v, sort_keys=True))
        if not timing:
            out.pop("elapsed_seconds")
        return out

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(timing=False), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def csv_rows(self) -> list[list]:
        rows: list[list] = [["n_per_color", "d", "instances", "checks", "violations", "max_f_over_p"]]
        for pc in self.per_class:
            rows.append(
                [" ".join(map(str, pc["n_per_color"])), pc["d"], pc["instances"], pc["checks"], pc["violations"], pc["max_ratio"]]
            )
        return rows


@lru_cache(maxsize=None)
def _p_cached(n: tuple[int, ...], d: int, r: tuple[int, ...], k: tuple[int, ...]) -> int:
    return p_closed_form(PParams(n, d, r), k)


def check_instance(cx: ColoredComplex, d: int, k: Sequence[int] | None = None) -> tuple[int, list[dict], float, tuple | None]:
    """Run every applicable bound on one complex.

    Returns (checks run, violations, largest f/p over k with |k| > d, the k attaining it).
    """
    n = cx.n_per_color
    r = tuple(cx.dim_in_color(i) + 1 for i in range(1, cx.c + 1))
    counts = cx.signature_counts() if k is None else None
    ks = [tuple(k)] if k is not None else list(cx.all_k())
    checks, violations = 0, []
    best, best_k = -1.0, None
    for kk in ks:
        f = counts.get(kk, 0) if counts is not None else cx.colorful_f(kk)
        p = _p_cached(n, d, r, kk)
        checks += 1
        if f > p:
            violations.append({"check": "f_k<=p_k", "complex": cx.to_dict(), "d": d, "k": list(kk), "f": f, "p": p})
        if p and sum(kk) > d and f / p > best:
            best, best_k = f / p, kk
    if cx.c == d + 1:
        ones = (1,) * cx.c
        f1 = counts.get(ones, 0) if counts is not None else cx.colorful_f(ones)
        bound = kim_bound(n, r, d)
        checks += 1
        if f1 > bound:
            violations.append({"check": "kim", "complex": cx.to_dict(), "d": d, "f": f1, "bound": bound})
        verdict = verify_cfh(cx, d)
        checks += 1
        if not verdict.holds:
            violations.append({"check": "cfh", "complex": cx.to_dict(), "d": d, **verdict.to_dict()})
    return checks, violations, best, best_k


def _run_job(cfg: CampaignConfig, n: tuple[int, ...], d: int, seed: int | None) -> dict:
    """One vertex vector (enumerate mode) or one random instance (random mode)."""
    out = {"n": n, "d": d, "instances": 0, "checks": 0, "violations": [], "not_collapsible": 0, "budget": 0, "best": None}
    if seed is None:
        suite = enumerate_collapsible(n, d, cfg.symmetry)
    else:
        got, stats = random_collapsible_suite(n, d, 1, seed, cfg.budget, max_tries=cfg.max_tries)
        out["not_collapsible"] = stats["not_collapsible"]
        out["budget"] = stats["budget_exhausted"]
        suite = ((cx, (lambda w=w: w)) for cx, w in got)
    best_ratio = 0.0
    for cx, witness in suite:
        checks, viol, ratio, kk = check_instance(cx, d, cfg.k)
        out["instances"] += 1
        out["checks"] += checks
        out["violations"].extend(viol)
        if kk is not None and ratio > best_ratio:
            best_ratio = ratio
            out["best"] = {"complex": cx.to_dict(), "d": d, "k": list(kk), "ratio": round(ratio, 12), "witness": witness}
    if out["best"] is not None:
        out["best"]["witness"] = out["best"]["witness"]().to_dict()
    return out


def _jobs(cfg: CampaignConfig) -> list[tuple[tuple[int, ...], int, int | None]]:
    vectors = cfg.vectors()
    if cfg.mode == "enumerate":
        return [(n, d, None) for d in cfg.d_values for n in vectors]
    seeds = np.random.SeedSequence(cfg.seed).generate_state(max(cfg.count, 1) * 2, dtype=np.uint32)
    pick = np.random.default_rng(cfg.seed)
    jobs = []
    for i in range(cfg.count):
        n = vectors[int(pick.integers(0, len(vectors)))]
        d = cfg.d_values[int(pick.integers(0, len(cfg.d_values)))]
        jobs.append((n, d, int(seeds[2 * i]) << 32 | int(seeds[2 * i + 1])))
    return jobs


def run_campaign(cfg: CampaignConfig, threads: int = 1) -> CampaignReport:
    """Check the bounds on every complex of the configured suite.

    Jobs may run in a process pool; results are merged in job order, so the
    report does not depend on ``threads``.
    """
    cfg.validate()
    start = time.perf_counter()
    report = CampaignReport(config=asdict(cfg))
    jobs = _jobs(cfg)
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_job, repeat(cfg), *zip(*jobs)))
    else:
        results = [_run_job(cfg, *job) for job in jobs]
    classes: dict[tuple, dict] = {}
    for res in results:
        report.instances += res["instances"]
        report.checks += res["checks"]
        report.violations.extend(res["violations"])
        report.discarded_not_collapsible += res["not_collapsible"]
        report.discarded_budget += res["budget"]
        pc = classes.setdefault(
            (res["d"], res["n"]),
            {"n_per_color": list(res["n"]), "d": res["d"], "instances": 0, "checks": 0, "violations": 0, "max_ratio": 0.0, "extreme": None},
        )
        pc["instances"] += res["instances"]
        pc["checks"] += res["checks"]
        pc["violations"] += len(res["violations"])
        if res["best"] is not None and res["best"]["ratio"] > pc["max_ratio"]:
            pc["max_ratio"] = res["best"]["ratio"]
            pc["extreme"] = res["best"]
    for key in sorted(classes):
        pc = classes[key]
        extreme = pc.pop("extreme")
        report.per_class.append(pc)
        if extreme is not None:
            report.extremes.append(extreme)
    report.elapsed_seconds = time.perf_counter() - start
    return report
