"""Arrow contraction, the induced path map, and the maximal nonrigid driver."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .matchings import Nondegeneracy, classify, nondegeneracy
from .pathalg import (
    DEFAULT_MAX_STATES,
    DEFAULT_ORACLE_LEN,
    BudgetExhausted,
    RewriteVerdict,
    Verdict,
    cancellation_oracle,
    paths_equal_mod_I,
    relation_generators,
)
from .quiver import Arrow, DimerQuiver, Face, Path, check_path, gauge_transform, validate


class ContractionError(ValueError):
    """A contraction request that the construction cannot honour."""


@dataclass(frozen=True)
class ContractionStep:
    source: DimerQuiver
    arrow: int
    target: DimerQuiver
    vertex_map: tuple[int, ...]
    arrow_map: tuple[int | None, ...]  # None for the contracted arrow


@dataclass(frozen=True)
class ContractionSequence:
    source: DimerQuiver
    steps: tuple[ContractionStep, ...]
    maximal: bool = False

    @property
    def target(self) -> DimerQuiver:
        return self.steps[-1].target if self.steps else self.source

    @property
    def vertex_map(self) -> tuple[int, ...]:
        vm = tuple(range(self.source.n_vertices))
        for s in self.steps:
            vm = tuple(s.vertex_map[v] for v in vm)
        return vm

    @property
    def arrow_map(self) -> tuple[int | None, ...]:
        am: tuple[int | None, ...] = tuple(range(self.source.n_arrows))
        for s in self.steps:
            am = tuple(None if a is None else s.arrow_map[a] for a in am)
        return am

    @property
    def contracted(self) -> frozenset[int]:
        """Source ids of all contracted arrows."""
        return frozenset(a for a, b in enumerate(self.arrow_map) if b is None)


def contract_arrow(q: DimerQuiver, delta: int) -> ContractionStep:
    """Collapse the non-loop arrow ``delta``; its tail merges into its head.

    The quiver is first gauged so that ``delta`` has zero winding, which keeps
    the class of every surviving cycle literally unchanged.  Vertices and
    arrows are renumbered densely in their old order.
    """
    d = q.arrows[delta]
    if d.is_loop:
        raise ContractionError(f"arrow {q.arrow_name(delta)} is a loop; contracting it would collapse a cycle")
    g = [(0, 0)] * q.n_vertices
    g[d.tail] = d.winding
    gq = gauge_transform(q, g)

    vmap = []
    for v in range(q.n_vertices):
        if v == d.tail:
            vmap.append(None)
        else:
            vmap.append(len([w for w in range(v) if w != d.tail]))
    vmap[d.tail] = vmap[d.head]
    amap: list[int | None] = []
    arrows = []
    for a in gq.arrows:
        if a.id == delta:
            amap.append(None)
            continue
        amap.append(len(arrows))
        arrows.append(Arrow(len(arrows), vmap[a.tail], vmap[a.head], a.winding, a.label))
    faces = []
    for f in q.faces:
        if len(f.boundary) == 1 and f.boundary[0] == delta:
            raise ContractionError("a length-1 face through a non-loop arrow")
        faces.append(Face(f.id, f.sign, tuple(amap[a] for a in f.boundary if a != delta)))
    target = DimerQuiver(q.n_vertices - 1, tuple(arrows), tuple(faces), q.name and f"{q.name}/{q.arrow_name(delta)}")
    report = validate(target)
    if not report.ok:
        raise ContractionError(f"contracting {q.arrow_name(delta)} broke the dimer axioms: {report.violations}")
    return ContractionStep(q, delta, target, tuple(vmap), tuple(amap))


def _is_forest(q: DimerQuiver, arrows: Iterable[int]) -> bool:
    parent = list(range(q.n_vertices))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a in arrows:
        x, y = find(q.arrows[a].tail), find(q.arrows[a].head)
        if x == y:
            return False
        parent[x] = y
    return True


def contract_set(q: DimerQuiver, arrows: Iterable[int | str]) -> ContractionSequence:
    """Contract an arbitrary arrow set, one arrow at a time in id order.

    The set must not contain an unoriented cycle (that would collapse a cycle
    to a vertex and the map would not induce one of dimer algebras).
    Rigidity is not required here.
    """
    ids = sorted({q.arrow_id(a) for a in arrows})
    if not _is_forest(q, ids):
        raise ContractionError("the arrow set contains an unoriented cycle")
    steps = []
    cur = q
    amap: list[int | None] = list(range(q.n_arrows))
    for a in ids:
        step = contract_arrow(cur, amap[a])
        steps.append(step)
        amap = [None if b is None else step.arrow_map[b] for b in amap]
        cur = step.target
    return ContractionSequence(q, tuple(steps))


def psi_path(seq: ContractionSequence, p: Path) -> Path:
    """Image of a source path: contracted arrows dropped, vertices mapped."""
    check_path(seq.source, p)
    am = seq.arrow_map
    return Path(seq.vertex_map[p.tail], tuple(am[a] for a in p.arrows if am[a] is not None))


@dataclass(frozen=True)
class RelationCheck:
    generator_arrow: int
    images: tuple[Path, Path]
    verdict: RewriteVerdict


@dataclass(frozen=True)
class RelationReport:
    checks: tuple[RelationCheck, ...]

    @property
    def failures(self) -> tuple[RelationCheck, ...]:
        return tuple(c for c in self.checks if not c.verdict.equal)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_relations_preserved(seq: ContractionSequence, max_states: int = DEFAULT_MAX_STATES) -> RelationReport:
    """psi(p) = psi(q) modulo I' for every relation generator p - q of the source."""
    checks = []
    for g in relation_generators(seq.source):
        a, b = psi_path(seq, g.plus), psi_path(seq, g.minus)
        checks.append(RelationCheck(g.arrow, (a, b), paths_equal_mod_I(seq.target, a, b, max_states=max_states)))
    return RelationReport(tuple(checks))


# -- cancellativity ------------------------------------------------------------


class Tri(enum.Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


class OracleDisagreement(AssertionError):
    """The simple-matching criterion and the cancellation search disagree."""


def is_cancellative(
    q: DimerQuiver,
    oracle_len: int | None = DEFAULT_ORACLE_LEN,
    max_states: int = DEFAULT_MAX_STATES,
) -> Tri:
    """Every arrow in a simple matching, cross-checked by a bounded search.

    A witness found while every arrow lies in a simple matching is a hard
    error.  With ``oracle_len=None`` the search is skipped.
    """
    cat = classify(q)
    covered = {a for D in cat.simple_matchings for a in D.arrows}
    arrows = set(range(q.n_arrows)) - cat.pseudo
    verdict = Tri.YES if arrows <= covered else Tri.NO
    if oracle_len is None:
        return verdict
    try:
        witness = cancellation_oracle(q, oracle_len, max_states)
    except BudgetExhausted:
        return verdict
    if verdict is Tri.YES and witness is not None:
        raise OracleDisagreement(f"simple matchings cover every arrow but {witness} cancels")
    return verdict


# -- the maximal driver --------------------------------------------------------

TieBreak = Callable[[DimerQuiver, Sequence[int]], int]


def smallest_id(q: DimerQuiver, candidates: Sequence[int]) -> int:
    return min(candidates)


def seeded(seed: int) -> TieBreak:
    rng = random.Random(seed)

    def pick(q: DimerQuiver, candidates: Sequence[int]) -> int:
        return rng.choice(sorted(candidates))

    pick.__name__ = f"seed:{seed}"
    return pick


def parse_tie_break(text: str | None) -> TieBreak:
    if text in (None, "", "id"):
        return smallest_id
    if text.startswith("seed:"):
        return seeded(int(text[5:]))
    raise ValueError(f"tie-break must be 'id' or 'seed:N', got {text!r}")


class DriverError(RuntimeError):
    """The maximal driver met an input or state the theory rules out."""


def maximal_contraction_sequence(
    q: DimerQuiver,
    tie_break: TieBreak = smallest_id,
    check_postconditions: bool = True,
    oracle_len: int | None = DEFAULT_ORACLE_LEN,
    max_states: int = DEFAULT_MAX_STATES,
) -> ContractionSequence:
    """Contract one nonrigid arrow at a time until none is left.

    Rigidity is recomputed from scratch after every step.
    """
    nd = nondegeneracy(q, max_states=max_states)
    if nd is Nondegeneracy.DEGENERATE:
        raise DriverError(f"{q.name or 'quiver'} is degenerate; no cyclic contraction is promised")
    steps: list[ContractionStep] = []
    cur = q
    while True:
        cat = classify(cur)
        candidates = sorted(cat.nonrigid_arrows)
        if not candidates:
            break
        a = tie_break(cur, candidates)
        if cur.arrows[a].is_loop:
            raise DriverError(f"nonrigid arrow {cur.arrow_name(a)} is a loop")
        step = contract_arrow(cur, a)
        steps.append(step)
        cur = step.target
    seq = ContractionSequence(q, tuple(steps), maximal=True)
    if check_postconditions:
        _check_target(cur, oracle_len, max_states)
    return seq


def _check_target(t: DimerQuiver, oracle_len: int | None, max_states: int = DEFAULT_MAX_STATES) -> None:
    nd = nondegeneracy(t, max_states=max_states)
    if nd is Nondegeneracy.INCONCLUSIVE:
        raise BudgetExhausted("nondegeneracy of the final quiver is undecided within the state budget")
    if nd is not Nondegeneracy.NONDEGENERATE:
        raise DriverError("final quiver is degenerate")
    cat = classify(t)
    in_rigid = {a for D, r in zip(cat.matchings, cat.rigid) if r for a in D.arrows}
    missing = set(range(t.n_arrows)) - cat.pseudo - in_rigid
    if missing:
        raise DriverError(f"arrows {sorted(missing)} lie in no rigid matching")
    if is_cancellative(t, oracle_len, max_states) is not Tri.YES:
        raise DriverError("final quiver is not cancellative")


def step_lines(seq: ContractionSequence) -> list[str]:
    out = []
    for k, s in enumerate(seq.steps):
        a = s.source.arrows[s.arrow]
        m = s.source.n_vertices
        out.append(
            f"step {k}: contract arrow {s.arrow} ({a.tail}->{a.head}), |Q0| {m} -> {m - 1}"
        )
    return out
