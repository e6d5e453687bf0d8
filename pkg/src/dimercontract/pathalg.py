"""Paths modulo the relation ideal: generators, bounded rewriting, cycles."""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .quiver import (
    DimerQuiver,
    Homology,
    Path,
    StructuralError,
    check_path,
    face_transversals,
    homology_class,
)

DEFAULT_MAX_STATES = 10**6
DEFAULT_ORACLE_LEN = 8


class BudgetExhausted(RuntimeError):
    """A bounded search hit its state cap before deciding."""


class Verdict(enum.Enum):
    EQUAL = "equal"
    DISTINCT = "distinct-within-budget"
    EXHAUSTED = "budget-exhausted"


@dataclass(frozen=True)
class RewriteVerdict:
    status: Verdict
    chain: tuple[Path, ...] = ()
    reason: str = ""

    @property
    def equal(self) -> bool:
        return self.status is Verdict.EQUAL


@dataclass(frozen=True)
class RelationGenerator:
    """p - q in I, where p+a and q+a are the two unit cycles through ``arrow``.

    ``plus`` comes from the + face and ``minus`` from the - face; both run
    from h(arrow) to t(arrow).
    """

    arrow: int
    plus: Path
    minus: Path


@lru_cache(maxsize=256)
def relation_generators(q: DimerQuiver) -> tuple[RelationGenerator, ...]:
    out = []
    for a in q.arrows:
        sides = {}
        for f in q.faces_of[a.id]:
            b = q.faces[f].boundary
            i = b.index(a.id)
            rest = b[i + 1 :] + b[:i]
            sides[q.faces[f].sign] = Path(a.head, rest)
        out.append(RelationGenerator(a.id, sides[1], sides[-1]))
    return tuple(out)


@dataclass(frozen=True)
class _Rules:
    by_first: dict  # first arrow -> list of (lhs, rhs)
    by_vertex: dict  # vertex -> list of rhs, for rules with trivial lhs


@lru_cache(maxsize=256)
def _rules(q: DimerQuiver, drop: frozenset[int] = frozenset()) -> _Rules:
    """Rewrite rules both ways round; arrows in ``drop`` are read as vertices."""
    by_first: dict = defaultdict(list)
    by_vertex: dict = defaultdict(list)
    for g in relation_generators(q):
        p = tuple(a for a in g.plus.arrows if a not in drop)
        r = tuple(a for a in g.minus.arrows if a not in drop)
        if p == r:
            continue
        for lhs, rhs in ((p, r), (r, p)):
            if lhs:
                by_first[lhs[0]].append((lhs, rhs))
            else:
                by_vertex[g.plus.tail].append(rhs)
    return _Rules(dict(by_first), dict(by_vertex))


def rewrites(q: DimerQuiver, tail: int, arrows: tuple[int, ...], max_len: int):
    """Paths one relation application away from ``arrows`` (length <= max_len)."""
    return _apply(q, _rules(q), tail, arrows, max_len)


def _apply(q: DimerQuiver, rules: _Rules, tail: int, arrows: tuple[int, ...], max_len: int):
    n = len(arrows)
    for i, a in enumerate(arrows):
        for lhs, rhs in rules.by_first.get(a, ()):
            k = len(lhs)
            if n - k + len(rhs) > max_len:
                continue
            if arrows[i : i + k] == lhs:
                yield arrows[:i] + rhs + arrows[i + k :]
    if rules.by_vertex:
        at = tail
        for j in range(n + 1):
            if j:
                at = q.arrows[arrows[j - 1]].head
            for rhs in rules.by_vertex.get(at, ()):
                if n + len(rhs) <= max_len:
                    yield arrows[:j] + rhs + arrows[j:]


@lru_cache(maxsize=256)
def _transversals(q: DimerQuiver) -> np.ndarray:
    return face_transversals(q)


def _invariants(q: DimerQuiver, p: Path):
    counts = np.bincount(np.asarray(p.arrows, dtype=np.int64), minlength=q.n_arrows)
    return homology_class(q, p), tuple(_transversals(q) @ counts)


def paths_equal_mod_I(
    q: DimerQuiver,
    p: Path,
    r: Path,
    max_len: int | None = None,
    max_states: int = DEFAULT_MAX_STATES,
) -> RewriteVerdict:
    """Semi-decide p = r modulo I by a bidirectional bounded rewriting closure.

    ``equal`` always carries a replayable chain from p to r.  Two rewrite
    invariants are compared first: the homology class and the number of
    arrows from each face transversal.
    """
    check_path(q, p)
    check_path(q, r)
    if p.tail != r.tail or q.head_of(p) != q.head_of(r):
        raise StructuralError("paths must share head and tail")
    if p.arrows == r.arrows:
        return RewriteVerdict(Verdict.EQUAL, (p,))
    hp, np_ = _invariants(q, p)
    hr, nr = _invariants(q, r)
    if hp != hr:
        return RewriteVerdict(Verdict.DISTINCT, reason="homology")
    if np_ != nr:
        return RewriteVerdict(Verdict.DISTINCT, reason="matching-count")

    if max_len is None:
        max_len = max(len(p), len(r)) + 2 * q.max_face_length
    return _closure(q, _rules(q), p, r, max_len, max_states)


def _closure(q, rules, p, r, max_len, max_states) -> RewriteVerdict:
    tail = p.tail
    parents = ({p.arrows: None}, {r.arrows: None})
    frontiers = ([p.arrows], [r.arrows])
    while frontiers[0] and frontiers[1]:
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        mine, other = parents[side], parents[1 - side]
        nxt = []
        for s in frontiers[side]:
            for t in _apply(q, rules, tail, s, max_len):
                if t in mine:
                    continue
                mine[t] = s
                if t in other:
                    chain = _join(parents, t, side)
                    return RewriteVerdict(Verdict.EQUAL, tuple(Path(tail, c) for c in chain))
                nxt.append(t)
            if len(parents[0]) + len(parents[1]) > max_states:
                return RewriteVerdict(Verdict.EXHAUSTED, reason=f"state cap {max_states}")
        frontiers = (nxt, frontiers[1]) if side == 0 else (frontiers[0], nxt)
    return RewriteVerdict(Verdict.DISTINCT, reason=f"closure to length {max_len}")


def _join(parents, meet, side):
    def walk(d, s):
        out = []
        while s is not None:
            out.append(s)
            s = d[s]
        return out

    left = walk(parents[0], meet)[::-1]
    right = walk(parents[1], meet)
    return left + right[1:]


def replay_chain(q: DimerQuiver, chain: tuple[Path, ...]) -> bool:
    """Check that consecutive chain entries differ by one relation."""
    for a, b in zip(chain, chain[1:]):
        bound = max(len(a), len(b))
        if b.arrows not in set(rewrites(q, a.tail, a.arrows, bound)):
            return False
    return True


def is_pseudo_arrow(
    q: DimerQuiver, a: int, max_len: int | None = None, max_states: int = DEFAULT_MAX_STATES
) -> RewriteVerdict:
    """Decide whether the length-1 path ``a`` equals its tail vertex modulo I."""
    arr = q.arrows[a]
    if not arr.is_loop:
        return RewriteVerdict(Verdict.DISTINCT, reason="endpoints differ")
    return paths_equal_mod_I(q, Path(arr.tail, (a,)), Path(arr.tail, ()), max_len, max_states)


@lru_cache(maxsize=256)
def pseudo_arrows(q: DimerQuiver) -> frozenset[int]:
    """Loops proven equal to a vertex.  Inconclusive loops count as arrows."""
    if all(len(f.boundary) > 1 for f in q.faces):
        # rewriting down to the empty path needs a relation with a trivial side
        return frozenset()
    return frozenset(a.id for a in q.arrows if a.is_loop and is_pseudo_arrow(q, a.id).equal)


def enumerate_cycles(
    q: DimerQuiver, base: int, max_len: int, u: Homology | None = None
) -> list[Path]:
    """Nontrivial cycles at ``base`` up to ``max_len`` arrows, lexicographic."""
    out: list[Path] = []
    w = q.windings
    stack: list[tuple[int, ...]] = [()]
    # depth-first, children pushed in reverse so ids come out ascending
    while stack:
        seq = stack.pop()
        at = q.arrows[seq[-1]].head if seq else base
        if seq and at == base:
            if u is None or tuple(int(x) for x in w[list(seq)].sum(axis=0)) == tuple(u):
                out.append(Path(base, seq))
        if len(seq) < max_len:
            for a in reversed(q.out_arrows(at)):
                stack.append(seq + (a,))
    return out


@dataclass(frozen=True)
class CancellationWitness:
    """p != q modulo I while p·r = q·r (side "right") or r·p = r·q ("left")."""

    p: Path
    q: Path
    r: Path
    side: str
    products: tuple[Path, Path]


def _all_paths(q: DimerQuiver, max_len: int, max_states: int, skip: frozenset[int]):
    paths = [(v, ()) for v in range(q.n_vertices)]
    frontier = list(paths)
    for _ in range(max_len):
        nxt = []
        for tail, seq in frontier:
            at = q.arrows[seq[-1]].head if seq else tail
            for a in q.out_arrows(at):
                if a not in skip:
                    nxt.append((tail, seq + (a,)))
        paths.extend(nxt)
        if len(paths) > max_states:
            raise BudgetExhausted(f"more than {max_states} paths of length <= {max_len}")
        frontier = nxt
    return paths


@lru_cache(maxsize=256)
def cancellation_oracle(
    q: DimerQuiver, max_len: int = DEFAULT_ORACLE_LEN, max_states: int = DEFAULT_MAX_STATES
) -> CancellationWitness | None:
    """Search paths of length <= max_len for a failure of cancellation.

    Path classes are first computed within the length bound (sound for
    equality); candidate pairs are then re-checked with a wider closure so
    that a returned witness has p, q distinct within that larger budget.
    Pseudo-arrows equal vertices, so they are deleted from paths and
    relations alike; the search runs over the remaining arrows.
    Raises BudgetExhausted when the path count exceeds ``max_states``.
    """
    drop = pseudo_arrows(q)
    rules = _rules(q, drop)
    paths = _all_paths(q, max_len, max_states, drop)
    index = {p: i for i, p in enumerate(paths)}
    parent = list(range(len(paths)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, (tail, seq) in enumerate(paths):
        for t in _apply(q, rules, tail, seq, max_len):
            j = index[(tail, t)]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj

    def recheck(a, b):
        a, b = Path(*a), Path(*b)
        hp, np_ = _invariants(q, a)
        hr, nr = _invariants(q, b)
        if hp != hr or np_ != nr:
            return RewriteVerdict(Verdict.DISTINCT)
        bound = max(len(a), len(b)) + q.max_face_length
        return _closure(q, rules, a, b, bound, max_states)

    # a failure with a long r has one with a single-arrow r at some step
    for side in ("right", "left"):
        seen: dict = {}
        for tail, seq in paths:
            if not seq:
                continue
            if side == "right":
                part, r = (tail, seq[:-1]), seq[-1]
            else:
                part, r = (q.arrows[seq[0]].head, seq[1:]), seq[0]
            known = seen.setdefault((find(index[(tail, seq)]), r), {})
            cls = find(index[part])
            if cls in known:
                continue
            for other in list(known.values()):
                v = recheck(other, part)
                if v.status is Verdict.DISTINCT:
                    rr = Path(q.arrows[r].tail, (r,))
                    if side == "right":
                        prod = (Path(tail, other[1] + (r,)), Path(tail, seq))
                    else:
                        prod = (Path(tail, (r,) + other[1]), Path(tail, seq))
                    return CancellationWitness(Path(*other), Path(*part), rr, side, prod)
                if v.status is Verdict.EQUAL:
                    parent[find(index[part])] = find(index[other])
                    break
            else:
                known[cls] = part
    return None
