"""Perfect matchings and their taxonomy (equivalence, rigidity, simplicity)."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .pathalg import DEFAULT_MAX_STATES, Verdict, enumerate_cycles, paths_equal_mod_I, pseudo_arrows
from .quiver import (
    DimerQuiver,
    Homology,
    Path,
    face_transversals,
    homology_class,
    strongly_connected,
    terminal_components,
)


@dataclass(frozen=True, order=True)
class PerfectMatching:
    arrows: tuple[int, ...]  # sorted

    @classmethod
    def of(cls, arrows: Iterable[int]) -> "PerfectMatching":
        return cls(tuple(sorted(set(arrows))))

    def __contains__(self, a: int) -> bool:
        return a in self.arrows

    def indicator(self, n_arrows: int) -> np.ndarray:
        chi = np.zeros(n_arrows, dtype=np.int64)
        chi[list(self.arrows)] = 1
        return chi

    def names(self, q: DimerQuiver) -> str:
        return "{" + ",".join(q.arrow_name(a) for a in self.arrows) + "}"


def is_perfect_matching(q: DimerQuiver, arrows: Iterable[int]) -> bool:
    s = set(arrows)
    if s & pseudo_arrows(q):
        return False
    return all(sum(a in s for a in f.boundary) == 1 for f in q.faces)


@lru_cache(maxsize=256)
def enumerate_perfect_matchings(q: DimerQuiver) -> tuple[PerfectMatching, ...]:
    """Every perfect matching, sorted by arrow ids; pseudo-arrows never used."""
    pseudo = pseudo_arrows(q)
    rows = face_transversals(q, [a for a in range(q.n_arrows) if a not in pseudo])
    return tuple(sorted(PerfectMatching(tuple(int(a) for a in np.flatnonzero(r))) for r in rows))


def count_nD(D: PerfectMatching, p: Path) -> int:
    """Number of arrows of p lying in D, with multiplicity."""
    members = set(D.arrows)
    return sum(a in members for a in p.arrows)


def _require_perfect(q: DimerQuiver, *Ds: PerfectMatching) -> None:
    for D in Ds:
        if not is_perfect_matching(q, D.arrows):
            raise ValueError(f"{D.names(q)} is not a perfect matching")


def difference_potential(q: DimerQuiver, D: PerfectMatching, D2: PerfectMatching) -> list[int] | None:
    """f with chi_D - chi_D2 = f(h) - f(t) on every arrow, or None."""
    diff = D.indicator(q.n_arrows) - D2.indicator(q.n_arrows)
    f: list[int | None] = [None] * q.n_vertices
    f[0] = 0
    adj: list[list[tuple[int, int, int]]] = [[] for _ in range(q.n_vertices)]
    for a in q.arrows:
        adj[a.tail].append((a.head, a.id, 1))
        adj[a.head].append((a.tail, a.id, -1))
    todo = deque([0])
    while todo:
        v = todo.popleft()
        for w, a, s in adj[v]:
            if f[w] is None:
                f[w] = f[v] + s * int(diff[a])
                todo.append(w)
    if any(x is None for x in f):
        return None
    for a in q.arrows:
        if diff[a.id] != f[a.head] - f[a.tail]:
            return None
    return f  # type: ignore[return-value]


def matchings_equivalent(q: DimerQuiver, D: PerfectMatching, D2: PerfectMatching) -> bool:
    _require_perfect(q, D, D2)
    return difference_potential(q, D, D2) is not None


def equivalent_by_cycles(
    q: DimerQuiver, D: PerfectMatching, D2: PerfectMatching, max_len: int | None = None
) -> bool:
    """Brute-force check: n_D = n_D2 on every cycle of length <= max_len.

    Exhaustive over all cycles at every vertex via a reachability table of
    (vertex, running difference); the default bound is 2|Q1|.
    """
    if max_len is None:
        max_len = 2 * q.n_arrows
    diff = D.indicator(q.n_arrows) - D2.indicator(q.n_arrows)
    ptr, arr = q.out_csr
    return not any(
        _kernels.nonzero_cycle_exists(ptr, arr, q.heads, q.tails, diff, v, max_len)
        for v in range(q.n_vertices)
    )


def is_simple(q: DimerQuiver, D: PerfectMatching) -> bool:
    return strongly_connected(q, [a for a in range(q.n_arrows) if a not in D])


@dataclass(frozen=True)
class MatchingCatalogue:
    quiver: DimerQuiver
    matchings: tuple[PerfectMatching, ...]
    classes: tuple[tuple[int, ...], ...]  # indices into matchings
    class_of: tuple[int, ...]
    simple: tuple[bool, ...]
    pseudo: frozenset[int]
    nonrigid_arrows: frozenset[int]

    @property
    def rigid(self) -> tuple[bool, ...]:
        return tuple(len(self.classes[c]) == 1 for c in self.class_of)

    @property
    def rigid_arrows(self) -> frozenset[int]:
        return frozenset(range(self.quiver.n_arrows)) - self.nonrigid_arrows - self.pseudo

    @property
    def simple_matchings(self) -> tuple[PerfectMatching, ...]:
        """Simple matchings ordered by their sorted arrow lists."""
        return tuple(D for D, s in zip(self.matchings, self.simple) if s)

    def covered(self) -> frozenset[int]:
        return frozenset(a for D in self.matchings for a in D.arrows)


@lru_cache(maxsize=256)
def classify(q: DimerQuiver) -> MatchingCatalogue:
    ms = enumerate_perfect_matchings(q)
    class_of = [-1] * len(ms)
    classes: list[list[int]] = []
    for i, D in enumerate(ms):
        for c, members in enumerate(classes):
            if difference_potential(q, D, ms[members[0]]) is not None:
                members.append(i)
                class_of[i] = c
                break
        else:
            class_of[i] = len(classes)
            classes.append([i])
    pseudo = pseudo_arrows(q)
    nonrigid = set()
    for a in range(q.n_arrows):
        if a in pseudo:
            continue
        if all(
            any(a not in ms[j] for j in classes[class_of[i]])
            for i, D in enumerate(ms)
            if a in D
        ):
            nonrigid.add(a)
    return MatchingCatalogue(
        q,
        ms,
        tuple(tuple(c) for c in classes),
        tuple(class_of),
        tuple(is_simple(q, D) for D in ms),
        pseudo,
        frozenset(nonrigid),
    )


class Nondegeneracy(enum.Enum):
    NONDEGENERATE = "nondegenerate"
    CYCLE_ONLY = "cycle-nondegenerate-only"
    DEGENERATE = "degenerate"
    INCONCLUSIVE = "inconclusive"


def nondegeneracy(
    q: DimerQuiver, max_len: int | None = None, max_states: int = DEFAULT_MAX_STATES
) -> Nondegeneracy:
    """Every arrow in a matching / every non-vertex cycle meets one / neither.

    Only cycles built from uncovered arrows and pseudo-arrows can fail the
    cycle condition; those up to ``max_len`` (default |Q1|) are tested
    against the trivial path.
    """
    cat = classify(q)
    uncovered = set(range(q.n_arrows)) - cat.covered() - cat.pseudo
    if not uncovered:
        return Nondegeneracy.NONDEGENERATE
    if max_len is None:
        max_len = q.n_arrows
    sub_ok = uncovered | cat.pseudo
    inconclusive = False
    for v in range(q.n_vertices):
        for c in _cycles_within(q, v, max_len, sub_ok):
            if not set(c.arrows) & uncovered:
                continue
            verdict = paths_equal_mod_I(q, c, Path(v, ()), max_states=max_states)
            if verdict.status is Verdict.DISTINCT:
                return Nondegeneracy.DEGENERATE
            if verdict.status is Verdict.EXHAUSTED:
                inconclusive = True
    return Nondegeneracy.INCONCLUSIVE if inconclusive else Nondegeneracy.CYCLE_ONLY


def _cycles_within(q: DimerQuiver, base: int, max_len: int, allowed: set[int]):
    stack: list[tuple[int, ...]] = [()]
    while stack:
        seq = stack.pop()
        at = q.arrows[seq[-1]].head if seq else base
        if seq and at == base:
            yield Path(base, seq)
        if len(seq) < max_len:
            for a in q.out_arrows(at):
                if a in allowed:
                    stack.append(seq + (a,))


class ConstructionError(AssertionError):
    """A step of the sink-component construction failed its own claim."""


def equivalent_matching_via_sink_scc(q: DimerQuiver, D: PerfectMatching) -> PerfectMatching | None:
    """For non-simple D, swap the arrows leaving a sink component of Q minus D
    for the arrows entering it.  The result is a different, equivalent
    perfect matching.  Returns None when D is simple.
    """
    keep = [a for a in range(q.n_arrows) if a not in D]
    if strongly_connected(q, keep):
        return None
    comp = terminal_components(q, keep)[0]
    inside = {a for a in keep if q.arrows[a].tail in comp and q.arrows[a].head in comp}
    alpha = {a.id for a in q.arrows if a.id not in inside and a.tail in comp}
    beta = {a.id for a in q.arrows if a.id not in inside and a.head in comp}
    if not alpha <= set(D.arrows):
        raise ConstructionError(f"arrows {sorted(alpha - set(D.arrows))} leave the sink component outside D")
    D2 = PerfectMatching.of((set(D.arrows) - alpha) | beta)
    if D2 == D or not is_perfect_matching(q, D2.arrows):
        raise ConstructionError(f"swap produced {D2.names(q)} from {D.names(q)}")
    return D2


def swap_at_source(q: DimerQuiver, D: PerfectMatching, v: int) -> PerfectMatching:
    """Replace the arrows into a source vertex v of Q minus D by those out of it."""
    keep = [a for a in range(q.n_arrows) if a not in D]
    if any(q.arrows[a].head == v for a in keep):
        raise ValueError(f"vertex {v} is not a source of Q minus {D.names(q)}")
    into = {a.id for a in q.arrows if a.head == v}
    out = {a.id for a in q.arrows if a.tail == v}
    return PerfectMatching.of((set(D.arrows) - into) | out)


# -- lattice points and the characteristic polygon ---------------------------


def matching_lattice_point(
    q: DimerQuiver, D: PerfectMatching, D0: PerfectMatching, gx: Path, gy: Path
) -> tuple[int, int]:
    if homology_class(q, gx) != (1, 0) or homology_class(q, gy) != (0, 1):
        raise ValueError("gx, gy must be cycles of class (1,0) and (0,1)")
    if q.head_of(gx) != gx.tail or q.head_of(gy) != gy.tail:
        raise ValueError("gx, gy must be cycles")
    diff = D.indicator(q.n_arrows) - D0.indicator(q.n_arrows)
    return int(diff[list(gx.arrows)].sum()), int(diff[list(gy.arrows)].sum())


def height_change(q: DimerQuiver, D: PerfectMatching, D0: PerfectMatching) -> tuple[int, int]:
    """The period vector of chi_D - chi_D0: its sum along any closed walk of
    class u is the dot product with u.  Computed from a spanning tree, with no
    reference cycles needed.
    """
    diff = D.indicator(q.n_arrows) - D0.indicator(q.n_arrows)
    f = [None] * q.n_vertices
    lift = [None] * q.n_vertices
    f[0], lift[0] = 0, np.zeros(2, dtype=np.int64)
    tree = set()
    todo = deque([0])
    adj: list[list[tuple[int, int]]] = [[] for _ in range(q.n_vertices)]
    for a in q.arrows:
        adj[a.tail].append((a.id, 1))
        adj[a.head].append((a.id, -1))
    while todo:
        v = todo.popleft()
        for a, s in adj[v]:
            arr = q.arrows[a]
            w = arr.head if s == 1 else arr.tail
            if f[w] is None:
                f[w] = f[v] + s * int(diff[a])
                lift[w] = lift[v] + s * q.windings[a]
                tree.add(a)
                todo.append(w)
    rows, rhs = [], []
    for a in q.arrows:
        if a.id in tree:
            continue
        rows.append(q.windings[a.id] + lift[a.tail] - lift[a.head])
        rhs.append(int(diff[a.id]) - (f[a.head] - f[a.tail]))
    if not rows:
        return (0, 0)
    A = np.array(rows, dtype=float)
    b = np.array(rhs, dtype=float)
    sol = np.rint(np.linalg.lstsq(A, b, rcond=None)[0]).astype(np.int64)
    if not np.array_equal(np.array(rows) @ sol, np.array(rhs)):
        raise ValueError("matching difference is not closed; is D0 a perfect matching?")
    return int(sol[0]), int(sol[1])


def convex_hull(points: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    """Counterclockwise hull vertices (monotone chain), collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def twice_area(hull: Sequence[tuple[int, int]]) -> int:
    n = len(hull)
    return abs(sum(hull[i][0] * hull[(i + 1) % n][1] - hull[(i + 1) % n][0] * hull[i][1] for i in range(n)))


@dataclass(frozen=True)
class Polygon:
    points: tuple[tuple[int, int], ...]  # one per matching, in catalogue order
    hull: tuple[tuple[int, int], ...]

    def normalized(self) -> tuple[tuple[int, int], ...]:
        """Hull translated so its lexicographically smallest vertex is the origin."""
        if not self.hull:
            return ()
        x0, y0 = min(self.hull)
        return tuple(sorted((x - x0, y - y0) for x, y in self.hull))


def characteristic_polygon(q: DimerQuiver, D0: PerfectMatching | None = None) -> Polygon | None:
    ms = enumerate_perfect_matchings(q)
    if not ms:
        return None
    D0 = ms[0] if D0 is None else D0
    pts = tuple(height_change(q, D, D0) for D in ms)
    return Polygon(pts, tuple(convex_hull(pts)))


def find_cycle_of_class(q: DimerQuiver, u: Homology, max_len: int | None = None) -> Path | None:
    """Shortest cycle of class u at the lowest vertex where one exists."""
    if max_len is None:
        max_len = 2 * q.n_arrows
    best = None
    for v in range(q.n_vertices):
        # breadth-first over (vertex, offset) states
        start = (v, (0, 0))
        prev = {start: None}
        frontier = [start]
        for _ in range(max_len):
            nxt = []
            hit = None
            for state in frontier:
                at, off = state
                for a in q.out_arrows(at):
                    w = q.arrows[a].winding
                    s = (q.arrows[a].head, (off[0] + w[0], off[1] + w[1]))
                    if s == (v, tuple(u)):
                        hit = (state, a)
                        break
                    if s not in prev and abs(s[1][0]) <= max_len and abs(s[1][1]) <= max_len:
                        prev[s] = (state, a)
                        nxt.append(s)
                if hit:
                    break
            if hit:
                seq = [hit[1]]
                s = hit[0]
                while prev[s] is not None:
                    s, a = prev[s]
                    seq.append(a)
                cyc = Path(v, tuple(reversed(seq)))
                if best is None or len(cyc) < len(best):
                    best = cyc
                break
            frontier = nxt
    return best
