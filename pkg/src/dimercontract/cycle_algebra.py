"""Cycle monomials over simple matchings and the truncated S = S' comparison.

Monomials are exponent vectors indexed by the simple matchings of the
target quiver, ordered by their sorted arrow lists.  sigma is the all-ones
vector, the image of every unit cycle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .contraction import ContractionSequence, Tri, is_cancellative, psi_path
from .matchings import PerfectMatching, characteristic_polygon, classify
from .quiver import DimerQuiver, Homology, Path, check_path

DEFAULT_MAX_U = 3
NODE_CAP = 200_000

Monomial = tuple[int, ...]


class NotCancellative(ValueError):
    """The target of a contraction must be cancellative to define S and S'."""


class MembershipOverflow(RuntimeError):
    """Semigroup membership search exceeded its node cap."""


class ContainmentError(AssertionError):
    """A generator of S fell outside S'."""


@dataclass(frozen=True)
class Bounds:
    max_len: int
    max_u: int = DEFAULT_MAX_U

    def __str__(self) -> str:
        return f"len={self.max_len}, |u|<={self.max_u}"


def default_bounds(source: DimerQuiver) -> Bounds:
    return Bounds(4 * source.max_face_length, DEFAULT_MAX_U)


@dataclass(frozen=True)
class Generator:
    exponents: Monomial
    u: Homology
    base: int  # vertex of the quiver the cycle was found in; -1 for sigma
    length: int  # shortest cycle length that produced it; 0 for sigma


@dataclass(frozen=True)
class MonomialSemigroup:
    variables: tuple[PerfectMatching, ...]
    generators: tuple[Generator, ...]
    bounds: Bounds
    boundary_hits: tuple[Monomial, ...] = ()

    @property
    def sigma(self) -> Monomial:
        return (1,) * len(self.variables)

    @property
    def vectors(self) -> tuple[Monomial, ...]:
        return tuple(g.exponents for g in self.generators)


def _weights(q: DimerQuiver) -> tuple[tuple[PerfectMatching, ...], np.ndarray]:
    simple = classify(q).simple_matchings
    W = np.zeros((q.n_arrows, len(simple)), dtype=np.int64)
    for j, D in enumerate(simple):
        W[list(D.arrows), j] = 1
    return simple, W


def tau_bar(q: DimerQuiver, p: Path) -> Monomial:
    """Exponents of prod x_D^{n_D(p)} over the simple matchings of ``q``."""
    check_path(q, p)
    _, W = _weights(q)
    return tuple(int(x) for x in W[list(p.arrows)].sum(axis=0)) if p.arrows else (0,) * W.shape[1]


def tau_bar_psi(seq: ContractionSequence, p: Path) -> Monomial:
    return tau_bar(seq.target, psi_path(seq, p))


def _source_weights(seq: ContractionSequence) -> np.ndarray:
    _, W = _weights(seq.target)
    rows = np.zeros((seq.source.n_arrows, W.shape[1]), dtype=np.int64)
    for a, b in enumerate(seq.arrow_map):
        if b is not None:
            rows[a] = W[b]
    return rows


def _cycle_monomials(q: DimerQuiver, W: np.ndarray, bounds: Bounds) -> dict[Monomial, Generator]:
    """sigma-free cycle monomials, with the first (length, base) seen.

    Partial paths whose monomial is already divisible by sigma are dropped:
    every extension stays divisible and is generated by sigma and shorter
    monomials.
    """
    L, U = bounds.max_len, bounds.max_u
    wind = q.windings.astype(np.int64)
    rows = np.hstack([wind, W])
    reach = np.abs(wind).max(axis=0) if q.n_arrows else np.zeros(2, dtype=np.int64)
    ptr, arr = q.out_csr
    heads = q.heads
    found: dict[Monomial, Generator] = {}
    for base in range(q.n_vertices):
        states = np.zeros((1, 3 + W.shape[1]), dtype=np.int64)
        states[0, 0] = base
        for step in range(1, L + 1):
            states = _kernels.expand_states(states, ptr, arr, heads, rows)
            if states.size == 0:
                break
            if W.shape[1]:
                states = states[states[:, 3:].min(axis=1) == 0]
            left = L - step
            ok = (np.abs(states[:, 1]) <= U + reach[0] * left) & (np.abs(states[:, 2]) <= U + reach[1] * left)
            states = np.unique(states[ok], axis=0)
            hit = states[(states[:, 0] == base) & (np.abs(states[:, 1]) <= U) & (np.abs(states[:, 2]) <= U)]
            for row in hit:
                m = tuple(int(x) for x in row[3:])
                if any(m) and m not in found:
                    found[m] = Generator(m, (int(row[1]), int(row[2])), base, step)
    return found


def semigroup_contains(gens, m: Monomial, node_cap: int = NODE_CAP) -> bool:
    """Is ``m`` a nonnegative integer combination of ``gens``?

    Branch over generator multiplicities, largest first, with a memo of
    failed (index, remainder) pairs.  Raises MembershipOverflow past
    ``node_cap`` search nodes.
    """
    vecs = [np.asarray(g.exponents if isinstance(g, Generator) else g, dtype=np.int64) for g in gens]
    vecs = [v for v in vecs if v.any()]
    target = np.asarray(m, dtype=np.int64)
    if (target < 0).any():
        raise ValueError("exponents must be nonnegative")
    dead: set = set()
    nodes = 0

    def go(i: int, rest: np.ndarray) -> bool:
        nonlocal nodes
        if not rest.any():
            return True
        if i == len(vecs):
            return False
        key = (i, rest.tobytes())
        if key in dead:
            return False
        nodes += 1
        if nodes > node_cap:
            raise MembershipOverflow(f"membership search passed {node_cap} nodes")
        v = vecs[i]
        sup = v > 0
        k = int((rest[sup] // v[sup]).min())
        for j in range(k, -1, -1):
            if go(i + 1, rest - j * v):
                return True
        dead.add(key)
        return False

    return go(0, target)


def _extract(variables, found: dict[Monomial, Generator], bounds: Bounds) -> MonomialSemigroup:
    sigma = (1,) * len(variables)
    kept = [Generator(sigma, (0, 0), -1, 0)] if variables else []
    for m in sorted(found, key=lambda m: (sum(m), m)):
        if not semigroup_contains(kept, m):
            kept.append(found[m])
    hits = tuple(g.exponents for g in kept if g.length == bounds.max_len)
    return MonomialSemigroup(tuple(variables), tuple(kept), bounds, hits)


def generators_target(q: DimerQuiver, bounds: Bounds | None = None) -> MonomialSemigroup:
    """S' for a cancellative quiver: its own cycles under tau_bar."""
    bounds = bounds or default_bounds(q)
    variables, W = _weights(q)
    return _extract(variables, _cycle_monomials(q, W, bounds), bounds)


def generators_source(seq: ContractionSequence, bounds: Bounds | None = None) -> MonomialSemigroup:
    """S for a contraction: source cycles under tau_bar after psi."""
    bounds = bounds or default_bounds(seq.source)
    variables, _ = _weights(seq.target)
    return _extract(variables, _cycle_monomials(seq.source, _source_weights(seq), bounds), bounds)


def generators(source: ContractionSequence | DimerQuiver, bounds: Bounds | None = None) -> MonomialSemigroup:
    if isinstance(source, ContractionSequence):
        return generators_source(source, bounds)
    return generators_target(source, bounds)


class Comparison(enum.Enum):
    EQUAL = "equal"
    PROPER_SUBSET = "proper-subset"
    INCOMPARABLE = "incomparable"
    INCONCLUSIVE = "inconclusive"


def compare(S: MonomialSemigroup, S2: MonomialSemigroup, strict: bool = True) -> Comparison:
    """Relate S to S' through generator membership in both directions.

    With ``strict`` a generator of S outside S' raises ContainmentError,
    since the psi-image of a cycle is a cycle.
    """
    if S.variables != S2.variables:
        raise ValueError("semigroups live over different variable sets")
    if S.bounds != S2.bounds:
        return Comparison.INCONCLUSIVE
    try:
        outside = [g.exponents for g in S.generators if not semigroup_contains(S2.generators, g.exponents)]
        missing = [g.exponents for g in S2.generators if not semigroup_contains(S.generators, g.exponents)]
    except MembershipOverflow:
        return Comparison.INCONCLUSIVE
    if outside:
        if strict:
            raise ContainmentError(f"S has generators outside S': {outside}")
        return Comparison.INCOMPARABLE
    return Comparison.PROPER_SUBSET if missing else Comparison.EQUAL


class Cyclicity(enum.Enum):
    CYCLIC = "cyclic"
    NOT_CYCLIC = "not-cyclic"
    INCONCLUSIVE = "inconclusive"


_VERDICT = {
    Comparison.EQUAL: Cyclicity.CYCLIC,
    Comparison.PROPER_SUBSET: Cyclicity.NOT_CYCLIC,
    Comparison.INCONCLUSIVE: Cyclicity.INCONCLUSIVE,
}


@dataclass(frozen=True)
class CyclicityReport:
    verdict: Cyclicity
    comparison: Comparison
    S: MonomialSemigroup
    S_prime: MonomialSemigroup
    bounds: Bounds
    warnings: tuple[str, ...] = field(default=())

    def lines(self) -> list[str]:
        return [
            f"S  = k[{format_generators(self.S)}]",
            f"S' = k[{format_generators(self.S_prime)}]",
            f"verdict: {self.verdict.value} (bounds: {self.bounds})",
        ]


def verify_cyclic(seq: ContractionSequence, bounds: Bounds | None = None) -> CyclicityReport:
    """Decide S = S' within truncation bounds shared by both sides."""
    if is_cancellative(seq.target, oracle_len=None) is not Tri.YES:
        raise NotCancellative(
            "the target has an arrow in no simple matching, so S' is not defined over its simple matchings"
        )
    bounds = bounds or default_bounds(seq.source)
    S = generators_source(seq, bounds)
    S2 = generators_target(seq.target, bounds)
    cmp = compare(S, S2)
    warnings = []
    for name, sg in (("S", S), ("S'", S2)):
        if sg.boundary_hits:
            warnings.append(f"{name}: generator first found at the length bound; raise --max-len to be sure")
    return CyclicityReport(_VERDICT[cmp], cmp, S, S2, bounds, tuple(warnings))


def monomial_name(m: Monomial) -> str:
    if not any(m):
        return "1"
    parts = []
    for k, e in enumerate(m):
        if e:
            parts.append(f"xD{k}" + (f"^{e}" if e > 1 else ""))
    return "*".join(parts)


def format_generators(sg: MonomialSemigroup) -> str:
    return ", ".join(monomial_name(v) for v in sg.vectors)


@lru_cache(maxsize=64)
def cross_order_data(q: DimerQuiver, bounds: Bounds | None = None):
    """Label-free invariants of S' for comparing targets of different orders.

    Sorted (homology class, total degree) over the generators, sigma
    included, plus the normalized characteristic polygon.
    """
    sg = generators_target(q, bounds or default_bounds(q))
    data = tuple(sorted((g.u, sum(g.exponents)) for g in sg.generators))
    poly = characteristic_polygon(q)
    return data, poly.normalized() if poly else None
