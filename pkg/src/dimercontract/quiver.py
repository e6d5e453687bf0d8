"""Torus-embedded quivers stored combinatorially (faces plus windings)."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

Homology = tuple[int, int]


class StructuralError(ValueError):
    """Ids or boundaries that do not even describe a quiver."""


@dataclass(frozen=True)
class Arrow:
    id: int
    tail: int
    head: int
    winding: Homology = (0, 0)
    label: str | None = None

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class Face:
    id: int
    sign: int  # +1 or -1, the two face colours
    boundary: tuple[int, ...]


@dataclass(frozen=True)
class Path:
    """A path as its tail vertex plus arrow ids, read in travel order."""

    tail: int
    arrows: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows


@dataclass(frozen=True)
class Violation:
    invariant: str
    ids: tuple[int, ...]
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=True)
class DimerQuiver:
    n_vertices: int
    arrows: tuple[Arrow, ...]
    faces: tuple[Face, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        check_structure(self)

    # -- construction helpers -------------------------------------------

    @classmethod
    def build(
        cls,
        n_vertices: int,
        arrows: Iterable[tuple],
        faces: Iterable[tuple],
        name: str = "",
    ) -> "DimerQuiver":
        """Build from plain tuples.

        ``arrows``: ``(tail, head, (wx, wy)[, label])`` in id order.
        ``faces``: ``(sign, boundary)`` where sign is "+"/"-" or +1/-1 and the
        boundary holds arrow ids or labels.
        """
        arrs = []
        for i, spec in enumerate(arrows):
            tail, head, w = spec[:3]
            label = spec[3] if len(spec) > 3 else None
            arrs.append(Arrow(i, int(tail), int(head), (int(w[0]), int(w[1])), label))
        by_label = {a.label: a.id for a in arrs if a.label is not None}
        fcs = []
        for i, (sign, boundary) in enumerate(faces):
            ids = tuple(by_label[b] if isinstance(b, str) else int(b) for b in boundary)
            fcs.append(Face(i, _parse_sign(sign), ids))
        return cls(int(n_vertices), tuple(arrs), tuple(fcs), name)

    def renamed(self, name: str) -> "DimerQuiver":
        return DimerQuiver(self.n_vertices, self.arrows, self.faces, name)

    # -- lookups --------------------------------------------------------

    def arrow_name(self, a: int) -> str:
        label = self.arrows[a].label
        return label if label is not None else str(a)

    def arrow_id(self, key: int | str) -> int:
        if isinstance(key, int):
            return key
        for a in self.arrows:
            if a.label == key:
                return a.id
        if key.isdigit():
            return int(key)
        raise KeyError(f"no arrow named {key!r}")

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    @cached_property
    def faces_of(self) -> tuple[tuple[int, ...], ...]:
        """For each arrow, the ids of faces containing it (with repetition)."""
        acc: list[list[int]] = [[] for _ in self.arrows]
        for f in self.faces:
            for a in f.boundary:
                acc[a].append(f.id)
        return tuple(tuple(x) for x in acc)

    @cached_property
    def max_face_length(self) -> int:
        return max((len(f.boundary) for f in self.faces), default=0)

    @cached_property
    def out_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(ptr, arrow ids) of out-arrows per vertex, arrow ids ascending."""
        order = sorted(range(self.n_arrows), key=lambda a: (self.arrows[a].tail, a))
        ptr = np.zeros(self.n_vertices + 1, dtype=np.int64)
        for a in self.arrows:
            ptr[a.tail + 1] += 1
        return np.cumsum(ptr), np.array(order, dtype=np.int64)

    @cached_property
    def heads(self) -> np.ndarray:
        return np.array([a.head for a in self.arrows], dtype=np.int64)

    @cached_property
    def tails(self) -> np.ndarray:
        return np.array([a.tail for a in self.arrows], dtype=np.int64)

    @cached_property
    def windings(self) -> np.ndarray:
        return np.array([a.winding for a in self.arrows], dtype=np.int64).reshape(-1, 2)

    def out_arrows(self, v: int) -> list[int]:
        ptr, arr = self.out_csr
        return [int(a) for a in arr[ptr[v] : ptr[v + 1]]]

    def head_of(self, p: Path) -> int:
        return self.arrows[p.arrows[-1]].head if p.arrows else p.tail

    def face_path(self, face: int, start: int = 0) -> Path:
        """The unit cycle of ``face`` read from position ``start``."""
        b = self.faces[face].boundary
        b = b[start:] + b[:start]
        return Path(self.arrows[b[0]].tail, b)

    def path(self, *arrows: int | str, tail: int | None = None) -> Path:
        ids = tuple(self.arrow_id(a) for a in arrows)
        if not ids:
            if tail is None:
                raise StructuralError("trivial path needs a tail vertex")
            return Path(tail, ())
        p = Path(self.arrows[ids[0]].tail, ids)
        check_path(self, p)
        return p


def _parse_sign(sign) -> int:
    if sign in ("+", 1, "+1"):
        return 1
    if sign in ("-", -1, "-1"):
        return -1
    raise StructuralError(f"bad face sign {sign!r}")


def check_structure(q: DimerQuiver) -> None:
    """Raise StructuralError on dangling or non-dense ids."""
    if q.n_vertices < 1:
        raise StructuralError("a quiver needs at least one vertex")
    for i, a in enumerate(q.arrows):
        if a.id != i:
            raise StructuralError(f"arrow ids must be dense, got {a.id} at position {i}")
        for v in (a.tail, a.head):
            if not 0 <= v < q.n_vertices:
                raise StructuralError(f"arrow {a.id} references unknown vertex {v}")
    for i, f in enumerate(q.faces):
        if f.id != i:
            raise StructuralError(f"face ids must be dense, got {f.id} at position {i}")
        if f.sign not in (1, -1):
            raise StructuralError(f"face {f.id} has sign {f.sign}")
        if not f.boundary:
            raise StructuralError(f"face {f.id} has an empty boundary")
        for a in f.boundary:
            if not 0 <= a < len(q.arrows):
                raise StructuralError(f"face {f.id} references unknown arrow {a}")


def check_path(q: DimerQuiver, p: Path) -> None:
    if not 0 <= p.tail < q.n_vertices:
        raise StructuralError(f"unknown vertex {p.tail}")
    at = p.tail
    for a in p.arrows:
        arr = q.arrows[a]
        if arr.tail != at:
            raise StructuralError(f"arrow {q.arrow_name(a)} does not start at vertex {at}")
        at = arr.head


def validate(q: DimerQuiver) -> ValidationReport:
    """Check the dimer axioms; every violated invariant is listed."""
    out: list[Violation] = []

    n_faces = len(q.faces)
    euler = q.n_vertices - q.n_arrows + n_faces
    if euler != 0:
        out.append(Violation("euler", (), f"|Q0|-|Q1|+|F| = {euler}"))

    for f in q.faces:
        b = f.boundary
        broken = [
            b[i] for i in range(len(b)) if q.arrows[b[i]].head != q.arrows[b[(i + 1) % len(b)]].tail
        ]
        if broken:
            out.append(Violation("face-oriented-cycle", (f.id, *broken)))
        w = q.windings[list(b)].sum(axis=0)
        if w.any():
            out.append(Violation("face-contractible", (f.id,), f"winding sum {tuple(int(x) for x in w)}"))

    for a in q.arrows:
        signs = sorted(q.faces[f].sign for f in q.faces_of[a.id])
        if signs != [-1, 1]:
            out.append(Violation("arrow-two-faces", (a.id,), f"face signs {signs}"))

    if not _connected(q):
        out.append(Violation("connected", ()))

    if not out:
        # only meaningful once every arrow sits in a + and a - face
        for v in range(q.n_vertices):
            if _link_components(q, v) != 1:
                out.append(Violation("vertex-link", (v,), "faces around the vertex do not close into one disk"))

    return ValidationReport(tuple(out))


def _connected(q: DimerQuiver) -> bool:
    adj: list[set[int]] = [set() for _ in range(q.n_vertices)]
    for a in q.arrows:
        adj[a.tail].add(a.head)
        adj[a.head].add(a.tail)
    seen = {0}
    todo = deque([0])
    while todo:
        v = todo.popleft()
        for w in adj[v] - seen:
            seen.add(w)
            todo.append(w)
    return len(seen) == q.n_vertices


def corners(q: DimerQuiver, v: int) -> list[tuple[int, int, int]]:
    """(face, in-arrow, out-arrow) for each corner of a face at vertex v."""
    out = []
    for f in q.faces:
        b = f.boundary
        for i in range(len(b)):
            a_in, a_out = b[i], b[(i + 1) % len(b)]
            if q.arrows[a_in].head == v:
                out.append((f.id, a_in, a_out))
    return out


def _link_components(q: DimerQuiver, v: int) -> int:
    # half-edges ("i", a) / ("o", a) joined through corners
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, a_in, a_out in corners(q, v):
        parent[find(("i", a_in))] = find(("o", a_out))
    roots = {find(x) for x in list(parent)}
    return len(roots)


def homology_class(q: DimerQuiver, p: Path) -> Homology:
    """Sum of windings along p (the deck offset between the ends of a lift)."""
    check_path(q, p)
    if not p.arrows:
        return (0, 0)
    w = q.windings[list(p.arrows)].sum(axis=0)
    return (int(w[0]), int(w[1]))


def gauge_transform(q: DimerQuiver, g: Mapping[int, Homology] | Sequence[Homology]) -> DimerQuiver:
    """Shift the lift of each vertex v by g(v); w(a) becomes w(a)+g(h)-g(t)."""
    gg = [tuple(g[v]) for v in range(q.n_vertices)]
    arrows = tuple(
        Arrow(
            a.id,
            a.tail,
            a.head,
            (a.winding[0] + gg[a.head][0] - gg[a.tail][0], a.winding[1] + gg[a.head][1] - gg[a.tail][1]),
            a.label,
        )
        for a in q.arrows
    )
    return DimerQuiver(q.n_vertices, arrows, q.faces, q.name)


def strongly_connected(q: DimerQuiver, keep: Iterable[int]) -> bool:
    """Oriented path between every ordered vertex pair using only ``keep``."""
    if q.n_vertices == 1:
        return True
    n, labels = scc_labels(q, keep)
    return n == 1


def scc_labels(q: DimerQuiver, keep: Iterable[int]) -> tuple[int, np.ndarray]:
    keep = sorted(set(keep))
    rows = [q.arrows[a].tail for a in keep]
    cols = [q.arrows[a].head for a in keep]
    g = csr_matrix((np.ones(len(keep)), (rows, cols)), shape=(q.n_vertices, q.n_vertices))
    return connected_components(g, directed=True, connection="strong")


def terminal_components(q: DimerQuiver, keep: Iterable[int]) -> list[frozenset[int]]:
    """Sink strongly connected components of (Q0, keep), by lowest vertex id."""
    keep = set(keep)
    n, labels = scc_labels(q, keep)
    exits = [False] * n
    for a in keep:
        t, h = q.arrows[a].tail, q.arrows[a].head
        if labels[t] != labels[h]:
            exits[labels[t]] = True
    comps = [frozenset(int(v) for v in np.flatnonzero(labels == c)) for c in range(n) if not exits[c]]
    return sorted(comps, key=min)


def face_transversals(q: DimerQuiver, allowed: Iterable[int] | None = None) -> np.ndarray:
    """Arrow sets meeting every face exactly once, as rows of a 0/1 matrix.

    An arrow occurring twice in one face can never be chosen.
    """
    from . import _kernels

    mask = np.zeros(q.n_arrows, dtype=np.bool_)
    mask[list(range(q.n_arrows)) if allowed is None else list(allowed)] = True
    arrow_faces = np.zeros((q.n_arrows, 2), dtype=np.int64)
    for a, fs in enumerate(q.faces_of):
        if len(fs) != 2 or fs[0] == fs[1]:
            mask[a] = False
            fs = (fs + (0, 0))[:2]
        arrow_faces[a] = fs
    ptr = np.zeros(len(q.faces) + 1, dtype=np.int64)
    arr = []
    for f in q.faces:
        uniq = sorted(set(f.boundary))
        ptr[f.id + 1] = ptr[f.id] + len(uniq)
        arr.extend(uniq)
    rows = _kernels.exact_cover(ptr, np.array(arr, dtype=np.int64), arrow_faces, mask)
    rows = rows.astype(np.int64)
    if len(rows) > 1:
        keys = [tuple(np.flatnonzero(r)) for r in rows]
        rows = rows[sorted(range(len(rows)), key=keys.__getitem__)]
    return rows
