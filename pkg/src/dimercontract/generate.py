"""Random dimer quivers built by subdividing arrows of a small base.

Subdividing a: t -> h inserts a vertex v and replaces a by a1: t -> v,
a2: v -> h in both faces through a; contracting a1 or a2 undoes it.  NC5
is the conifold with one arrow subdivided.
"""

from __future__ import annotations

import random

from .quiver import Arrow, DimerQuiver, Face, gauge_transform

BASES = ("C3", "CONIFOLD", "FIG1_Q")


def subdivide(q: DimerQuiver, a: int, split: tuple[int, int] = (0, 0)) -> DimerQuiver:
    """Replace arrow ``a`` by a two-arrow path through a new last vertex.

    ``split`` is the winding of the first half; the second half takes the
    rest.  The new second half gets id ``n_arrows``.
    """
    old = q.arrows[a]
    v = q.n_vertices
    w1 = split
    w2 = (old.winding[0] - split[0], old.winding[1] - split[1])
    name = q.arrow_name(a)
    arrows = list(q.arrows)
    arrows[a] = Arrow(a, old.tail, v, w1, f"{name}'" if old.label else None)
    new = Arrow(q.n_arrows, v, old.head, w2, f"{name}''" if old.label else None)
    arrows.append(new)
    faces = []
    for f in q.faces:
        b: list[int] = []
        for x in f.boundary:
            b.extend((a, new.id) if x == a else (x,))
        faces.append(Face(f.id, f.sign, tuple(b)))
    return DimerQuiver(v + 1, tuple(arrows), tuple(faces), q.name and f"{q.name}+{name}")


def random_instance(seed: int, base: DimerQuiver | None = None, splits: int | None = None) -> DimerQuiver:
    """Subdivide ``splits`` random arrows of a base fixture, then gauge randomly."""
    from . import fixtures

    rng = random.Random(seed)
    q = base if base is not None else fixtures.get(rng.choice(BASES))
    n = rng.randint(1, 3) if splits is None else splits
    for _ in range(n):
        q = subdivide(q, rng.randrange(q.n_arrows))
    g = [(rng.randint(-1, 1), rng.randint(-1, 1)) for _ in range(q.n_vertices)]
    return gauge_transform(q, g).renamed(f"random-{seed}")
