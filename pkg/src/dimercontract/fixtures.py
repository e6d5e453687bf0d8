"""Named quivers used throughout the tests and reachable from the CLI.

Windings are offsets in the lattice of deck translations.  For the two
drawn examples with skew fundamental domains (FIG1_Q, FIG3_SEQ) the lattice
is spanned by T1 = (24, 0) and T2 = (12, -12) in drawing coordinates, which
is what identifies the top edge with the bottom edge shifted by half a width.
"""

from __future__ import annotations

from .quiver import DimerQuiver

# 1 vertex, 3 loops: the quiver of C^3.
C3 = DimerQuiver.build(
    1,
    [(0, 0, (1, 0), "x"), (0, 0, (0, 1), "y"), (0, 0, (-1, -1), "z")],
    [("+", "xyz"), ("-", "xzy")],
    name="C3",
)

CONIFOLD = DimerQuiver.build(
    2,
    [
        (0, 1, (0, 0), "a1"),
        (0, 1, (1, 1), "a2"),
        (1, 0, (0, -1), "b1"),
        (1, 0, (-1, 0), "b2"),
    ],
    [("+", ["a1", "b1", "a2", "b2"]), ("-", ["a1", "b2", "a2", "b1"])],
    name="CONIFOLD",
)

# Non-cancellative: the conifold with b2 subdivided by a new vertex.
NC5 = DimerQuiver.build(
    3,
    [
        (0, 1, (0, 0), "x"),
        (0, 1, (1, 1), "y"),
        (1, 0, (0, -1), "z"),
        (1, 2, (0, 0), "a"),
        (2, 0, (-1, 0), "b"),
    ],
    [("+", "xzyab"), ("-", "xabyz")],
    name="NC5",
)

# No perfect matchings at all.
DEG4 = DimerQuiver.build(
    1,
    [
        (0, 0, (1, 0), "h"),
        (0, 0, (-1, 0), "hh"),
        (0, 0, (0, 1), "v"),
        (0, 0, (0, -1), "vv"),
    ],
    [("+", ["h", "hh"]), ("+", ["v", "vv"]), ("-", ["h", "v", "hh", "vv"])],
    name="DEG4",
)

# Vertices: 0 = "1", 1 = "2", 2 = the unlabelled middle vertex.
FIG1_Q = DimerQuiver.build(
    3,
    [
        (1, 0, (-1, 1), "a"),
        (1, 0, (0, 0), "b"),
        (2, 1, (0, 0), "c"),
        (2, 1, (0, 1), "delta"),
        (0, 2, (1, -1), "e"),
        (0, 2, (0, 0), "f"),
        (0, 0, (0, -1), "g"),
    ],
    [
        ("+", ["a", "e", "c"]),
        ("-", ["b", "f", "c"]),
        ("+", ["f", "delta", "b", "g"]),
        ("-", ["e", "delta", "a", "g"]),
    ],
    name="FIG1_Q",
)

# Vertices: 0 = "1", 1 = "2", 2 = upper dot, 3 = lower dot.
# m/t are the blue arrows, u/n the green ones; the green ids come first so
# the default tie-break contracts them in the drawn order.
FIG3_SEQ = DimerQuiver.build(
    4,
    [
        (3, 2, (0, 0), "u"),
        (2, 1, (0, 1), "n"),
        (0, 1, (1, -1), "p"),
        (1, 0, (0, 0), "q"),
        (1, 0, (-1, 0), "r"),
        (0, 2, (0, 0), "s"),
        (1, 3, (0, -1), "t"),
        (2, 1, (0, 1), "m"),
    ],
    [
        ("-", "mtu"),
        ("+", "ntu"),
        ("-", "pqsnr"),
        ("+", "smqpr"),
    ],
    name="FIG3_SEQ",
)

# C3 with a pseudo-arrow p (p l and l are both unit cycles).
C3_PSEUDO = DimerQuiver.build(
    1,
    [
        (0, 0, (1, 0), "x"),
        (0, 0, (0, 1), "y"),
        (0, 0, (-1, -1), "z"),
        (0, 0, (0, 0), "p"),
        (0, 0, (0, 0), "l"),
    ],
    [("+", "xyzp"), ("-", "xzy"), ("-", "pl"), ("+", "l")],
    name="C3_PSEUDO",
)

FIXTURES: dict[str, DimerQuiver] = {
    q.name: q for q in (C3, CONIFOLD, NC5, DEG4, FIG1_Q, FIG3_SEQ, C3_PSEUDO)
}


def get(name: str) -> DimerQuiver:
    try:
        return FIXTURES[name.upper()]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None
