"""The plain-text quiver document and DOT export.

    dimer-quiver v1
    vertices 2
    arrow 0 0 1 0 0 a1
    face 0 + 0 2 1 3

Arrow lines carry ``<id> <tail> <head> <wx> <wy>`` and an optional label;
face lines carry ``<id> <+|-> <arrow ids...>``.  ``#`` starts a comment.
"""

from __future__ import annotations

from .quiver import Arrow, DimerQuiver, Face, StructuralError

HEADER = "dimer-quiver v1"


class DocumentError(StructuralError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _tokens(line: str):
    """(column, text) pairs, 1-based columns."""
    out, i = [], 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((i + 1, line[i:j]))
        i = j
    return out


def _int(tok, lineno):
    col, text = tok
    try:
        return int(text)
    except ValueError:
        raise DocumentError(f"expected an integer, got {text!r}", lineno, col) from None


def parse(text: str, name: str = "") -> DimerQuiver:
    header_seen = False
    n_vertices = None
    arrows: dict[int, Arrow] = {}
    faces: dict[int, Face] = {}
    where: dict[tuple[str, int], tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        col, kw = toks[0]
        if not header_seen:
            if line.strip() != HEADER:
                raise DocumentError(f"expected header {HEADER!r}", lineno, col)
            header_seen = True
            continue
        if kw == "vertices":
            if len(toks) != 2:
                raise DocumentError("usage: vertices <n>", lineno, col)
            if n_vertices is not None:
                raise DocumentError("vertices given twice", lineno, col)
            n_vertices = _int(toks[1], lineno)
            if n_vertices <= 0:
                raise DocumentError("need at least one vertex", lineno, toks[1][0])
        elif kw == "arrow":
            if len(toks) not in (6, 7):
                raise DocumentError("usage: arrow <id> <tail> <head> <wx> <wy> [label]", lineno, col)
            aid, t, h, wx, wy = (_int(tk, lineno) for tk in toks[1:6])
            if aid in arrows:
                raise DocumentError(f"arrow {aid} defined twice", lineno, toks[1][0])
            if n_vertices is None:
                raise DocumentError("arrow before vertices line", lineno, col)
            for tk, v in ((toks[2], t), (toks[3], h)):
                if not 0 <= v < n_vertices:
                    raise DocumentError(f"vertex {v} out of range 0..{n_vertices - 1}", lineno, tk[0])
            label = toks[6][1] if len(toks) == 7 else None
            arrows[aid] = Arrow(aid, t, h, (wx, wy), label)
            where[("arrow", aid)] = (lineno, toks[1][0])
        elif kw == "face":
            if len(toks) < 4:
                raise DocumentError("usage: face <id> <+|-> <arrow ids...>", lineno, col)
            fid = _int(toks[1], lineno)
            if fid in faces:
                raise DocumentError(f"face {fid} defined twice", lineno, toks[1][0])
            sc, sign = toks[2]
            if sign not in ("+", "-"):
                raise DocumentError(f"face sign must be + or -, got {sign!r}", lineno, sc)
            ids = []
            for tk in toks[3:]:
                a = _int(tk, lineno)
                if a not in arrows:
                    raise DocumentError(f"face {fid} uses undefined arrow {a}", lineno, tk[0])
                ids.append(a)
            faces[fid] = Face(fid, 1 if sign == "+" else -1, tuple(ids))
            where[("face", fid)] = (lineno, toks[1][0])
        else:
            raise DocumentError(f"unknown keyword {kw!r}", lineno, col)
    if not header_seen:
        raise DocumentError(f"empty document; expected header {HEADER!r}", 1, 1)
    if n_vertices is None:
        raise DocumentError("missing vertices line", 1, 1)
    for kind, table in (("arrow", arrows), ("face", faces)):
        for k, key in enumerate(sorted(table)):
            if key != k:
                line, col = where[(kind, key)]
                raise DocumentError(f"{kind} ids must be 0..{len(table) - 1} without gaps", line, col)
    return DimerQuiver(
        n_vertices,
        tuple(arrows[k] for k in sorted(arrows)),
        tuple(faces[k] for k in sorted(faces)),
        name,
    )


def emit(q: DimerQuiver) -> str:
    lines = [HEADER]
    if q.name:
        lines.append(f"# {q.name}")
    lines.append(f"vertices {q.n_vertices}")
    for a in q.arrows:
        tail = f" {a.label}" if a.label else ""
        lines.append(f"arrow {a.id} {a.tail} {a.head} {a.winding[0]} {a.winding[1]}{tail}")
    for f in q.faces:
        sign = "+" if f.sign > 0 else "-"
        lines.append(f"face {f.id} {sign} " + " ".join(map(str, f.boundary)))
    return "\n".join(lines) + "\n"


def to_dot(q: DimerQuiver) -> str:
    lines = [f'digraph "{q.name or "quiver"}" {{']
    for v in range(q.n_vertices):
        lines.append(f"  v{v} [label=\"{v}\"];")
    for a in q.arrows:
        lines.append(f"  v{a.tail} -> v{a.head} [label=\"{q.arrow_name(a.id)} ({a.winding[0]},{a.winding[1]})\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"
