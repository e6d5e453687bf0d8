"""Hot inner loops, with a numba path and a plain numpy path.

The numba path is used when numba imports and ``DIMERCONTRACT_NO_NUMBA`` is
unset (or "0").  Both paths return identical results; ``benchmarks/`` times
one against the other.
"""

import os

import numpy as np

_flag = os.environ.get("DIMERCONTRACT_NO_NUMBA", "").strip().lower()
USE_NUMBA = _flag in ("", "0", "false", "no")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if not USE_NUMBA:

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


BACKEND = "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# exact cover: faces are items, arrows are options covering their two faces
# ---------------------------------------------------------------------------


def _exact_cover_py(face_ptr, face_arr, arrow_faces, allowed):
    n_faces = face_ptr.shape[0] - 1
    n_arrows = arrow_faces.shape[0]
    covered = np.zeros(n_faces, dtype=np.bool_)
    cap = 16
    out = np.zeros((cap, n_arrows), dtype=np.bool_)
    count = 0

    stack_face = np.full(n_faces + 1, -1, dtype=np.int64)
    stack_pos = np.zeros(n_faces + 1, dtype=np.int64)
    stack_arrow = np.full(n_faces + 1, -1, dtype=np.int64)

    def choose():
        # -1: every face covered, -2: some face has no candidate
        best = -1
        best_count = n_arrows + 1
        for f in range(n_faces):
            if covered[f]:
                continue
            c = 0
            for k in range(face_ptr[f], face_ptr[f + 1]):
                a = face_arr[k]
                if allowed[a] and not covered[arrow_faces[a, 0]] and not covered[arrow_faces[a, 1]]:
                    c += 1
            if c < best_count:
                best_count = c
                best = f
        if best >= 0 and best_count == 0:
            return -2
        return best

    first = choose()
    if first == -1:
        return np.zeros((1, n_arrows), dtype=np.bool_)
    if first == -2:
        return out[:0]

    depth = 0
    stack_face[0] = first
    while depth >= 0:
        f = stack_face[depth]
        prev = stack_arrow[depth]
        if prev >= 0:
            covered[arrow_faces[prev, 0]] = False
            covered[arrow_faces[prev, 1]] = False
            stack_arrow[depth] = -1
        found = -1
        width = face_ptr[f + 1] - face_ptr[f]
        while stack_pos[depth] < width:
            a = face_arr[face_ptr[f] + stack_pos[depth]]
            stack_pos[depth] += 1
            if allowed[a] and not covered[arrow_faces[a, 0]] and not covered[arrow_faces[a, 1]]:
                found = a
                break
        if found < 0:
            depth -= 1
            continue
        covered[arrow_faces[found, 0]] = True
        covered[arrow_faces[found, 1]] = True
        stack_arrow[depth] = found
        nxt = choose()
        if nxt == -1:
            if count == cap:
                grown = np.zeros((2 * cap, n_arrows), dtype=np.bool_)
                grown[:cap] = out
                out = grown
                cap *= 2
            for d in range(depth + 1):
                out[count, stack_arrow[d]] = True
            count += 1
        elif nxt >= 0:
            depth += 1
            stack_face[depth] = nxt
            stack_pos[depth] = 0
            stack_arrow[depth] = -1
    return out[:count]


if USE_NUMBA:

    @njit(cache=True)
    def _choose_face(face_ptr, face_arr, arrow_faces, allowed, covered):
        n_faces = face_ptr.shape[0] - 1
        best = -1
        best_count = arrow_faces.shape[0] + 1
        for f in range(n_faces):
            if covered[f]:
                continue
            c = 0
            for k in range(face_ptr[f], face_ptr[f + 1]):
                a = face_arr[k]
                if allowed[a] and not covered[arrow_faces[a, 0]] and not covered[arrow_faces[a, 1]]:
                    c += 1
            if c < best_count:
                best_count = c
                best = f
        if best >= 0 and best_count == 0:
            return -2
        return best

    @njit(cache=True)
    def _exact_cover_nb(face_ptr, face_arr, arrow_faces, allowed):
        n_faces = face_ptr.shape[0] - 1
        n_arrows = arrow_faces.shape[0]
        covered = np.zeros(n_faces, dtype=np.bool_)
        cap = 16
        out = np.zeros((cap, n_arrows), dtype=np.bool_)
        count = 0
        stack_face = np.full(n_faces + 1, -1, dtype=np.int64)
        stack_pos = np.zeros(n_faces + 1, dtype=np.int64)
        stack_arrow = np.full(n_faces + 1, -1, dtype=np.int64)

        first = _choose_face(face_ptr, face_arr, arrow_faces, allowed, covered)
        if first == -1:
            return np.zeros((1, n_arrows), dtype=np.bool_)
        if first == -2:
            return out[:0]
        depth = 0
        stack_face[0] = first
        while depth >= 0:
            f = stack_face[depth]
            prev = stack_arrow[depth]
            if prev >= 0:
                covered[arrow_faces[prev, 0]] = False
                covered[arrow_faces[prev, 1]] = False
                stack_arrow[depth] = -1
            found = -1
            width = face_ptr[f + 1] - face_ptr[f]
            while stack_pos[depth] < width:
                a = face_arr[face_ptr[f] + stack_pos[depth]]
                stack_pos[depth] += 1
                if allowed[a] and not covered[arrow_faces[a, 0]] and not covered[arrow_faces[a, 1]]:
                    found = a
                    break
            if found < 0:
                depth -= 1
                continue
            covered[arrow_faces[found, 0]] = True
            covered[arrow_faces[found, 1]] = True
            stack_arrow[depth] = found
            nxt = _choose_face(face_ptr, face_arr, arrow_faces, allowed, covered)
            if nxt == -1:
                if count == cap:
                    grown = np.zeros((2 * cap, n_arrows), dtype=np.bool_)
                    grown[:cap] = out
                    out = grown
                    cap *= 2
                for d in range(depth + 1):
                    out[count, stack_arrow[d]] = True
                count += 1
            elif nxt >= 0:
                depth += 1
                stack_face[depth] = nxt
                stack_pos[depth] = 0
                stack_arrow[depth] = -1
        return out[:count]


def exact_cover(face_ptr, face_arr, arrow_faces, allowed):
    """All arrow subsets meeting every face exactly once, as a bool matrix.

    ``face_ptr``/``face_arr`` is the CSR face -> arrow incidence,
    ``arrow_faces[a]`` the two faces of arrow ``a``, ``allowed`` masks out
    arrows that may not be chosen.  Rows come out in a deterministic order.
    """
    args = (
        np.ascontiguousarray(face_ptr, dtype=np.int64),
        np.ascontiguousarray(face_arr, dtype=np.int64),
        np.ascontiguousarray(arrow_faces, dtype=np.int64),
        np.ascontiguousarray(allowed, dtype=np.bool_),
    )
    if USE_NUMBA:
        return _exact_cover_nb(*args)
    return _exact_cover_py(*args)


# ---------------------------------------------------------------------------
# path-state expansion: one step of breadth-first growth over out-arrows
# ---------------------------------------------------------------------------


def _expand_np(states, out_ptr, out_arrow, heads, arrow_rows):
    v = states[:, 0]
    deg = out_ptr[v + 1] - out_ptr[v]
    rep = np.repeat(np.arange(states.shape[0]), deg)
    if rep.size == 0:
        return states[:0].copy()
    starts = np.repeat(out_ptr[v], deg)
    offs = np.arange(rep.size) - np.repeat(np.cumsum(deg) - deg, deg)
    arrows = out_arrow[starts + offs]
    new = states[rep].copy()
    new[:, 0] = heads[arrows]
    new[:, 1:] += arrow_rows[arrows]
    return new


if USE_NUMBA:

    @njit(cache=True)
    def _expand_nb(states, out_ptr, out_arrow, heads, arrow_rows):
        n, w = states.shape
        total = 0
        for i in range(n):
            v = states[i, 0]
            total += out_ptr[v + 1] - out_ptr[v]
        new = np.empty((total, w), dtype=states.dtype)
        k = 0
        for i in range(n):
            v = states[i, 0]
            for j in range(out_ptr[v], out_ptr[v + 1]):
                a = out_arrow[j]
                new[k, 0] = heads[a]
                for c in range(1, w):
                    new[k, c] = states[i, c] + arrow_rows[a, c - 1]
                k += 1
        return new


def expand_states(states, out_ptr, out_arrow, heads, arrow_rows):
    """Extend every state ``[vertex, *acc]`` by each out-arrow of its vertex.

    ``arrow_rows[a]`` is added to the accumulator columns; the vertex column
    becomes ``heads[a]``.  Duplicates are not removed here.
    """
    states = np.ascontiguousarray(states, dtype=np.int64)
    if USE_NUMBA:
        return _expand_nb(states, out_ptr, out_arrow, heads, arrow_rows)
    return _expand_np(states, out_ptr, out_arrow, heads, arrow_rows)


# ---------------------------------------------------------------------------
# bounded cycle-sum reachability
# ---------------------------------------------------------------------------


def _nonzero_cycle_np(out_ptr, out_arrow, heads, tails, weight, base, max_len):
    n_vertices = out_ptr.shape[0] - 1
    span = 2 * max_len + 1
    reach = np.zeros((n_vertices, span), dtype=np.bool_)
    reach[base, max_len] = True
    for _ in range(max_len):
        nxt = np.zeros_like(reach)
        for a in range(tails.shape[0]):
            w = weight[a]
            src = reach[tails[a]]
            if w >= 0:
                nxt[heads[a], w:] |= src[: span - w]
            else:
                nxt[heads[a], :w] |= src[-w:]
        reach = nxt
        row = reach[base].copy()
        row[max_len] = False
        if row.any():
            return True
    return False


if USE_NUMBA:

    @njit(cache=True)
    def _nonzero_cycle_nb(out_ptr, out_arrow, heads, tails, weight, base, max_len):
        n_vertices = out_ptr.shape[0] - 1
        span = 2 * max_len + 1
        reach = np.zeros((n_vertices, span), dtype=np.bool_)
        reach[base, max_len] = True
        for _ in range(max_len):
            nxt = np.zeros_like(reach)
            for a in range(tails.shape[0]):
                w = weight[a]
                t = tails[a]
                h = heads[a]
                for s in range(span):
                    if reach[t, s]:
                        d = s + w
                        if 0 <= d < span:
                            nxt[h, d] = True
            reach = nxt
            for s in range(span):
                if s != max_len and reach[base, s]:
                    return True
        return False


def nonzero_cycle_exists(out_ptr, out_arrow, heads, tails, weight, base, max_len):
    """True iff some cycle at ``base`` of length <= max_len has nonzero weight sum.

    Weights must be small integers (|w| <= 1 per arrow suffices for matching
    differences); sums outside [-max_len, max_len] cannot occur then.
    """
    args = (
        np.ascontiguousarray(out_ptr, dtype=np.int64),
        np.ascontiguousarray(out_arrow, dtype=np.int64),
        np.ascontiguousarray(heads, dtype=np.int64),
        np.ascontiguousarray(tails, dtype=np.int64),
        np.ascontiguousarray(weight, dtype=np.int64),
        int(base),
        int(max_len),
    )
    if USE_NUMBA:
        return bool(_nonzero_cycle_nb(*args))
    return bool(_nonzero_cycle_np(*args))
