import itertools

import pytest
from hypothesis import HealthCheck, settings

from dimercontract import fixtures
from dimercontract.quiver import DimerQuiver

settings.register_profile("pkg", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("pkg")

ALL = list(fixtures.FIXTURES)
NONDEGENERATE = ["C3", "CONIFOLD", "NC5", "FIG1_Q", "FIG3_SEQ", "C3_PSEUDO"]


def same_up_to_labels(a: DimerQuiver, b: DimerQuiver) -> bool:
    """Equal as combinatorial data after some vertex and arrow relabelling.

    Brute force over vertex and arrow permutations; only for tiny quivers.
    Faces are compared as signed cyclic words.
    """
    if (a.n_vertices, a.n_arrows, len(a.faces)) != (b.n_vertices, b.n_arrows, len(b.faces)):
        return False

    def faces(q, amap):
        out = set()
        for f in q.faces:
            word = [amap[x] for x in f.boundary]
            k = word.index(min(word))
            out.add((f.sign, tuple(word[k:] + word[:k])))
        return out

    target = faces(b, list(range(b.n_arrows)))
    for vp in itertools.permutations(range(a.n_vertices)):
        for ap in itertools.permutations(range(a.n_arrows)):
            ok = all(
                (vp[x.tail], vp[x.head], x.winding) == (b.arrows[ap[x.id]].tail, b.arrows[ap[x.id]].head, b.arrows[ap[x.id]].winding)
                for x in a.arrows
            )
            if ok and faces(a, ap) == target:
                return True
    return False


@pytest.fixture(params=ALL)
def fixture_quiver(request):
    return fixtures.get(request.param)


ACCEPTANCE: dict[int, str] = {}


def record(n: int, ok: bool, text: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {text}"
    ACCEPTANCE[n] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
