import numpy as np
import pytest
from hypothesis import strategies as st

from bpdiffusion.fields import Context, Field0, Field1
from bpdiffusion.model import horn2_context
from bpdiffusion.nerve import intersection_closure


def random_nerve_context(rng, max_vertices=8, max_faces=12, max_card=3):
    """Random intersection-closed nerve with at most ``max_faces`` faces."""
    while True:
        nv = int(rng.integers(1, max_vertices + 1))
        nf = int(rng.integers(2, 7))
        faces = []
        for _ in range(nf):
            k = int(rng.integers(1, min(nv, 4) + 1))
            faces.append(tuple(rng.choice(nv, size=k, replace=False)))
        nerve = intersection_closure(faces)
        if len(nerve) <= max_faces:
            cards = {v: int(rng.integers(1, max_card + 1)) for v in nerve.vertices}
            return Context(nerve, cards)


def random_field0(ctx, rng, scale=1.0):
    return Field0(ctx, {a: scale * rng.standard_normal(ctx.face_shape(a)) for a in ctx.nerve})


def random_field1(ctx, rng, scale=1.0):
    return Field1(ctx, {p: scale * rng.standard_normal(ctx.face_shape(p[1])) for p in ctx.nerve.pairs})


@st.composite
def contexts(draw, max_vertices=6, max_faces=10, max_card=3):
    nv = draw(st.integers(1, max_vertices))
    face = st.sets(st.integers(0, nv - 1), min_size=1, max_size=min(nv, 4))
    faces = draw(st.lists(face, min_size=1, max_size=4))
    nerve = intersection_closure(faces)
    if len(nerve) > max_faces:
        nerve = intersection_closure(faces[:1])
    cards = {v: draw(st.integers(1, max_card)) for v in nerve.vertices}
    return Context(nerve, cards)


@pytest.fixture
def horn():
    return horn2_context()


@pytest.fixture
def chain():
    """Two faces {1, 2} and {2}, binary variables."""
    return Context(intersection_closure([(1, 2), (2,)]), {1: 2, 2: 2})


@pytest.fixture
def path3():
    return Context(intersection_closure([(0, 1), (1, 2)]), {0: 2, 1: 2, 2: 2})


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
