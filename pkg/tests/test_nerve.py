import numpy as np
import pytest
from hypothesis import given, settings

from bpdiffusion.nerve import Nerve, bethe_numbers, canonical_face, intersection_closure, strict_pairs

from conftest import contexts

I, J, K, L = 0, 1, 2, 3


def test_horn_closure_adds_edges_and_common_vertex():
    nerve = intersection_closure([(I, J, K), (I, K, L), (J, K, L)])
    assert set(nerve.faces) == {(0, 1, 2), (0, 2, 3), (1, 2, 3), (0, 2), (1, 2), (2, 3), (2,)}


def test_single_face_is_closed():
    assert intersection_closure([(0, 1)]).faces == ((0, 1),)


def test_pairwise_intersection_added():
    assert set(intersection_closure([(0, 1), (1, 2)]).faces) == {(0, 1), (1, 2), (1,)}


def test_disjoint_faces_do_not_add_empty_face():
    assert set(intersection_closure([(0,), (1,)]).faces) == {(0,), (1,)}


def test_empty_input_rejected():
    with pytest.raises(ValueError, match="empty hypergraph"):
        intersection_closure([])
    with pytest.raises(ValueError):
        canonical_face([])


def test_from_faces_rejects_unclosed():
    with pytest.raises(ValueError, match="not closed"):
        Nerve.from_faces([(0, 1), (1, 2)])


def test_horn_bethe_numbers_match_linear_solve():
    nerve = intersection_closure([(0, 1, 2), (0, 2, 3), (1, 2, 3)])
    n = len(nerve)
    # A[b, a] = 1 when a contains b; solve A c = 1 independently of the recursion
    A = np.array([[1.0 if set(b) <= set(a) else 0.0 for a in nerve.faces] for b in nerve.faces])
    c_solve = np.linalg.solve(A, np.ones(n))
    c = bethe_numbers(nerve)
    assert [c[a] for a in nerve.faces] == pytest.approx(c_solve, abs=1e-12)
    expected = {(0, 1, 2): 1, (0, 2, 3): 1, (1, 2, 3): 1, (0, 2): -1, (1, 2): -1, (2, 3): -1, (2,): 1}
    assert c == expected


def test_bethe_chain_and_single_face():
    assert bethe_numbers(intersection_closure([(0, 1), (1,)])) == {(0, 1): 1, (1,): 0}
    assert bethe_numbers(intersection_closure([(3, 4)])) == {(3, 4): 1}


def test_strict_pairs_small_cases():
    assert strict_pairs(intersection_closure([(0, 1), (1,)])) == [((0, 1), (1,))]
    assert strict_pairs(intersection_closure([(0,)])) == []


def test_horn_has_twelve_strict_pairs():
    nerve = intersection_closure([(0, 1, 2), (0, 2, 3), (1, 2, 3)])
    brute = [(a, b) for a in nerve.faces for b in nerve.faces if a != b and set(b) <= set(a)]
    assert len(brute) == 12
    assert strict_pairs(nerve) == brute  # outer face order, then inner


@settings(max_examples=60, deadline=None)
@given(contexts())
def test_closure_properties(ctx):
    nerve = ctx.nerve
    assert intersection_closure(nerve.faces).faces == nerve.faces
    faces = set(nerve.faces)
    for a in nerve.faces:
        for b in nerve.faces:
            c = tuple(sorted(set(a) & set(b)))
            assert not c or c in faces
    # maximal faces first: no face precedes one of its strict supersets
    for i, a in enumerate(nerve.faces):
        for b in nerve.faces[i + 1:]:
            assert not set(a) < set(b)
    for b in nerve.faces:
        assert sum(nerve.bethe[a] for a in nerve.faces if set(b) <= set(a)) == 1
    pairs = set(nerve.pairs)
    for i, a in enumerate(nerve.faces):
        for j, b in enumerate(nerve.faces):
            assert ((a, b) in pairs) == (bool(nerve.order_matrix[i, j]) and i != j)
            assert bool(nerve.order_matrix[i, j]) == (set(b) <= set(a))
