import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from bpdiffusion.fields import Context, Field0, Field1, duality_pairing, extend, field_axpy, marginalize
from bpdiffusion.nerve import intersection_closure

from conftest import random_field0, random_field1


def test_extend_broadcasts_along_missing_vertex():
    out = extend(np.array([1.0, 2.0]), (2,), (1, 2), (2, 2))
    assert out.tolist() == [[1, 2], [1, 2]]


def test_extend_identity():
    t = np.arange(6.0).reshape(2, 3)
    assert np.array_equal(extend(t, (0, 1), (0, 1), (2, 3)), t)


def test_extend_middle_vertex_all_entries():
    t = np.array([3.0, 7.0])
    out = extend(t, (2,), (1, 2, 3), (2, 2, 2))
    for x1, x2, x3 in itertools.product(range(2), repeat=3):
        assert out[x1, x2, x3] == t[x2]


def test_extend_and_marginalize_reject_non_subface():
    with pytest.raises(ValueError, match="not a subface"):
        extend(np.zeros(2), (5,), (1, 2), (2, 2))
    with pytest.raises(ValueError, match="not a subface"):
        marginalize(np.zeros((2, 2)), (1, 2), (3,))


def test_marginalize_examples():
    assert marginalize(np.full((2, 2), 0.25), (1, 2), (2,)).tolist() == [0.5, 0.5]
    t = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert marginalize(t, (1, 2), (2,)).tolist() == [4, 6]
    assert marginalize(t, (1, 2), (1,)).tolist() == [3, 7]
    assert np.array_equal(marginalize(t, (1, 2), (1, 2)), t)


small = arrays(np.float64, (2, 3, 2), elements=st.floats(-10, 10))


@settings(max_examples=50, deadline=None)
@given(small, st.sampled_from([(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]))
def test_marginalize_extend_adjunction(t, beta):
    alpha, shape = (0, 1, 2), (2, 3, 2)
    s = np.random.default_rng(0).standard_normal([shape[v] for v in beta])
    lhs = np.sum(marginalize(t, alpha, beta) * s)
    rhs = np.sum(t * extend(s, beta, alpha, shape))
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12 * (1 + np.abs(t).sum() * np.abs(s).max()))
    assert marginalize(t, alpha, beta).sum() == pytest.approx(t.sum(), abs=1e-12 * (1 + np.abs(t).sum()))


def test_functoriality(rng):
    shape = {0: 2, 1: 3, 2: 2, 3: 2}
    alpha, beta, gamma = (0, 1, 2, 3), (1, 2, 3), (2,)
    fa = lambda f: tuple(shape[v] for v in f)
    t = rng.standard_normal(fa(gamma))
    assert np.allclose(extend(extend(t, gamma, beta, fa(beta)), beta, alpha, fa(alpha)), extend(t, gamma, alpha, fa(alpha)))
    m = rng.standard_normal(fa(alpha))
    assert np.allclose(marginalize(marginalize(m, alpha, beta), beta, gamma), marginalize(m, alpha, gamma), atol=1e-12)


def test_pairing_examples(chain, rng):
    single = Context(intersection_closure([(0,)]), {0: 2})
    lam = Field0(single, {(0,): np.array([1.0, 0.0])})
    f = Field0(single, {(0,): np.array([3.0, 9.0])})
    assert duality_pairing(lam, f) == 3.0
    assert duality_pairing(chain.zeros0(), random_field0(chain, rng)) == 0.0
    lam, f = random_field0(chain, rng), random_field0(chain, rng)
    brute = 0.0
    for a in chain.nerve:
        for idx in np.ndindex(*chain.face_shape(a)):
            brute += lam[a][idx] * f[a][idx]
    assert duality_pairing(lam, f) == pytest.approx(brute, rel=1e-12)


def test_field1_pairing(horn, rng):
    x, y = random_field1(horn, rng), random_field1(horn, rng)
    brute = sum(float(np.sum(x[p] * y[p])) for p in horn.nerve.pairs)
    assert duality_pairing(x, y) == pytest.approx(brute)


def test_axpy():
    ctx = Context(intersection_closure([(0,)]), {0: 2})
    x = Field0(ctx, {(0,): np.array([1.0, 2.0])})
    y = Field0(ctx, {(0,): np.array([10.0, 10.0])})
    assert field_axpy(2.0, x, y)[(0,)].tolist() == [12, 14]
    assert field_axpy(0.0, x, y)[(0,)].tolist() == [10, 10]
    assert field_axpy(1.0, -y, y).sup_norm() == 0.0


def test_field_validation(chain, horn):
    with pytest.raises(ValueError):
        Field0(chain, {(1, 2): np.zeros((2, 2))})
    with pytest.raises(ValueError, match="shape"):
        Field0(chain, {(1, 2): np.zeros((2, 3)), (2,): np.zeros(2)})
    with pytest.raises(ValueError, match="mismatch"):
        field_axpy(1.0, chain.zeros0(), horn.zeros0())
    with pytest.raises(ValueError, match="mismatch"):
        duality_pairing(chain.zeros0(), chain.zeros1())
    with pytest.raises(ValueError):
        Context(intersection_closure([(0,)]), {0: 0})
    assert isinstance(horn.zeros1(), Field1) and len(horn.zeros1()) == 12
