"""Degree-0 and degree-1 fields of dense local tensors.

A local tensor on face ``a`` is an ndarray with one axis per vertex of ``a``,
in sorted vertex order, each axis of length ``|E_i|``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Mapping

import numpy as np

from .nerve import Face, Nerve


def _check_sub(beta: Face, alpha: Face) -> None:
    if not set(beta) <= set(alpha):
        raise ValueError(f"not a subface: {beta} of {alpha}")


def broadcastable(t: np.ndarray, beta: Face, alpha: Face) -> np.ndarray:
    """Reshape a tensor on beta so that it broadcasts against tensors on alpha."""
    _check_sub(beta, alpha)
    t = np.asarray(t, dtype=float)
    bset = set(beta)
    sizes = iter(t.shape)
    return t.reshape([next(sizes) if v in bset else 1 for v in alpha])


def extend(t: np.ndarray, beta: Face, alpha: Face, alpha_shape: tuple[int, ...]) -> np.ndarray:
    """Pull a function on E_beta back to E_alpha; constant along alpha minus beta."""
    view = broadcastable(t, beta, alpha)
    if len(alpha_shape) != len(alpha):
        raise ValueError(f"shape {alpha_shape} does not fit face {alpha}")
    return np.broadcast_to(view, alpha_shape).copy()


def marginal_axes(alpha: Face, beta: Face) -> tuple[int, ...]:
    bset = set(beta)
    return tuple(k for k, v in enumerate(alpha) if v not in bset)


def marginalize(t: np.ndarray, alpha: Face, beta: Face) -> np.ndarray:
    """Partial integration of a measure on E_alpha down to E_beta."""
    _check_sub(beta, alpha)
    t = np.asarray(t, dtype=float)
    axes = marginal_axes(alpha, beta)
    if not axes:
        return t.copy()
    return t.sum(axis=axes)


@dataclass(frozen=True)
class Context:
    """A nerve together with the cardinalities of its vertex state spaces."""

    nerve: Nerve
    cardinalities: Mapping[int, int]

    def __post_init__(self):
        missing = [v for v in self.nerve.vertices if v not in self.cardinalities]
        if missing:
            raise ValueError(f"no cardinality for vertices {missing}")
        for v, n in self.cardinalities.items():
            if int(n) < 1:
                raise ValueError(f"cardinality of vertex {v} must be >= 1, got {n}")

    def face_shape(self, face: Face) -> tuple[int, ...]:
        return tuple(int(self.cardinalities[v]) for v in face)

    @property
    def omega(self) -> Face:
        return self.nerve.vertices

    def zeros0(self) -> "Field0":
        return Field0(self, {a: np.zeros(self.face_shape(a)) for a in self.nerve})

    def zeros1(self) -> "Field1":
        return Field1(self, {p: np.zeros(self.face_shape(p[1])) for p in self.nerve.pairs})

    def extend(self, t: np.ndarray, beta: Face, alpha: Face) -> np.ndarray:
        return extend(t, beta, alpha, self.face_shape(alpha))


class _Field:
    """Shared vector-space structure of Field0 and Field1."""

    def __init__(self, context: Context, data: Mapping):
        self.context = context
        keys = self._keys(context)
        if set(data) != set(keys):
            raise ValueError("field keys do not match the nerve")
        self.data = {}
        for k in keys:
            arr = np.asarray(data[k], dtype=float)
            want = context.face_shape(self._face_of(k))
            if arr.shape != want:
                raise ValueError(f"tensor at {k} has shape {arr.shape}, expected {want}")
            self.data[k] = arr

    @staticmethod
    def _keys(context: Context):
        raise NotImplementedError

    @staticmethod
    def _face_of(key) -> Face:
        raise NotImplementedError

    def keys(self):
        return self.data.keys()

    def items(self):
        return self.data.items()

    def __getitem__(self, key) -> np.ndarray:
        return self.data[key]

    def __iter__(self) -> Iterator:
        return iter(self.data)

    def __len__(self) -> int:
        return len(self.data)

    def _check(self, other: "_Field") -> None:
        if type(other) is not type(self) or other.context.nerve.faces != self.context.nerve.faces:
            raise ValueError("field mismatch")

    def map(self, fn: Callable[[np.ndarray], np.ndarray]):
        return type(self)(self.context, {k: fn(v) for k, v in self.data.items()})

    def __add__(self, other):
        self._check(other)
        return type(self)(self.context, {k: v + other.data[k] for k, v in self.data.items()})

    def __sub__(self, other):
        self._check(other)
        return type(self)(self.context, {k: v - other.data[k] for k, v in self.data.items()})

    def __neg__(self):
        return self.map(np.negative)

    def __mul__(self, a: float):
        return self.map(lambda v: a * v)

    __rmul__ = __mul__

    def sup_norm(self) -> float:
        if not self.data:
            return 0.0
        return max(float(np.max(np.abs(v))) for v in self.data.values())

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(v)) for v in self.data.values())

    def copy(self):
        return self.map(np.copy)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({len(self)} tensors)"


class Field0(_Field):
    """One tensor per face, living on that face."""

    @staticmethod
    def _keys(context):
        return context.nerve.faces

    @staticmethod
    def _face_of(key):
        return key


class Field1(_Field):
    """One tensor per strict pair (a, b), living on the smaller face b."""

    @staticmethod
    def _keys(context):
        return context.nerve.pairs

    @staticmethod
    def _face_of(key):
        return key[1]


def field_axpy(a: float, x: _Field, y: _Field) -> _Field:
    """Return y + a * x."""
    y._check(x)
    return type(y)(y.context, {k: v + a * x.data[k] for k, v in y.data.items()})


def duality_pairing(lam: _Field, f: _Field) -> float:
    """Sum of local integrals of a density against an observable."""
    lam._check(f)
    return float(sum(np.sum(lam.data[k] * f.data[k]) for k in lam.data))


def normalize_beliefs(q: Field0) -> Field0:
    return q.map(lambda v: v / v.sum())


def is_belief(q: Field0, tol: float = 1e-12) -> bool:
    return all(np.all(v > 0) and abs(v.sum() - 1.0) <= tol for v in q.data.values())
