"""Intersection-closed hypergraphs: faces, inclusion order, strict pairs, Bethe numbers."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

Face = tuple[int, ...]


def canonical_face(vertices: Iterable[int]) -> Face:
    """Sorted, deduplicated vertex tuple. Raises on an empty face."""
    face = tuple(sorted(set(int(v) for v in vertices)))
    if not face:
        raise ValueError("empty face")
    if face[0] < 0:
        raise ValueError(f"negative vertex id in face {face}")
    return face


def face_order_key(face: Face) -> tuple:
    # larger faces first; strict supersets always precede their subfaces
    return (-len(face), face)


def face_key(face: Face) -> str:
    return "-".join(str(v) for v in face)


def parse_face_key(key: str) -> Face:
    return canonical_face(int(v) for v in key.split("-"))


@dataclass(frozen=True)
class Nerve:
    """An intersection-closed set of faces with its inclusion order.

    Build with :func:`intersection_closure` or :meth:`Nerve.from_faces`.
    """

    faces: tuple[Face, ...]
    order_matrix: np.ndarray = field(repr=False, compare=False)
    pairs: tuple[tuple[Face, Face], ...] = field(repr=False, compare=False)
    bethe: dict[Face, int] = field(repr=False, compare=False)

    @classmethod
    def from_faces(cls, faces: Iterable[Iterable[int]]) -> "Nerve":
        """Wrap an already closed face set. Raises if it is not closed."""
        fs = sorted({canonical_face(f) for f in faces}, key=face_order_key)
        if not fs:
            raise ValueError("empty hypergraph")
        present = set(fs)
        for a, b in combinations(fs, 2):
            c = tuple(sorted(set(a) & set(b)))
            if c and c not in present:
                raise ValueError(f"faces not closed under intersection: {a} & {b} = {c}")
        n = len(fs)
        order = np.zeros((n, n), dtype=bool)
        sets = [frozenset(f) for f in fs]
        for i in range(n):
            for j in range(n):
                order[i, j] = sets[j] <= sets[i]
        pairs = tuple(
            (fs[i], fs[j]) for i in range(n) for j in range(n) if i != j and order[i, j]
        )
        bethe: dict[Face, int] = {}
        for i, a in enumerate(fs):
            bethe[a] = 1 - sum(bethe[fs[k]] for k in range(i) if order[k, i])
        return cls(tuple(fs), order, pairs, bethe)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for f in self.faces for v in f}))

    def index(self, face: Face) -> int:
        return self._index[face]

    @property
    def _index(self) -> dict[Face, int]:
        # cached lazily; dataclass is frozen
        try:
            return self.__dict__["_index_cache"]
        except KeyError:
            idx = {f: i for i, f in enumerate(self.faces)}
            object.__setattr__(self, "_index_cache", idx)
            return idx

    def contains(self, alpha: Face, beta: Face) -> bool:
        """True when beta is a subface of alpha (non-strict)."""
        return bool(self.order_matrix[self.index(alpha), self.index(beta)])

    def below(self, alpha: Face, strict: bool = True) -> list[Face]:
        i = self.index(alpha)
        return [b for j, b in enumerate(self.faces) if self.order_matrix[i, j] and (i != j or not strict)]

    def above(self, beta: Face, strict: bool = True) -> list[Face]:
        j = self.index(beta)
        return [a for i, a in enumerate(self.faces) if self.order_matrix[i, j] and (i != j or not strict)]

    def __len__(self) -> int:
        return len(self.faces)

    def __iter__(self):
        return iter(self.faces)

    def __contains__(self, face) -> bool:
        return face in self._index


def intersection_closure(faces: Iterable[Iterable[int]]) -> Nerve:
    """Smallest face set containing ``faces`` and closed under non-empty intersection."""
    closed = {canonical_face(f) for f in faces}
    if not closed:
        raise ValueError("empty hypergraph")
    frontier = set(closed)
    while frontier:
        new = set()
        for a in frontier:
            for b in closed:
                c = tuple(sorted(set(a) & set(b)))
                if c and c not in closed:
                    new.add(c)
        closed |= new
        frontier = new
    return Nerve.from_faces(closed)


def bethe_numbers(nerve: Nerve) -> dict[Face, int]:
    """Integers c with sum of c over the faces containing b equal to 1, for every face b."""
    return dict(nerve.bethe)


def strict_pairs(nerve: Nerve) -> list[tuple[Face, Face]]:
    return list(nerve.pairs)
