"""Batched flat-vector versions of the calculus operators.

Fields are flattened face by face (pairs by pair for degree 1) into one row
per sample, so a seed sweep runs as a single array program. Linear operators
are assembled once per context as sparse matrices. The dict-based functions in
:mod:`bpdiffusion.calculus` are the reference the tests compare against.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .calculus import lower_pairs
from .fields import Context, Field0, Field1, marginal_axes
from .nerve import Face


def extension_matrix(ctx: Context, beta: Face, alpha: Face) -> np.ndarray:
    """0/1 matrix of shape (|E_alpha|, |E_beta|) sending t on beta to its extension."""
    sb = ctx.face_shape(beta)
    nb = int(np.prod(sb))
    cols = np.arange(nb).reshape(sb)
    idx = np.broadcast_to(
        cols.reshape([n if v in beta else 1 for v, n in zip(alpha, ctx.face_shape(alpha))]),
        ctx.face_shape(alpha),
    ).ravel()
    E = np.zeros((idx.size, nb))
    E[np.arange(idx.size), idx] = 1.0
    return E


class Engine:
    """Flat layout and compiled operators for one context."""

    def __init__(self, ctx: Context):
        self.ctx = ctx
        nerve = ctx.nerve
        self.faces = nerve.faces
        self.pairs = nerve.pairs
        self.slice0: dict[Face, slice] = {}
        k = 0
        for a in self.faces:
            n = int(np.prod(ctx.face_shape(a)))
            self.slice0[a] = slice(k, k + n)
            k += n
        self.n0 = k
        self.slice1: dict[tuple[Face, Face], slice] = {}
        k = 0
        for p in self.pairs:
            n = int(np.prod(ctx.face_shape(p[1])))
            self.slice1[p] = slice(k, k + n)
            k += n
        self.n1 = k

        ext = {}
        for a, b in self.pairs:
            ext[a, b] = extension_matrix(ctx, b, a)

        Z0 = sp.lil_matrix((self.n0, self.n0))
        for a in self.faces:
            Z0[self.slice0[a], self.slice0[a]] = np.eye(self.slice0[a].stop - self.slice0[a].start)
        for a, b in self.pairs:
            Z0[self.slice0[a], self.slice0[b]] = ext[a, b]
        self.zeta = Z0.tocsr()

        Dl = sp.lil_matrix((self.n0, self.n1))
        for a, b in self.pairs:
            s1 = self.slice1[a, b]
            Dl[self.slice0[b], s1] = np.eye(s1.stop - s1.start)
            Dl[self.slice0[a], s1] = -ext[a, b]
        self.delta = Dl.tocsr()

        # pair-level zeta: blocks E_{b b'} for componentwise-smaller pairs
        Z1 = np.zeros((self.n1, self.n1))
        for p in self.pairs:
            s = self.slice1[p]
            Z1[s, s] = np.eye(s.stop - s.start)
            for q in lower_pairs(nerve, p):
                Z1[s, self.slice1[q]] = extension_matrix(ctx, q[1], p[1])
        self.zeta1 = sp.csr_matrix(Z1)
        self.mobius1 = sp.csr_matrix(_unitriangular_inverse(Z1, self._pair_perm()))

        self.bethe_weights = np.concatenate(
            [np.full(self.slice1[p].stop - self.slice1[p].start, float(nerve.bethe[p[0]])) for p in self.pairs]
        ) if self.pairs else np.zeros(0)

        self._pair_info = [
            (self.slice0[a], self.slice0[b], self.slice1[a, b], ctx.face_shape(a), marginal_axes(a, b))
            for a, b in self.pairs
        ]
        self._face_info = [(self.slice0[a], ctx.face_shape(a)) for a in self.faces]

    def _pair_perm(self) -> np.ndarray:
        order = sorted(self.pairs, key=lambda p: (len(p[0]) + len(p[1]), self.faces.index(p[0]), self.faces.index(p[1])))
        return np.concatenate([np.arange(self.slice1[p].start, self.slice1[p].stop) for p in order]) if order else np.zeros(0, int)

    # conversions
    def flatten0(self, f: Field0) -> np.ndarray:
        return np.concatenate([np.asarray(f[a]).ravel() for a in self.faces])

    def flatten1(self, f: Field1) -> np.ndarray:
        if not self.pairs:
            return np.zeros(0)
        return np.concatenate([np.asarray(f[p]).ravel() for p in self.pairs])

    def field0(self, x: np.ndarray) -> Field0:
        return Field0(self.ctx, {a: x[self.slice0[a]].reshape(self.ctx.face_shape(a)).copy() for a in self.faces})

    def field1(self, x: np.ndarray) -> Field1:
        return Field1(self.ctx, {p: x[self.slice1[p]].reshape(self.ctx.face_shape(p[1])).copy() for p in self.pairs})

    # operators on batches of shape (S, n)
    def apply(self, M: sp.csr_matrix, X: np.ndarray) -> np.ndarray:
        return np.asarray((M @ X.T).T)

    def normalize(self, U: np.ndarray) -> np.ndarray:
        out = np.empty_like(U)
        S = U.shape[0]
        for s0, _ in self._face_info:
            block = U[:, s0]
            m = block.min(axis=1, keepdims=True)
            out[:, s0] = block - m + np.log(np.exp(-(block - m)).sum(axis=1, keepdims=True))
        return out

    def gradient_D(self, U: np.ndarray) -> np.ndarray:
        S = U.shape[0]
        out = np.empty((S, self.n1))
        for sa, sb, s1, shape_a, axes in self._pair_info:
            Ua = U[:, sa].reshape((S,) + shape_a)
            ax = tuple(k + 1 for k in axes)
            m = Ua.min(axis=ax, keepdims=True)
            F = m - np.log(np.exp(-(Ua - m)).sum(axis=ax, keepdims=True))
            out[:, s1] = U[:, sb] - F.reshape(S, -1)
        return out

    def gbp_flux(self, u: np.ndarray) -> np.ndarray:
        return -self.gradient_D(self.normalize(self.apply(self.zeta, u)))

    def bethe_flux(self, u: np.ndarray) -> np.ndarray:
        return self.apply(self.mobius1, -self.gradient_D(self.apply(self.zeta, u)))

    def weighted_bethe_flux(self, u: np.ndarray) -> np.ndarray:
        return -self.gradient_D(self.apply(self.zeta, u)) * self.bethe_weights

    def flux(self, algorithm: str, u: np.ndarray) -> np.ndarray:
        return getattr(self, FLUXES[algorithm])(u)

    def beliefs(self, u: np.ndarray) -> np.ndarray:
        return np.exp(-self.normalize(self.apply(self.zeta, u)))


FLUXES = {"gbp": "gbp_flux", "bethe": "bethe_flux", "bethe-weighted": "weighted_bethe_flux"}


def _unitriangular_inverse(Z: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """Invert a matrix that is unit lower-triangular after a symmetric permutation."""
    n = Z.shape[0]
    if n == 0:
        return Z.copy()
    P = Z[np.ix_(perm, perm)]
    Pinv = scipy.linalg.solve_triangular(P, np.eye(n), lower=True, unit_diagonal=True)
    out = np.empty_like(Z)
    out[np.ix_(perm, perm)] = np.rint(Pinv)
    return out
