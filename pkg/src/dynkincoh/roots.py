"""Exact realizations of finite root systems.

Two models are used.  Coordinate models store every root in the simple-root
basis with coefficients in Z[phi], phi = (1 + sqrt 5)/2, encoded as integer
pairs ``(a, b) = a + b*phi``; crystallographic types simply have ``b = 0``.
Dihedral types I2(m) use the polygon model: the 2m roots are indexed by
``k mod 2m`` (angle ``k*pi/m``) and every group element acts as ``k -> +-k + c``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np

from .diagram import CoxeterDiagram, DiagramError, classify


# -- Z[phi] arithmetic on int arrays whose last axis is (a, b) ----------------

def zmul(x, y):
    a, b = x[..., 0], x[..., 1]
    c, d = y[..., 0], y[..., 1]
    bd = b * d
    return np.stack([a * c + bd, a * d + b * c + bd], axis=-1)


def zsign(a, b):
    """Exact sign of a + b*phi."""
    # a + b*phi = ((2a + b) + b*sqrt5) / 2
    p, q = 2 * a + b, b
    if p >= 0 and q >= 0:
        return 0 if p == 0 and q == 0 else 1
    if p <= 0 and q <= 0:
        return -1
    # opposite signs: compare p^2 with 5 q^2
    if p > 0:
        return 1 if p * p > 5 * q * q else -1
    return 1 if 5 * q * q > p * p else -1


def _ip(m, li, lj):
    """Symmetric bilinear form value (alpha_i, alpha_j) for a crystallographic bond."""
    if m == 2:
        return Fraction(0)
    if m == 3:
        if li != lj:
            raise DiagramError("simple bond between roots of different lengths")
        return -li / 2
    lo, hi = min(li, lj), max(li, lj)
    if m == 4 and hi == 2 * lo:
        return -lo
    if m == 6 and hi == 3 * lo:
        return -Fraction(3, 2) * lo
    raise DiagramError(f"root lengths {li}, {lj} incompatible with bond {m}")


def _propagate_lengths(D: CoxeterDiagram):
    """Squared lengths for a custom tree diagram with bonds in {3, 4, 6}."""
    lengths = {D.vertices[0]: Fraction(6)}
    stack = [D.vertices[0]]
    while stack:
        v = stack.pop()
        for w in D.adjacency[v]:
            if w in lengths:
                continue
            k = D.m(v, w)
            ratio = {3: 1, 4: 2, 6: 3}[k]
            # earlier vertex in the order gets the long root
            lengths[w] = lengths[v] / ratio if D.index[v] < D.index[w] else lengths[v] * ratio
            stack.append(w)
    return lengths


def cartan_matrix(D: CoxeterDiagram):
    """Integer Cartan matrix ``A[i][j] = <alpha_i^vee, alpha_j>`` for crystallographic D."""
    lengths = D.lengths or _propagate_lengths(D)
    n = D.rank
    A = [[0] * n for _ in range(n)]
    for i, vi in enumerate(D.vertices):
        for j, vj in enumerate(D.vertices):
            if i == j:
                A[i][j] = 2
                continue
            val = 2 * _ip(D.m(vi, vj), lengths[vi], lengths[vj]) / lengths[vi]
            if val.denominator != 1:
                raise DiagramError("non-integral Cartan entry")
            A[i][j] = int(val)
    return A


class RootSystem:
    """Common interface: ``gen_perm``, ``simple``, ``positive`` and :meth:`act`."""

    n: int
    R: int
    simple: np.ndarray
    gen_perm: np.ndarray
    positive: np.ndarray

    def act(self, img, r):
        """Images of root ``r`` under elements whose simple-root images are ``img``."""
        raise NotImplementedError


class CoordinateRootSystem(RootSystem):
    def __init__(self, cartan):
        # cartan[i][j] is a Z[phi] pair for <alpha_i^vee, alpha_j>
        n = len(cartan)
        self.n = n
        A = [[tuple(cartan[i][j]) for j in range(n)] for i in range(n)]
        simple = []
        for i in range(n):
            v = [(0, 0)] * n
            v[i] = (1, 0)
            simple.append(tuple(v))

        def reflect(i, v):
            # s_i(v) = v - <alpha_i^vee, v> alpha_i
            pa = pb = 0
            for j in range(n):
                a, b = v[j]
                c, d = A[i][j]
                pa += a * c + b * d
                pb += a * d + b * c + b * d
            out = list(v)
            out[i] = (v[i][0] - pa, v[i][1] - pb)
            return tuple(out)

        seen = {r: k for k, r in enumerate(simple)}
        roots = list(simple)
        k = 0
        while k < len(roots):
            for i in range(n):
                w = reflect(i, roots[k])
                if w not in seen:
                    seen[w] = len(roots)
                    roots.append(w)
                    if len(roots) > 10_000:
                        raise DiagramError("root system is infinite")
            k += 1
        self.R = len(roots)
        self.roots = roots
        self.coords = np.array(roots, dtype=np.int64)  # (R, n, 2)
        self.simple = np.arange(n)
        self.gen_perm = np.array([[seen[reflect(i, r)] for r in roots] for i in range(n)],
                                 dtype=np.int64)
        pos = []
        for r in roots:
            signs = {zsign(a, b) for a, b in r} - {0}
            if len(signs) != 1:
                raise DiagramError("root with mixed-sign coordinates")
            pos.append(signs == {1})
        self.positive = np.array(pos)
        flat = self.coords.reshape(self.R, -1)
        self.offset = int(np.abs(flat).max())
        self.base = 2 * self.offset + 1
        self._weights = self.base ** np.arange(flat.shape[1], dtype=np.int64)
        self.uses_phi = bool(np.any(self.coords[..., 1]))
        keys = self._keys(flat)
        order = np.argsort(keys)
        self._sorted_keys = keys[order]
        self._sorted_idx = order

    def _keys(self, flat):
        return ((flat + self.offset) * self._weights).sum(axis=-1)

    def lookup(self, vecs):
        """Root indices of vectors of shape (..., n, 2); raises on non-roots."""
        flat = vecs.reshape(vecs.shape[:-2] + (-1,))
        if np.any(np.abs(flat) > self.offset):
            raise ValueError("vector is not a root")
        keys = self._keys(flat)
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, len(self._sorted_keys) - 1)
        if not np.all(self._sorted_keys[pos] == keys):
            raise ValueError("vector is not a root")
        return self._sorted_idx[pos]

    def act(self, img, r):
        c = self.coords[r]
        acc = None
        for j in range(self.n):
            if not c[j].any():
                continue
            term = zmul(np.broadcast_to(c[j], (img.shape[0], self.n, 2)), self.coords[img[:, j]])
            acc = term if acc is None else acc + term
        return self.lookup(acc)


class PolygonRootSystem(RootSystem):
    """I2(m): roots k mod 2m at angle k*pi/m; alpha_1 = 0, alpha_2 = m - 1."""

    def __init__(self, m):
        self.m = m
        self.n = 2
        self.R = 2 * m
        ks = np.arange(2 * m)
        self.simple = np.array([0, m - 1])
        self.gen_perm = np.array([(m - ks) % (2 * m), (3 * m - 2 - ks) % (2 * m)])
        self.positive = ks < m
        self.uses_phi = False

    def act(self, img, r):
        M = 2 * self.m
        c = img[:, 0].astype(np.int64)
        e = np.where((img[:, 1] - c) % M == (self.m - 1) % M, 1, -1)
        return (e * r + c) % M


def root_system(D: CoxeterDiagram) -> RootSystem:
    """Pick an exact realization for a finite-type diagram."""
    label = classify(D)
    if label is None:
        raise DiagramError(f"{D!r} is not of finite type")
    values = {D.m(a, b) for a, b in combinations(D.vertices, 2)}
    n = D.rank
    if n == 2 and (label.startswith("I2") or D.name and D.name.startswith("I2")):
        return PolygonRootSystem(D.m(*D.vertices))
    if 5 in values:
        cart = [[(2, 0) if i == j else
                 {2: (0, 0), 3: (-1, 0), 5: (0, -1)}[D.m(vi, vj)]
                 for j, vj in enumerate(D.vertices)]
                for i, vi in enumerate(D.vertices)]
        return CoordinateRootSystem(cart)
    A = cartan_matrix(D)
    return CoordinateRootSystem([[(x, 0) for x in row] for row in A])
