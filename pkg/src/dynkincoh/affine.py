"""Affine Weyl groups W = Q x| W0 acting on the coroot lattice.

Elements are pairs ``(t, M)`` of an integer translation and an integer
matrix (the W0 part in the coroot basis), multiplied as
``(t, M)(t', M') = (t + M t', M M')``.  The affine node is vertex ``0``,
placed last in the vertex order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, prod

import numpy as np

from .complexes import ParabolicSystem, build_hc_complex
from .diagram import (INF, CoxeterDiagram, DiagramError, Subdiagram, classify,
                      maximal_proper_connected, named_diagram)
from .group import GroupData, build_group
from .linalg import det, nullspace, smith_normal_form
from .roots import _propagate_lengths, cartan_matrix, root_system

AFFINE_NODE = 0
DEFAULT_MAX_RANK = 4

_BOND = {0: 2, 1: 3, 2: 4, 3: 6}


def _finite_data(D0: CoxeterDiagram):
    label = classify(D0)
    if label is None:
        raise DiagramError(f"{D0!r} is not of finite type")
    if label[0] == "H" or label.startswith("I2"):
        raise DiagramError(f"{label} is not crystallographic")
    lengths = D0.lengths or _propagate_lengths(D0)
    A = cartan_matrix(D0)
    rs = root_system(D0)
    coords = rs.coords[..., 0]  # crystallographic: b part is zero
    heights = coords.sum(axis=1)
    theta = [int(x) for x in coords[int(np.argmax(heights))]]
    n = D0.rank
    # (alpha_i, alpha_j) = A_ij |alpha_i|^2 / 2
    vs = D0.vertices
    form = [[A[i][j] * lengths[vs[i]] / 2 for j in range(n)] for i in range(n)]
    tt = sum(theta[i] * theta[j] * form[i][j] for i in range(n) for j in range(n))
    # <alpha_i^vee, theta> and <theta^vee, alpha_i>
    a_i_theta = [sum(A[i][j] * theta[j] for j in range(n)) for i in range(n)]
    theta_vee = [Fraction(theta[i]) * lengths[vs[i]] / tt for i in range(n)]
    theta_alpha = [sum(theta_vee[j] * A[j][i] for j in range(n)) for i in range(n)]
    return A, lengths, theta, theta_vee, tt, a_i_theta, theta_alpha


def completed_diagram(D0: CoxeterDiagram) -> CoxeterDiagram:
    """The affine completion of a crystallographic finite diagram."""
    A, lengths, theta, theta_vee, tt, a_i_theta, theta_alpha = _finite_data(D0)
    n = D0.rank
    vs = list(D0.vertices) + [AFFINE_NODE]
    if AFFINE_NODE in D0.vertices:
        raise DiagramError("vertex 0 is reserved for the affine node")
    m = {}
    for a, b in itertools.combinations(D0.vertices, 2):
        m[(a, b)] = D0.m(a, b)
    for i, v in enumerate(D0.vertices):
        prodv = int(-a_i_theta[i] * -theta_alpha[i])
        m[(v, AFFINE_NODE)] = _BOND.get(prodv, INF)
    new_lengths = dict(lengths)
    new_lengths[AFFINE_NODE] = tt
    name = f"affine-{D0.name}" if D0.name else None
    return CoxeterDiagram(vs, m, name=name, lengths=new_lengths)


@dataclass(frozen=True)
class LatticeQuotient:
    smith_form: tuple
    U: tuple
    V: tuple

    @property
    def free_rank(self):
        return sum(1 for d in self.smith_form if d == 0)

    @property
    def torsion(self):
        return tuple(d for d in self.smith_form if d not in (0, 1))

    @property
    def torsion_order(self):
        return prod(d for d in self.smith_form if d != 0)

    def coords(self, t):
        """Coset coordinates ``U t`` reduced modulo the nonzero invariants."""
        y = [sum(self.U[i][j] * int(t[j]) for j in range(len(t))) for i in range(len(t))]
        return tuple(yi % d if d else yi for yi, d in zip(y, self.smith_form))

    def contains(self, t):
        return all(c == 0 for c in self.coords(t))

    @cached_property
    def U_inv(self):
        n = len(self.U)
        M = np.array(self.U, dtype=object)
        inv = []
        for j in range(n):
            e = [int(i == j) for i in range(n)]
            inv.append(_solve_unimodular(self.U, e))
        return tuple(tuple(inv[j][i] for j in range(n)) for i in range(n))

    def lift(self, y):
        n = len(y)
        return tuple(sum(self.U_inv[i][j] * y[j] for j in range(n)) for i in range(n))

    def kernel_basis(self):
        """Z-basis of the fixed lattice, as columns of V with zero invariant."""
        cols = [j for j, d in enumerate(self.smith_form) if d == 0]
        return [[self.V[i][j] for i in range(len(self.V))] for j in cols]


def _solve_unimodular(U, b):
    from .linalg import rref
    n = len(U)
    aug = [list(U[i]) + [b[i]] for i in range(n)]
    R, _ = rref(aug)
    x = [R[i][n] for i in range(n)]
    if any(Fraction(v).denominator != 1 for v in x):
        raise AssertionError("matrix is not unimodular")
    return [int(v) for v in x]


@dataclass(frozen=True)
class AffineClassRep:
    t: tuple
    v: int
    v_class: int
    order_infinite: bool
    coset: tuple = ()


def _matmul_stack(a, b):
    return np.matmul(a, b)


class AffineData:
    def __init__(self, D0: CoxeterDiagram, max_rank=DEFAULT_MAX_RANK):
        if D0.rank > max_rank:
            raise DiagramError(f"rank {D0.rank} exceeds the affine cap {max_rank}")
        self.finite_diagram = D0
        self.completed = completed_diagram(D0)
        self.n = D0.rank
        A, lengths, theta, theta_vee, tt, a_i_theta, theta_alpha = _finite_data(D0)
        self.cartan = A
        self.theta = theta
        self.theta_vee = tuple(int(x) for x in theta_vee)
        self.G = build_group(D0)
        n = self.n
        gens = []
        for i in range(n):
            M = np.eye(n, dtype=np.int64)
            for j in range(n):
                M[i, j] -= A[j][i]
            gens.append(M)
        self.gen_mats = np.array(gens)
        self.mats = self.G.realize(self.gen_mats, _matmul_stack, np.eye(n, dtype=np.int64))
        # s_theta(x) = x - <theta, x> theta^vee
        s_theta = np.eye(n, dtype=np.int64)
        for j in range(n):
            pair = sum(A[j][i] * theta[i] for i in range(n))  # <theta, alpha_j^vee>
            for i in range(n):
                s_theta[i, j] -= pair * self.theta_vee[i]
        self.s_theta = self.find_element(s_theta)
        self._quot = {}

    @property
    def lattice_rank(self):
        return self.n

    @property
    def w0_action(self):
        return self.mats

    def find_element(self, M):
        hit = np.nonzero(np.all(self.mats == np.asarray(M)[None], axis=(1, 2)))[0]
        if hit.size != 1:
            raise AssertionError("matrix is not in W0")
        return int(hit[0])

    def sign(self, v):
        return int(self.G.sign[v])

    # -- affine group elements ------------------------------------------------

    def generator(self, vertex):
        if vertex == AFFINE_NODE:
            return (self.theta_vee, self.s_theta)
        return ((0,) * self.n, self.G.generator(vertex))

    def multiply(self, x, y):
        t, v = x
        t2, v2 = y
        Mt = self.mats[v] @ np.array(t2, dtype=np.int64)
        return (tuple(int(a + b) for a, b in zip(t, Mt)), self.G.multiply(v, v2))

    def element_from_word(self, word):
        x = ((0,) * self.n, 0)
        for v in word:
            x = self.multiply(x, self.generator(v))
        return x

    def is_infinite_order(self, t, v):
        k = self.G.element_order(v)
        acc = np.zeros(self.n, dtype=np.int64)
        x = np.array(t, dtype=np.int64)
        for _ in range(k):
            acc += x
            x = self.mats[v] @ x
        return bool(np.any(acc))

    # -- lattice quotients ----------------------------------------------------

    def lattice_quotient(self, v) -> LatticeQuotient:
        v = int(v)
        if v not in self._quot:
            M = np.eye(self.n, dtype=np.int64) - self.mats[v]
            D, U, V = smith_normal_form(M.tolist())
            diag = tuple(D[i][i] for i in range(self.n))
            self._quot[v] = LatticeQuotient(diag, tuple(map(tuple, U)), tuple(map(tuple, V)))
        return self._quot[v]

    def centralizer(self, v):
        Mv = self.mats[v]
        ok = np.all(np.matmul(self.mats, Mv) == np.matmul(Mv, self.mats), axis=(1, 2))
        return [int(x) for x in np.nonzero(ok)[0]]

    def _orbit(self, v, y, cent):
        L = self.lattice_quotient(v)
        t = np.array(L.lift(y), dtype=np.int64)
        return {L.coords(self.mats[x] @ t) for x in cent}

    @staticmethod
    def _tkey(t):
        return (sum(abs(int(a)) for a in t), tuple(-int(a) for a in t))

    def canonical_key(self, t, v):
        """Exact W-class invariant: (class of v, smallest coset coordinate in the C(v)-orbit)."""
        P = self.G.whole
        cid = P.class_of_element(v)
        rep = P.classes[cid].representative
        g = self._conjugator(v, rep)
        tt = self.mats[g] @ np.array(t, dtype=np.int64)
        orbit = self._orbit(rep, self.lattice_quotient(rep).coords(tt), self._centralizer_cached(rep))
        return (cid, min(orbit))

    @cached_property
    def _cent_cache(self):
        return {}

    def _centralizer_cached(self, v):
        if v not in self._cent_cache:
            self._cent_cache[v] = self.centralizer(v)
        return self._cent_cache[v]

    def _conjugator(self, v, rep):
        """Some g in W0 with g v g^-1 = rep."""
        G = self.G
        Mv, Mr = self.mats[v], self.mats[rep]
        lhs = np.matmul(self.mats, Mv)
        rhs = np.matmul(Mr, self.mats)
        hit = np.nonzero(np.all(lhs == rhs, axis=(1, 2)))[0]
        if hit.size == 0:
            raise AssertionError("elements are not conjugate")
        return int(hit[0])

    def class_representatives(self, height_bound=2):
        """One (t, v) per orbit of C(v) on Q/Q_v, free coordinates bounded by ``height_bound``."""
        if height_bound < 0:
            raise ValueError("height bound must be nonnegative")
        out = []
        for c in self.G.whole.classes:
            v = c.representative
            L = self.lattice_quotient(v)
            cent = self._centralizer_cached(v)
            ranges = [range(d) if d else range(-height_bound, height_bound + 1) for d in L.smith_form]
            seen = set()
            class_reps = []
            for y in itertools.product(*ranges):
                y = tuple(y)
                if y in seen:
                    continue
                orbit = self._orbit(v, y, cent)
                seen |= orbit
                ts = [L.lift(z) for z in orbit
                      if all(d or abs(zi) <= height_bound for zi, d in zip(z, L.smith_form))]
                t = min(ts, key=self._tkey)
                class_reps.append(AffineClassRep(tuple(int(a) for a in t), v, c.id,
                                                 self.is_infinite_order(t, v), min(orbit)))
            class_reps.sort(key=lambda r: self._tkey(r.t))
            out += class_reps
        return out

    def centralizer_image(self, rep: AffineClassRep):
        L = self.lattice_quotient(rep.v)
        t = np.array(rep.t, dtype=np.int64)
        return [x for x in self._centralizer_cached(rep.v) if L.contains(self.mats[x] @ t - t)]

    def restricted_action(self, x, v):
        """Matrix of x on the fixed lattice of v, in the Smith kernel basis."""
        K = self.lattice_quotient(v).kernel_basis()
        k = len(K)
        if k == 0:
            return []
        Km = np.array(K, dtype=np.int64).T  # n x k
        img = self.mats[x] @ Km
        # solve Km X = img over Q
        out = [[Fraction(0)] * k for _ in range(k)]
        from .linalg import rref
        aug = [list(map(int, Km[i])) + list(map(int, img[i])) for i in range(self.n)]
        R, piv = rref(aug)
        if piv[:k] != list(range(k)):
            raise AssertionError("kernel basis is degenerate")
        for r in range(k):
            for c in range(k):
                out[r][c] = R[r][k + c]
        for r in range(k, self.n):
            if any(R[r][k + c] for c in range(k)):
                raise AssertionError("x does not preserve the fixed space")
        return out

    def lambda_formula_dims(self, rep: AffineClassRep):
        """(1/|Cbar|) sum eps(x) tr Lambda^(n+1-i)(x on V^v), for i = 0..n+1."""
        Cbar = self.centralizer_image(rep)
        n = self.n
        sums = [Fraction(0)] * (n + 2)
        for x in Cbar:
            X = self.restricted_action(x, rep.v)
            e = exterior_traces(X)
            s = self.sign(x)
            for i in range(n + 2):
                j = n + 1 - i
                if 0 <= j < len(e):
                    sums[i] += s * e[j]
        dims = {}
        for i in range(n + 2):
            val = sums[i] / len(Cbar)
            if val.denominator != 1 or val < 0:
                raise AssertionError(f"non-integral dimension {val} at degree {i}")
            dims[i] = int(val)
        return dims

    def hd_dims_infinite_class(self, rep: AffineClassRep):
        if not rep.order_infinite:
            raise ValueError("the exterior-power formula only applies to infinite-order classes")
        return self.lambda_formula_dims(rep)

    def describe(self, rep: AffineClassRep):
        return {"t": list(rep.t), "v_word": "".join(map(str, self.G.word(rep.v))) or "e"}


def exterior_traces(X):
    """[tr Lambda^0 X, ..., tr Lambda^k X]: sums of principal minors."""
    k = len(X)
    out = [Fraction(1)]
    for j in range(1, k + 1):
        s = Fraction(0)
        for idx in itertools.combinations(range(k), j):
            s += Fraction(det([[X[a][b] for b in idx] for a in idx]))
        out.append(s)
    return out


def build_affine(D0, max_rank=DEFAULT_MAX_RANK) -> AffineData:
    if isinstance(D0, str):
        D0 = named_diagram(D0)
    return AffineData(D0, max_rank=max_rank)


def lattice_quotient(A: AffineData, v) -> LatticeQuotient:
    return A.lattice_quotient(v)


def class_representatives(A: AffineData, height_bound=2):
    return A.class_representatives(height_bound)


def centralizer_image(A: AffineData, rep):
    return A.centralizer_image(rep)


def hd_dims_infinite_class(A: AffineData, rep):
    return A.hd_dims_infinite_class(rep)


# ---------------------------------------------------------------------------
# HC_f over the completed diagram
# ---------------------------------------------------------------------------

class AffineSystem(ParabolicSystem):
    """Finite parabolics of an affine group, each hosted in a maximal proper subdiagram."""

    def __init__(self, A: AffineData):
        self.A = A
        self.diagram = A.completed
        D = self.diagram
        self.maximal = maximal_proper_connected(D)
        self._hosts = {}
        self._eps = {}

    def host(self, B):
        vs = set(B.vertices if isinstance(B, Subdiagram) else B)
        for M in self.maximal:
            if vs <= set(M.vertices):
                if M.vertices not in self._hosts:
                    self._hosts[M.vertices] = GroupData(self.diagram.restrict(M.vertices))
                return self._hosts[M.vertices]
        raise DiagramError(f"{sorted(vs)} is not a proper subdiagram")

    def subdiagrams(self):
        return [B for B in self.diagram.connected if len(B) < self.diagram.rank]

    def eps_classes(self, B):
        vs = B.vertices if isinstance(B, Subdiagram) else tuple(B)
        if vs not in self._eps:
            H = self.host(vs)
            self._eps[vs] = [(H, c) for c in H.parabolic(vs).eps_trivial_classes()]
        return [c for _, c in self._eps[vs]]

    def _word(self, B, k):
        self.eps_classes(B)
        H, c = self._eps[B.vertices][k]
        return H.word(c.representative)

    def fuse(self, B, k, B2):
        H = self.host(B2)
        word = self._word(B, k)
        x = H.element_from_word(word)
        Q = H.parabolic(B2.vertices)
        tgt = Q.classes[Q.class_of_element(x)]
        if not tgt.epsilon_trivial:
            return None, 0
        self.eps_classes(B2)
        ids = [c.id for c in self.eps_classes(B2)]
        return ids.index(tgt.id), Q.transport_sign(x)

    def class_key(self, B, k):
        t, v = self.A.element_from_word(self._word(B, k))
        return self.A.canonical_key(t, v)

    def class_name(self, key):
        cid, coset = key
        v = self.A.G.whole.classes[cid].representative
        return f"[{','.join(map(str, coset))}]{''.join(map(str, self.A.G.word(v))) or 'e'}"


def hc_f_for_affine(A: AffineData, class_filter=None):
    return build_hc_complex(AffineSystem(A), class_filter=class_filter)


def rep_key(A: AffineData, rep: AffineClassRep):
    return A.canonical_key(rep.t, rep.v)
