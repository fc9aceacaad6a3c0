"""Finite Coxeter groups as permutations of their root sets.

An element ``w`` is stored through the images ``w(alpha_1), ..., w(alpha_n)``
of the simple roots, which determine it.  Elements are enumerated breadth
first by right multiplication (``w s_i`` is longer than ``w`` iff
``w(alpha_i) > 0``), so ids are ordered by Coxeter length and the BFS tree
gives a reduced word for every element.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import signed
from .diagram import (CoxeterDiagram, DiagramError, Subdiagram, classify, family_of,
                      group_order)
from .roots import root_system

log = logging.getLogger(__name__)

DEFAULT_GROUP_CAP = 300_000
LARGE_GROUP_CAP = 3_000_000
_CHUNK = 200_000


class CapExceeded(RuntimeError):
    def __init__(self, required, cap):
        super().__init__(f"group of order {required} exceeds the cap {cap}")
        self.required = required
        self.cap = cap


@dataclass(frozen=True)
class ConjugacyClass:
    id: int
    representative: int
    size: int
    centralizer_order: int
    epsilon_trivial: bool
    parent: Subdiagram
    label: object = None


@dataclass(frozen=True)
class FusionResult:
    """``target_class`` is None (the zero marker) when the target class is not eps-trivial."""

    target_class: object
    conjugator_sign: int

    @property
    def is_zero(self):
        return self.target_class is None


class GroupData:
    def __init__(self, diagram: CoxeterDiagram, cap=DEFAULT_GROUP_CAP):
        self.diagram = diagram
        self.label = classify(diagram)
        if self.label is None:
            raise DiagramError(f"{diagram!r} is not of finite type")
        self.expected_order = group_order(self.label)
        if self.expected_order > cap:
            raise CapExceeded(self.expected_order, cap)
        self.rs = root_system(diagram)
        self.n = diagram.rank
        self.gen_index = {v: k for k, v in enumerate(diagram.vertices)}
        self._enumerate()
        if self.N != self.expected_order:
            raise AssertionError(f"enumerated {self.N} elements, expected {self.expected_order}")
        self._tables()
        self._parabolics = {}
        self.family = family_of(diagram)

    # -- construction ---------------------------------------------------------

    def _right_images(self, img, i):
        rs = self.rs
        out = np.empty_like(img)
        for j in range(self.n):
            r = rs.gen_perm[i][rs.simple[j]]
            out[:, j] = rs.act(img, r)
        return out

    def _key(self, img):
        return (img.astype(np.int64) * self._kw).sum(axis=1)

    def _enumerate(self):
        rs = self.rs
        self._kw = np.int64(rs.R) ** np.arange(self.n, dtype=np.int64)
        dtype = np.uint8 if rs.R < 256 else np.int16
        layer = rs.simple[None, :].astype(dtype)
        imgs, parents, gens, lengths = [layer], [np.array([-1])], [np.array([-1])], [0]
        start = 0
        depth = 0
        while True:
            cand, par, gen = [], [], []
            for i in range(self.n):
                rows = np.nonzero(rs.positive[layer[:, i]])[0]
                if rows.size == 0:
                    continue
                for a in range(0, rows.size, _CHUNK):
                    sub = rows[a:a + _CHUNK]
                    cand.append(self._right_images(layer[sub].astype(np.int64), i).astype(dtype))
                    par.append(sub + start)
                    gen.append(np.full(sub.size, i))
            if not cand:
                break
            cand = np.concatenate(cand)
            par = np.concatenate(par)
            gen = np.concatenate(gen)
            _, first = np.unique(self._key(cand), return_index=True)
            start += layer.shape[0]
            layer = cand[first]
            depth += 1
            imgs.append(layer)
            parents.append(par[first])
            gens.append(gen[first])
            lengths.append(depth)
            if start + layer.shape[0] > 2 * self.expected_order:
                raise AssertionError("enumeration overran the expected order")
        self.img = np.concatenate(imgs)
        self.N = self.img.shape[0]
        self.parent = np.concatenate(parents).astype(np.int64)
        self.pgen = np.concatenate(gens).astype(np.int64)
        self.length = np.concatenate([np.full(x.shape[0], d, dtype=np.int64)
                                      for x, d in zip(imgs, lengths)])
        self.layer_starts = np.cumsum([0] + [x.shape[0] for x in imgs])
        keys = self._key(self.img)
        order = np.argsort(keys)
        self._sorted_keys = keys[order]
        self._sorted_ids = order

    def lookup(self, img):
        keys = self._key(img)
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, self.N - 1)
        if not np.all(self._sorted_keys[pos] == keys):
            raise ValueError("not a group element")
        return self._sorted_ids[pos]

    def _tables(self):
        N, n = self.N, self.n
        self.right = np.empty((n, N), dtype=np.int64)
        self.left = np.empty((n, N), dtype=np.int64)
        for i in range(n):
            for a in range(0, N, _CHUNK):
                block = self.img[a:a + _CHUNK].astype(np.int64)
                self.right[i, a:a + _CHUNK] = self.lookup(self._right_images(block, i))
                self.left[i, a:a + _CHUNK] = self.lookup(self.rs.gen_perm[i][block])
        self.conj = np.empty((n, N), dtype=np.int64)
        for i in range(n):
            self.conj[i] = self.left[i][self.right[i]]
        if N < 2 ** 31:
            self.right = self.right.astype(np.int32)
            self.left = self.left.astype(np.int32)
            self.conj = self.conj.astype(np.int32)

    # -- basic element operations ---------------------------------------------

    @property
    def order(self):
        return self.N

    @cached_property
    def sign(self):
        return np.where(self.length % 2 == 0, 1, -1)

    def generator(self, v):
        return int(self.right[self.gen_index[v], 0])

    def word(self, g):
        """Reduced word of element ``g`` as a list of vertex labels."""
        out = []
        g = int(g)
        while g != 0:
            out.append(self.diagram.vertices[self.pgen[g]])
            g = int(self.parent[g])
        return out[::-1]

    def element_from_word(self, word, start=0):
        g = start
        for v in word:
            g = int(self.right[self.gen_index[v], g])
        return g

    def multiply(self, a, b):
        return self.element_from_word(self.word(b), start=int(a))

    def inverse(self, g):
        return self.element_from_word(reversed(self.word(g)))

    def element_order(self, g):
        x, k = int(g), 1
        while x != 0:
            x = self.multiply(x, g)
            k += 1
        return k

    def realize(self, gen_images, compose, identity):
        """Evaluate the homomorphism ``s_i -> gen_images[i]`` on every element.

        ``compose(A, B)`` multiplies stacked arrays row-wise (``A[k] * B[k]``).
        """
        gen_images = np.asarray(gen_images)
        out = np.empty((self.N,) + gen_images.shape[1:], dtype=gen_images.dtype)
        out[0] = identity
        for a, b in zip(self.layer_starts[1:-1], self.layer_starts[2:]):
            rows = np.arange(a, b)
            out[rows] = compose(out[self.parent[rows]], gen_images[self.pgen[rows]])
        return out

    @cached_property
    def signed_perms(self):
        if self.family is None:
            raise DiagramError("signed permutations need a Bourbaki-labelled A, B or D diagram")
        fam, n = self.family
        return self.realize(signed.generator_images(fam, n), signed.compose,
                            signed.identity(n + 1 if fam == "A" else n))

    @cached_property
    def _signed_lookup(self):
        k = signed.keys(self.signed_perms)
        order = np.argsort(k)
        return k[order], order

    def element_from_signed(self, f):
        ks, order = self._signed_lookup
        key = signed.keys(np.asarray(f)[None, :])[0]
        pos = int(np.searchsorted(ks, key))
        if pos >= len(ks) or ks[pos] != key:
            raise ValueError("signed permutation is not in the group")
        return int(order[pos])

    @cached_property
    def full_perms(self):
        """Root permutation of every element, (N, R); meant for small groups."""
        if self.N * self.rs.R > 50_000_000:
            raise CapExceeded(self.N, 50_000_000 // self.rs.R)
        R = self.rs.R
        return self.realize(self.rs.gen_perm, lambda a, b: np.take_along_axis(a, b, axis=1),
                            np.arange(R))

    # -- parabolics -----------------------------------------------------------

    def parabolic(self, B) -> "Parabolic":
        if isinstance(B, Subdiagram):
            vs = B.vertices
        else:
            vs = self.diagram.sort(B)
        vs = tuple(vs)
        if vs not in self._parabolics:
            sub = self.diagram.sub(vs)
            if not self.diagram.is_connected(vs):
                raise DiagramError(f"{sub} is not connected")
            self._parabolics[vs] = Parabolic(self, sub)
        return self._parabolics[vs]

    @property
    def whole(self) -> "Parabolic":
        return self.parabolic(self.diagram.vertices)

    def subgroup_ids(self, vertices):
        """Sorted ids of the subgroup generated by ``vertices`` (any subset)."""
        gens = [self.gen_index[v] for v in vertices]
        if set(gens) == set(range(self.n)):
            return np.arange(self.N)
        mask = np.zeros(self.N, dtype=bool)
        mask[0] = True
        frontier = np.array([0])
        while frontier.size:
            nxt = []
            for i in gens:
                nb = self.right[i][frontier]
                nb = nb[~mask[nb]]
                mask[nb] = True
                nxt.append(nb)
            frontier = np.unique(np.concatenate(nxt)) if nxt else np.array([], dtype=np.int64)
        return np.nonzero(mask)[0]

    def orbit_labels(self, ids, gens):
        """For each element of ``ids``, the smallest id in its orbit under conjugation by ``gens``."""
        return _propagate(ids, [self.conj[self.gen_index[v]] for v in gens])

    def coset_labels(self, ids, gens):
        """For each element ``w`` of ``ids``, the smallest id in the left coset ``w W_gens``."""
        return _propagate(ids, [self.right[self.gen_index[v]] for v in gens])

    def describe(self, g, size=None):
        """Label ``(order, class size, word)`` used for classes without a classical name."""
        word = "".join(map(str, self.word(g))) or "e"
        out = f"o{self.element_order(g)}"
        if size is not None:
            out += f"/n{size}"
        return out + f"/{word}"


def _local(ids, glob):
    return np.searchsorted(ids, glob)


def _propagate(ids, tables):
    k = ids.size
    if not tables:
        return ids.copy()
    nbrs = [_local(ids, t[ids]) for t in tables]
    lab = np.arange(k)
    while True:
        new = lab.copy()
        for nb in nbrs:
            np.minimum(new, lab[nb], out=new)
        new = new[new]
        if np.array_equal(new, lab):
            break
        lab = new
    return ids[lab]


class Parabolic:
    """The standard parabolic subgroup W_B viewed inside its ambient group."""

    def __init__(self, group: GroupData, B: Subdiagram):
        self.group = group
        self.B = B
        self.gens = [group.gen_index[v] for v in B.vertices]
        self.ids = group.subgroup_ids(B.vertices)
        self.order = int(self.ids.size)
        self._classes()

    def local(self, glob):
        glob = np.asarray(glob)
        loc = np.searchsorted(self.ids, glob)
        loc = np.minimum(loc, self.order - 1)
        if not np.all(self.ids[loc] == glob):
            raise ValueError(f"element outside W_{self.B}")
        return loc

    def contains(self, g):
        loc = int(np.searchsorted(self.ids, g))
        return loc < self.order and self.ids[loc] == g

    def _classes(self):
        G = self.group
        ids = self.ids
        lab = G.orbit_labels(ids, self.B.vertices)
        reps, class_of = np.unique(lab, return_inverse=True)
        nbrs = [self.local(G.conj[i][ids]) for i in self.gens]
        # 2-colour the conjugation graph from each representative; an edge inside
        # one colour is an odd centralizing word
        par = np.full(self.order, -1, dtype=np.int64)
        start = self.local(reps)
        par[start] = 0
        frontier = start
        while frontier.size:
            nxt = []
            for nb in nbrs:
                y = nb[frontier]
                fresh = par[y] < 0
                par[y[fresh]] = 1 - par[frontier[fresh]]
                nxt.append(y[fresh])
            frontier = np.unique(np.concatenate(nxt))
        bad = np.zeros(self.order, dtype=bool)
        for nb in nbrs:
            bad |= par[nb] == par
        odd = np.bincount(class_of[bad], minlength=reps.size) > 0
        sizes = np.bincount(class_of, minlength=reps.size)
        self.class_of = class_of
        self.sigma = 1 - 2 * par
        rep_list = [int(r) for r in reps]
        labels = [None] * reps.size
        if G.family is not None:
            rep_list, labels = self._classical_reps(rep_list)
        elif G.n == 2:
            rep_list, labels = self._dihedral_reps(rep_list)
        # re-normalise sigma against the chosen representatives
        for c, r in enumerate(rep_list):
            if r != int(reps[c]):
                flip = self.sigma[self.local(r)]
                if flip < 0:
                    self.sigma[class_of == c] *= -1
        order = sorted(range(reps.size), key=lambda c: (int(G.length[rep_list[c]]), rep_list[c]))
        remap = np.empty(reps.size, dtype=np.int64)
        self.classes = []
        for new, c in enumerate(order):
            remap[c] = new
            self.classes.append(ConjugacyClass(
                id=new, representative=rep_list[c], size=int(sizes[c]),
                centralizer_order=self.order // int(sizes[c]),
                epsilon_trivial=not bool(odd[c]), parent=self.B, label=labels[c]))
        self.class_of = remap[class_of]

    def _classical_reps(self, reps):
        from .classical import ClassLabel
        G = self.group
        fam, n = G.family
        kind, letters = signed.layout(fam, n, self.B.vertices)
        L = G.signed_perms.shape[1]
        new_reps, labels = [], []
        for c, r in enumerate(reps):
            f = G.signed_perms[r]
            g = signed.twist(f) if kind == "A-twisted" else f
            lam, mu = signed.cycle_data(g, letters)
            if kind in ("A", "A-twisted"):
                lam = tuple(sorted(lam + mu, reverse=True))
                pat = signed.pattern(L, letters, lam)
                if kind == "A-twisted":
                    pat = signed.twist(pat)
                label = ClassLabel("A", lam)
            elif kind == "B":
                pat = signed.pattern(L, letters, lam, mu)
                label = ClassLabel("B", lam, mu)
            else:
                pat = signed.pattern(L, letters, lam, mu)
                label = ClassLabel("D-I", lam, mu)
                if not mu and all(k % 2 == 0 for k in lam):
                    cand = G.element_from_signed(pat)
                    if self.class_of[self.local(cand)] != c:
                        pat = signed.pattern(L, letters, lam, type_ii=True)
                        label = ClassLabel("D-II", lam)
            rep = G.element_from_signed(pat)
            if self.class_of[self.local(rep)] != c:
                raise AssertionError(f"pattern representative for {label} is in the wrong class")
            new_reps.append(rep)
            labels.append(label)
        return new_reps, labels

    def _dihedral_reps(self, reps):
        from .classical import ClassLabel
        G = self.group
        if len(self.B) != 2:
            return reps, [None] * len(reps)
        s, t = self.B.vertices
        m = G.diagram.m(s, t)
        new_reps, labels = list(reps), [None] * len(reps)
        x = 0
        for p in range(0, m // 2 + 1):
            c = int(self.class_of[self.local(x)])
            if labels[c] is None:
                new_reps[c] = x
                labels[c] = ClassLabel("I2", (), (), p)
            x = G.element_from_word([s, t], start=x)
        return new_reps, labels

    # -- class data -----------------------------------------------------------

    def class_of_element(self, g):
        return int(self.class_of[self.local(g)])

    def eps_trivial_classes(self):
        return [c for c in self.classes if c.epsilon_trivial]

    @property
    def sign_space_dim(self):
        return sum(c.epsilon_trivial for c in self.classes)

    def class_elements(self, c):
        cid = c.id if isinstance(c, ConjugacyClass) else int(c)
        return self.ids[self.class_of == cid]

    def transport_sign(self, g):
        """eps(h) for h in W_B with h * rep * h^-1 = g (well defined on eps-trivial classes)."""
        return int(self.sigma[self.local(g)])

    def hat_vector(self, c):
        """The basis vector Alt_B(w_c) = (1/|c|) sum_x sigma(x) x, as {id: Fraction}."""
        els = self.class_elements(c)
        if not c.epsilon_trivial:
            return {}
        signs = self.sigma[self.local(els)]
        return {int(x): Fraction(int(s), c.size) for x, s in zip(els, signs)}

    def orbit_labels(self, J):
        return self.group.orbit_labels(self.ids, J)

    # -- explicit conjugation averages (oracle side) ---------------------------

    @cached_property
    def _descent_tree(self):
        G = self.group
        ids = self.ids
        lens = G.length[ids]
        s_of = np.full(self.order, -1, dtype=np.int64)
        h_of = np.full(self.order, -1, dtype=np.int64)
        for i in self.gens:
            h = G.left[i][ids]
            ok = (G.length[h] < lens) & (s_of < 0)
            s_of[ok] = i
            h_of[ok] = self.local(h[ok])
        return lens, s_of, h_of

    def conjugates(self, xs):
        """Array (|W_B|, len(xs)) of ``g x g^-1`` over g in W_B (local order)."""
        G = self.group
        xs = np.atleast_1d(np.asarray(xs, dtype=np.int64))
        lens, s_of, h_of = self._descent_tree
        Y = np.empty((self.order, xs.size), dtype=np.int64)
        Y[0] = xs
        for ell in range(1, int(lens.max()) + 1 if self.order > 1 else 1):
            rows = np.nonzero(lens == ell)[0]
            Y[rows] = G.conj[s_of[rows][:, None], Y[h_of[rows]]]
        return Y

    def alt_project(self, v):
        """Alt_B(v) = (1/|W_B|) sum_w eps(w) w v w^-1 for v = {element id: coefficient}."""
        if not v:
            return {}
        xs = np.array(sorted(v), dtype=np.int64)
        for x in xs:
            if not self.contains(int(x)):
                raise ValueError(f"support outside W_{self.B}")
        Y = self.conjugates(xs)
        eps = self.group.sign[self.ids]
        out = {}
        for col, x in enumerate(xs):
            vals, inv = np.unique(Y[:, col], return_inverse=True)
            counts = np.bincount(inv, weights=eps, minlength=vals.size).astype(np.int64)
            cx = Fraction(v[int(x)])
            for g, k in zip(vals, counts):
                if k:
                    out[int(g)] = out.get(int(g), 0) + cx * int(k) / self.order
        return {g: c for g, c in out.items() if c != 0}


def build_group(D: CoxeterDiagram, cap=DEFAULT_GROUP_CAP) -> GroupData:
    return GroupData(D, cap=cap)


def parabolic(G: GroupData, B) -> Parabolic:
    return G.parabolic(B)


def conjugacy_classes(P: Parabolic):
    return P.classes


def is_epsilon_trivial(P: Parabolic, c: ConjugacyClass) -> bool:
    return c.epsilon_trivial


def sign_space_dim(P: Parabolic) -> int:
    return P.sign_space_dim


def fuse_class(G: GroupData, B, c: ConjugacyClass, Bprime) -> FusionResult:
    P = G.parabolic(B)
    Q = G.parabolic(Bprime)
    if not set(P.B.vertices) <= set(Q.B.vertices):
        raise DiagramError(f"{P.B} is not contained in {Q.B}")
    x = c.representative
    cid = Q.class_of_element(x)
    target = Q.classes[cid]
    if not target.epsilon_trivial:
        return FusionResult(None, 0)
    return FusionResult(target, Q.transport_sign(x))


def alt_project(P: Parabolic, v):
    return P.alt_project(v)
