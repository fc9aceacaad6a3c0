"""Chain complexes attached to a Coxeter diagram and their exact cohomology.

Matrices are stored as :class:`~dynkincoh.linalg.SparseMatrix` with rows
indexed by the target basis and columns by the source basis, so ``d[p]``
sends degree ``p`` to ``p + 1`` (``p - 1`` for homological complexes).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .diagram import CoxeterDiagram, DiagramError, Subdiagram, maximal_proper_connected
from .group import GroupData, Parabolic
from .linalg import SparseMatrix, nullspace, rank

FULL_CD_CAP = 1200


def position(vs, beta):
    return vs.index(beta) + 1


class ChainComplex:
    """Exact complex with labelled bases.

    ``blocks`` optionally tags every basis vector with a key (a conjugacy
    class of W) such that the differential never mixes keys; cohomology is
    then computed block by block.
    """

    def __init__(self, bases, d, direction="cohomological", blocks=None, name=None,
                 grade=None):
        self.bases = {p: list(b) for p, b in bases.items()}
        self.degrees = sorted(self.bases)
        if self.degrees and self.degrees != list(range(self.degrees[0], self.degrees[-1] + 1)):
            raise ValueError("degrees must be contiguous")
        self.direction = direction
        self.step = 1 if direction == "cohomological" else -1
        self.d = {}
        for p in self.degrees:
            q = p + self.step
            src = len(self.bases[p])
            tgt = len(self.bases.get(q, []))
            M = d.get(p)
            if M is None:
                M = SparseMatrix.zeros(tgt, src)
            if M.shape != (tgt, src):
                raise ValueError(f"differential at degree {p} has shape {M.shape}, expected {(tgt, src)}")
            self.d[p] = M
        self.blocks = blocks
        self.name = name
        self.grade = grade

    def dim(self, p):
        return len(self.bases.get(p, []))

    def dims(self):
        return tuple(self.dim(p) for p in self.degrees)

    def check_square_zero(self):
        for p in self.degrees:
            q = p + self.step
            if q in self.d and not (self.d[q] @ self.d[p]).is_zero():
                raise AssertionError(f"d o d != 0 at degree {p} of {self.name}")
        return True

    def euler_chains(self):
        return sum((-1) ** p * self.dim(p) for p in self.degrees)

    def block_keys(self):
        if self.blocks is None:
            return [None]
        keys = set()
        for p in self.degrees:
            keys.update(self.blocks[p])
        return sorted(keys, key=repr)

    def restrict_to_block(self, key):
        if self.blocks is None:
            return self
        idx = {p: [i for i, k in enumerate(self.blocks[p]) if k == key] for p in self.degrees}
        bases = {p: [self.bases[p][i] for i in idx[p]] for p in self.degrees}
        d = {}
        for p in self.degrees:
            q = p + self.step
            rows = idx.get(q, [])
            d[p] = self.d[p].submatrix(rows, idx[p])
        return ChainComplex(bases, d, self.direction, name=f"{self.name}[{key}]", grade=self.grade)

    def to_json(self):
        def lab(x):
            return x if isinstance(x, (str, int)) else json.loads(json.dumps(x, default=list))

        out = {"name": self.name, "direction": self.direction, "degrees": self.degrees,
               "orientation": "alpha subsets sorted by the diagram order; signs from 1-based positions",
               "bases": {str(p): [lab(x) for x in self.bases[p]] for p in self.degrees},
               "differentials": {}}
        for p in self.degrees:
            trip = []
            for i, j, v in self.d[p].triplets():
                v = Fraction(v)
                trip.append([i, j, v.numerator, v.denominator])
            out["differentials"][str(p)] = {"shape": list(self.d[p].shape), "entries": trip}
        return out


@dataclass
class CohomologyResult:
    dims: dict
    per_class: dict = field(default_factory=dict)
    euler: int = 0

    def as_tuple(self, degrees=None):
        degrees = degrees if degrees is not None else sorted(self.dims)
        return tuple(self.dims.get(p, 0) for p in degrees)


def _check_blocks(C):
    for p in C.degrees:
        q = p + C.step
        if q not in C.blocks:
            continue
        for i, j, _ in C.d[p].triplets():
            if C.blocks[q][i] != C.blocks[p][j]:
                raise AssertionError("differential mixes blocks")


def _dims_plain(C):
    ranks = {p: rank(C.d[p]) for p in C.degrees}
    out = {}
    for p in C.degrees:
        prev = ranks.get(p - C.step, 0)
        out[p] = C.dim(p) - ranks[p] - prev
    return out


def cohomology_dims(C: ChainComplex, per_class=False, workers=1) -> CohomologyResult:
    """Betti numbers over Q by exact rank-nullity, block by block when possible.

    With ``workers > 1`` the blocks are ranked in a process pool; the result
    does not depend on the schedule.
    """
    if C.blocks is None:
        dims = _dims_plain(C)
        per = {}
    else:
        _check_blocks(C)
        dims = {p: 0 for p in C.degrees}
        per = {}
        keys = C.block_keys()
        pieces = [C.restrict_to_block(k) for k in keys]
        if workers > 1 and len(pieces) > 1:
            from concurrent.futures import ProcessPoolExecutor
            with ProcessPoolExecutor(max_workers=workers) as ex:
                results = list(ex.map(_dims_plain, pieces))
        else:
            results = [_dims_plain(x) for x in pieces]
        for key, sub in zip(keys, results):
            per[key] = sub
            for p, v in sub.items():
                dims[p] += v
    euler = sum((-1) ** p * v for p, v in dims.items())
    if euler != C.euler_chains():
        raise AssertionError("Euler characteristic mismatch")
    return CohomologyResult(dims=dims, per_class=per if per_class else {}, euler=euler)


# ---------------------------------------------------------------------------
# Coxeter complex and graded pieces
# ---------------------------------------------------------------------------

def _pairs_matrix(src_lab, tgt_lab, src_index, tgt_index, sign, M):
    pairs = np.unique(np.stack([src_lab, tgt_lab], axis=1), axis=0)
    for s, t in pairs:
        M.add(tgt_index[int(t)], src_index[int(s)], sign)


def build_coxeter_complex(P: Parabolic) -> ChainComplex:
    """Homological complex on cosets ``w W_{B minus alpha}``; alpha sorted."""
    G = P.group
    Bv = P.B.vertices
    bases, labels, index = {}, {}, {}
    for p in range(len(Bv) + 1):
        bases[p] = []
        for alpha in combinations(Bv, p):
            J = [v for v in Bv if v not in alpha]
            lab = G.coset_labels(P.ids, J)
            labels[alpha] = lab
            reps = np.unique(lab)
            index[alpha] = {int(r): len(bases[p]) + k for k, r in enumerate(reps)}
            bases[p] += [(alpha, int(r)) for r in reps]
    d = {}
    for p in range(len(Bv) + 1):
        M = SparseMatrix.zeros(len(bases.get(p - 1, [])), len(bases[p]))
        if p > 0:
            for alpha in combinations(Bv, p):
                for i, a in enumerate(alpha):
                    face = tuple(x for x in alpha if x != a)
                    _pairs_matrix(labels[alpha], labels[face], index[alpha], index[face],
                                  (-1) ** i, M)
        d[p] = M
    return ChainComplex(bases, d, "homological", name=f"CC[{P.B}]")


def build_graded_piece(G: GroupData, B) -> ChainComplex:
    """The complex of fixed-point spaces of W_B with only the first Dynkin term."""
    P = G.parabolic(B)
    Bv = P.B.vertices
    bases, labels, index = {}, {}, {}
    for p in range(len(Bv) + 1):
        bases[p] = []
        for alpha in combinations(Bv, p):
            lab = G.orbit_labels(P.ids, [v for v in Bv if v not in alpha])
            labels[alpha] = lab
            reps = np.unique(lab)
            index[alpha] = {int(r): len(bases[p]) + k for k, r in enumerate(reps)}
            bases[p] += [(alpha, int(r)) for r in reps]
    d = {}
    for p in range(len(Bv) + 1):
        M = SparseMatrix.zeros(len(bases.get(p + 1, [])), len(bases[p]))
        if p < len(Bv):
            for alpha in combinations(Bv, p):
                for beta in Bv:
                    if beta in alpha:
                        continue
                    tgt = P.B.parent.sort(alpha + (beta,))
                    sign = (-1) ** (position(tgt, beta) - 1)
                    _pairs_matrix(labels[alpha], labels[tgt], index[alpha], index[tgt], sign, M)
        d[p] = M
    whole = G.whole
    blocks = {p: [whole.class_of_element(r) for _, r in bases[p]] for p in bases}
    return ChainComplex(bases, d, blocks=blocks, name=f"CD[{P.B}]", grade=len(Bv))


# ---------------------------------------------------------------------------
# The full Dynkin complex
# ---------------------------------------------------------------------------

def build_dynkin_complex(G: GroupData, class_filter=None, cap=FULL_CD_CAP) -> ChainComplex:
    """CD(kW) on orbit sums of the adjoint W_{B minus alpha}-action on W_B.

    ``class_filter`` keeps only orbits inside the given class of W (a class id
    of ``G.whole``), giving the subcomplex CD_c.
    """
    if G.N > cap:
        from .group import CapExceeded
        raise CapExceeded(G.N, cap)
    D = G.diagram
    whole = G.whole
    n = D.rank
    subs = D.connected
    bases = {p: [] for p in range(n + 1)}
    labels, index = {}, {}
    for B in subs:
        P = G.parabolic(B)
        keep = None
        if class_filter is not None:
            keep = whole.class_of[P.ids] == class_filter
        for p in range(len(B) + 1):
            for alpha in combinations(B.vertices, p):
                lab = G.orbit_labels(P.ids, [v for v in B.vertices if v not in alpha])
                if keep is not None:
                    lab = lab[keep]
                labels[(B.vertices, alpha)] = lab
                reps = np.unique(lab)
                index[(B.vertices, alpha)] = {int(r): len(bases[p]) + k for k, r in enumerate(reps)}
                bases[p] += [(B.vertices, alpha, int(r)) for r in reps]
    d = {}
    for p in range(n + 1):
        M = SparseMatrix.zeros(len(bases.get(p + 1, [])), len(bases[p]))
        if p < n:
            for B in subs:
                Bv = B.vertices
                for alpha in combinations(Bv, p):
                    src = (Bv, alpha)
                    if not index[src]:
                        continue
                    # first term: enlarge alpha inside B
                    for beta in Bv:
                        if beta in alpha:
                            continue
                        ab = D.sort(alpha + (beta,))
                        sign = (-1) ** (position(ab, beta) - 1)
                        _pairs_matrix(labels[src], labels[(Bv, ab)], index[src],
                                      index[(Bv, ab)], sign, M)
                    # second term: B as the component of B2 minus beta containing alpha
                    for B2 in subs:
                        if len(B2) <= len(B) or not set(Bv) < set(B2.vertices):
                            continue
                        for beta in B2.vertices:
                            if beta in Bv:
                                continue
                            comps = D.components(set(B2.vertices) - {beta})
                            if not any(c.vertices == Bv for c in comps):
                                continue
                            ab = D.sort(alpha + (beta,))
                            sign = (-1) ** position(ab, beta)
                            tgt = index[(B2.vertices, ab)]
                            for r, col in index[src].items():
                                M.add(tgt[r], col, sign)
        d[p] = M
    blocks = {p: [whole.class_of_element(x[2]) for x in bases[p]] for p in bases}
    return ChainComplex(bases, d, blocks=blocks, name=f"CD[{D.name or D.vertices}]")


# ---------------------------------------------------------------------------
# The collapsed complex HC
# ---------------------------------------------------------------------------

class ParabolicSystem:
    """What HC needs from a diagram: eps-trivial classes per B and their fusion."""

    diagram: CoxeterDiagram

    def subdiagrams(self):
        raise NotImplementedError

    def eps_classes(self, B):
        raise NotImplementedError

    def fuse(self, B, k, B2):
        """(index in eps_classes(B2) or None, sign) for the k-th eps-class of B."""
        raise NotImplementedError

    def class_key(self, B, k):
        raise NotImplementedError

    def class_name(self, key):
        return str(key)


class FiniteSystem(ParabolicSystem):
    def __init__(self, G: GroupData, finite_part_only=False):
        self.G = G
        self.diagram = G.diagram
        self.finite_part_only = finite_part_only
        self._eps = {}

    def subdiagrams(self):
        subs = self.diagram.connected
        if self.finite_part_only:
            subs = [B for B in subs if len(B) < self.diagram.rank]
        return subs

    def eps_classes(self, B):
        vs = B.vertices if isinstance(B, Subdiagram) else tuple(B)
        if vs not in self._eps:
            self._eps[vs] = self.G.parabolic(vs).eps_trivial_classes()
        return self._eps[vs]

    def fuse(self, B, k, B2):
        c = self.eps_classes(B)[k]
        Q = self.G.parabolic(B2)
        tgt = Q.classes[Q.class_of_element(c.representative)]
        if not tgt.epsilon_trivial:
            return None, 0
        idx = [x.id for x in self.eps_classes(B2)].index(tgt.id)
        return idx, Q.transport_sign(c.representative)

    def class_key(self, B, k):
        return self.G.whole.class_of_element(self.eps_classes(B)[k].representative)

    def class_name(self, key):
        c = self.G.whole.classes[key]
        if c.label is not None:
            return str(c.label)
        return self.G.describe(c.representative, c.size)


def system_for(G_or_system, finite_part_only=False):
    if isinstance(G_or_system, ParabolicSystem):
        return G_or_system
    return FiniteSystem(G_or_system, finite_part_only)


def build_hc_complex(G, finite_part_only=False, class_filter=None, within=None) -> ChainComplex:
    """HC on the basis Alt_B(w_c); ``within`` restricts to subdiagrams of a connected D'."""
    S = system_for(G, finite_part_only)
    D = S.diagram
    subs = S.subdiagrams()
    if within is not None:
        W = set(within.vertices if isinstance(within, Subdiagram) else within)
        subs = [B for B in subs if set(B.vertices) <= W]
        top = len(W)
    else:
        top = D.rank
    bases = {p: [] for p in range(top + 1)}
    blocks = {p: [] for p in range(top + 1)}
    index = {}
    for B in subs:
        for k, c in enumerate(S.eps_classes(B)):
            key = S.class_key(B, k)
            if class_filter is not None and key != class_filter:
                continue
            index[(B.vertices, k)] = len(bases[len(B)])
            bases[len(B)].append((B.vertices, k))
            blocks[len(B)].append(key)
    by_size = {}
    for B in subs:
        by_size.setdefault(len(B), []).append(B)
    d = {}
    for p in range(top + 1):
        M = SparseMatrix.zeros(len(bases.get(p + 1, [])), len(bases[p]))
        for B in by_size.get(p, []):
            for B2 in by_size.get(p + 1, []):
                extra = set(B2.vertices) - set(B.vertices)
                if len(extra) != 1:
                    continue
                beta = extra.pop()
                sign = (-1) ** position(B2.vertices, beta)
                for k in range(len(S.eps_classes(B))):
                    col = index.get((B.vertices, k))
                    if col is None:
                        continue
                    tk, s = S.fuse(B, k, B2)
                    if tk is None:
                        continue
                    M.add(index[(B2.vertices, tk)], col, sign * s)
        d[p] = M
    C = ChainComplex(bases, d, blocks=blocks,
                     name=f"HC{'_f' if finite_part_only else ''}[{D.name or D.vertices}]")
    C.system = S
    return C


def hd_dims(G, per_class=False, complex="hc", finite_part_only=False):
    if complex == "hc":
        C = build_hc_complex(G, finite_part_only=finite_part_only)
    elif complex == "cd":
        C = build_dynkin_complex(G)
    else:
        raise ValueError(f"unknown complex {complex!r}")
    return cohomology_dims(C, per_class=per_class)


# ---------------------------------------------------------------------------
# Restriction and top cohomology
# ---------------------------------------------------------------------------

def restrict(C: ChainComplex, Dprime) -> dict:
    """The projection HC(D) -> HC(D') killing B not inside D', as matrices per degree.

    Returns ``{"maps": {p: matrix}, "target": HC(D')}``; commutation with the
    differentials is asserted.
    """
    S = C.system
    D = S.diagram
    vs = Dprime.vertices if isinstance(Dprime, Subdiagram) else tuple(Dprime)
    if not D.is_connected(vs):
        raise DiagramError(f"{vs} is not a connected subdiagram")
    T = build_hc_complex(S, within=vs)
    maps = {}
    for p in C.degrees:
        tindex = {lab: i for i, lab in enumerate(T.bases.get(p, []))}
        M = SparseMatrix.zeros(T.dim(p), C.dim(p))
        for j, lab in enumerate(C.bases[p]):
            if lab in tindex:
                M.add(tindex[lab], j, 1)
        maps[p] = M
    for p in C.degrees:
        if p + 1 in maps and p in T.d:
            left = T.d[p] @ maps[p]
            right = maps[p + 1] @ C.d[p]
            if left != right:
                raise AssertionError(f"restriction does not commute with d at degree {p}")
    return {"maps": maps, "target": T}


def induced_rank(C: ChainComplex, T: ChainComplex, f: SparseMatrix, p: int) -> int:
    """Rank of the map H^p(C) -> H^p(T) induced by the chain map component ``f``."""
    Z = nullspace(C.d[p]) if C.dim(p) else []
    if not Z:
        return 0
    fz = [[sum(f.get(i, j) * z[j] for j in range(C.dim(p))) for i in range(T.dim(p))] for z in Z]
    prev = T.d.get(p - 1)
    im = prev.transpose().to_dense() if prev is not None and prev.ncols else []
    both = SparseMatrix.from_dense(fz + im) if fz + im else SparseMatrix(0, T.dim(p))
    base = SparseMatrix.from_dense(im) if im else SparseMatrix(0, T.dim(p))
    return rank(both) - rank(base)


def top_cohomology_basis(G: GroupData):
    """eps-trivial classes of W meeting no proper maximal connected parabolic."""
    whole = G.whole
    maximal = maximal_proper_connected(G.diagram)
    met = set()
    for B in maximal:
        P = G.parabolic(B)
        met.update(np.unique(whole.class_of[P.ids]).tolist())
    return [c.id for c in whole.classes if c.epsilon_trivial and c.id not in met]
