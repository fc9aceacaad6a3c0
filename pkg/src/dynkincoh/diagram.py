"""Coxeter diagrams with a fixed vertex order and their subdiagram combinatorics.

Vertices are plain integers.  Named types follow Bourbaki's labelling
(``1..n``); affine completions append the extra node ``0`` *last* in the
vertex order.  The Coxeter matrix uses ``math.inf`` for an infinite bond.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations

INF = math.inf


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Subdiagram:
    """A full subgraph, stored as a vertex tuple sorted by parent order.

    The empty tuple is the sentinel returned by :func:`component_containing`
    when no component qualifies.
    """

    vertices: tuple
    parent: "CoxeterDiagram" = field(compare=False, repr=False, default=None)

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __contains__(self, v):
        return v in self.vertices

    def __bool__(self):
        return bool(self.vertices)

    @property
    def vertex_set(self):
        return frozenset(self.vertices)

    def __str__(self):
        return "{" + ",".join(map(str, self.vertices)) + "}"


EMPTY = Subdiagram(())


class CoxeterDiagram:
    """A connected Coxeter diagram.

    Parameters
    ----------
    vertices : sequence of int
        Vertex ids in their total order.
    m : dict or nested sequence
        Either a mapping ``(i, j) -> m_ij`` for unordered pairs (missing
        pairs mean 2) or a square matrix indexed like ``vertices``.
    name : str, optional
        Type label such as ``"A3"`` or ``"affine-G2"``.
    lengths : dict, optional
        Squared root lengths keyed by vertex (crystallographic types only);
        fixes the Cartan matrix orientation for bonds 4 and 6.
    """

    def __init__(self, vertices, m, name=None, lengths=None):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices) or not self.vertices:
            raise DiagramError("vertices must be distinct and non-empty")
        self.index = {v: k for k, v in enumerate(self.vertices)}
        n = len(self.vertices)
        mat = [[2] * n for _ in range(n)]
        for k in range(n):
            mat[k][k] = 1
        if isinstance(m, dict):
            for (a, b), val in m.items():
                i, j = self.index[a], self.index[b]
                mat[i][j] = mat[j][i] = val
        else:
            if len(m) != n or any(len(row) != n for row in m):
                raise DiagramError("Coxeter matrix has the wrong shape")
            for i in range(n):
                for j in range(n):
                    mat[i][j] = m[i][j]
        for i in range(n):
            if mat[i][i] != 1:
                raise DiagramError("diagonal entries of a Coxeter matrix must be 1")
            for j in range(n):
                if mat[i][j] != mat[j][i]:
                    raise DiagramError("Coxeter matrix must be symmetric")
                if i != j and not (mat[i][j] == INF or (int(mat[i][j]) == mat[i][j] and mat[i][j] >= 2)):
                    raise DiagramError(f"invalid Coxeter entry {mat[i][j]!r}")
        self.matrix = tuple(tuple(INF if x == INF else int(x) for x in row) for row in mat)
        self.name = name
        self.lengths = dict(lengths) if lengths else None
        self.adjacency = {
            v: frozenset(w for w in self.vertices if w != v and self.m(v, w) >= 3)
            for v in self.vertices
        }
        if len(self.components(self.vertices)) != 1:
            raise DiagramError("Coxeter diagram must be connected")

    def __repr__(self):
        return f"CoxeterDiagram({self.name or list(self.vertices)})"

    def __len__(self):
        return len(self.vertices)

    def m(self, a, b):
        return self.matrix[self.index[a]][self.index[b]]

    @property
    def rank(self):
        return len(self.vertices)

    def sort(self, vs):
        return tuple(sorted(vs, key=self.index.__getitem__))

    def sub(self, vs) -> Subdiagram:
        vs = self.sort(set(vs))
        for v in vs:
            if v not in self.index:
                raise DiagramError(f"vertex {v!r} not in diagram")
        return Subdiagram(vs, self)

    @property
    def full(self) -> Subdiagram:
        return Subdiagram(self.vertices, self)

    def components(self, vs):
        """Connected components of the full subgraph on ``vs``, sorted."""
        remaining = set(vs)
        out = []
        while remaining:
            start = min(remaining, key=self.index.__getitem__)
            comp = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for w in self.adjacency[v]:
                    if w in remaining and w not in comp:
                        comp.add(w)
                        stack.append(w)
            remaining -= comp
            out.append(self.sub(comp))
        out.sort(key=lambda b: [self.index[v] for v in b.vertices])
        return out

    def is_connected(self, vs):
        return bool(vs) and len(self.components(vs)) == 1

    def restrict(self, vs, name=None) -> "CoxeterDiagram":
        """The standalone Coxeter diagram on a connected vertex subset."""
        vs = self.sort(vs)
        m = {(a, b): self.m(a, b) for a, b in combinations(vs, 2)}
        lengths = {v: self.lengths[v] for v in vs} if self.lengths else None
        return CoxeterDiagram(vs, m, name=name, lengths=lengths)

    @cached_property
    def connected(self):
        return connected_subdiagrams(self)

    @cached_property
    def key(self):
        """Stable identity used by the cache."""
        return json.dumps(
            {"vertices": list(self.vertices),
             "m": [[("inf" if x == INF else x) for x in row] for row in self.matrix],
             "lengths": None if not self.lengths else [str(self.lengths[v]) for v in self.vertices]},
            sort_keys=True)

    def to_json(self):
        return {"vertices": list(self.vertices),
                "m": [[(0 if x == INF else x) for x in row] for row in self.matrix]}


# ---------------------------------------------------------------------------
# Subdiagram operations
# ---------------------------------------------------------------------------

def connected_subdiagrams(D: CoxeterDiagram):
    """Every non-empty connected full subdiagram, ordered by (size, vertex positions)."""
    found = set()
    frontier = {frozenset([v]) for v in D.vertices}
    while frontier:
        found |= frontier
        nxt = set()
        for s in frontier:
            for v in s:
                for w in D.adjacency[v]:
                    if w not in s:
                        nxt.add(s | {w})
        frontier = nxt - found
    subs = [D.sub(s) for s in found]
    subs.sort(key=lambda b: (len(b), [D.index[v] for v in b.vertices]))
    return subs


def component_containing(D: CoxeterDiagram, B: Subdiagram, removed, target) -> Subdiagram:
    """Component of ``B \\ {removed}`` containing all of ``target``, else :data:`EMPTY`."""
    bset = set(B.vertices)
    target = set(target)
    if removed not in bset:
        raise DiagramError(f"vertex {removed!r} is not in {B}")
    if not target:
        raise DiagramError("target must be non-empty")
    if not target <= bset - {removed}:
        raise DiagramError("target must lie in B minus the removed vertex")
    for comp in D.components(bset - {removed}):
        if target <= comp.vertex_set:
            return comp
    return EMPTY


def position_sign(Bprime: Subdiagram, beta) -> int:
    """1-based position of ``beta`` among the (ordered) vertices of ``Bprime``."""
    try:
        return Bprime.vertices.index(beta) + 1
    except ValueError:
        raise DiagramError(f"vertex {beta!r} is not in {Bprime}") from None


def are_orthogonal(B1: Subdiagram, B2: Subdiagram) -> bool:
    if B1.parent is not B2.parent:
        raise DiagramError("subdiagrams belong to different diagrams")
    D = B1.parent
    if B1.vertex_set & B2.vertex_set:
        return False
    return not any(D.m(a, b) >= 3 for a in B1 for b in B2)


def maximal_proper_connected(D: CoxeterDiagram):
    """Proper connected subdiagrams not contained in a larger proper connected one."""
    proper = [B for B in D.connected if len(B) < D.rank]
    return [B for B in proper
            if not any(B.vertex_set < C.vertex_set for C in proper)]


# ---------------------------------------------------------------------------
# Named types
# ---------------------------------------------------------------------------

def _path(n, special=None):
    m = {(i, i + 1): 3 for i in range(1, n)}
    if special:
        m.update(special)
    return m


def named_diagram(label: str) -> CoxeterDiagram:
    """Build a diagram from a label like ``"A5"``, ``"I2(7)"``, ``"H4"`` or ``"affine-G2"``."""
    label = label.strip()
    if label.lower().startswith("affine-"):
        from .affine import completed_diagram
        return completed_diagram(named_diagram(label[len("affine-"):]))
    mt = re.fullmatch(r"I2\((\d+)\)", label)
    if mt:
        k = int(mt.group(1))
        if k < 3:
            raise DiagramError("I2(m) needs m >= 3")
        return CoxeterDiagram((1, 2), {(1, 2): k}, name=f"I2({k})")
    mt = re.fullmatch(r"([A-HI])(\d+)", label)
    if not mt:
        raise DiagramError(f"unrecognised type label {label!r}")
    fam, n = mt.group(1), int(mt.group(2))
    if n < 1:
        raise DiagramError("rank must be positive")
    vs = tuple(range(1, n + 1))
    two = Fraction(2)
    if fam == "A":
        return CoxeterDiagram(vs, _path(n), name=label, lengths={v: two for v in vs})
    if fam in "BC":
        if n < 2:
            raise DiagramError(f"{fam}n needs n >= 2")
        # alpha_n is short in B_n and long in C_n
        last = Fraction(1) if fam == "B" else Fraction(4)
        lengths = {v: (two if v < n else last) for v in vs}
        return CoxeterDiagram(vs, _path(n, {(n - 1, n): 4}), name=label, lengths=lengths)
    if fam == "D":
        if n < 3:
            raise DiagramError("Dn needs n >= 3")
        m = _path(n - 1)
        m[(n - 2, n)] = 3
        if n == 3:
            m = {(1, 2): 3, (1, 3): 3}
        return CoxeterDiagram(vs, m, name=label, lengths={v: two for v in vs})
    if fam == "E":
        if n not in (6, 7, 8):
            raise DiagramError("En needs n in 6, 7, 8")
        m = {(1, 3): 3, (2, 4): 3}
        for i in range(3, n):
            m[(i, i + 1)] = 3
        return CoxeterDiagram(vs, m, name=label, lengths={v: two for v in vs})
    if fam == "F":
        if n != 4:
            raise DiagramError("only F4 exists")
        return CoxeterDiagram(vs, _path(4, {(2, 3): 4}), name="F4",
                              lengths={1: two, 2: two, 3: Fraction(1), 4: Fraction(1)})
    if fam == "G":
        if n != 2:
            raise DiagramError("only G2 exists")
        return CoxeterDiagram(vs, {(1, 2): 6}, name="G2", lengths={1: two, 2: Fraction(6)})
    if fam == "H":
        if n not in (2, 3, 4):
            raise DiagramError("Hn needs n in 2, 3, 4")
        if n == 2:
            return CoxeterDiagram(vs, {(1, 2): 5}, name="I2(5)")
        return CoxeterDiagram(vs, _path(n, {(1, 2): 5}), name=label)
    raise DiagramError(f"unrecognised type label {label!r}")


def diagram_from_json(obj) -> CoxeterDiagram:
    """Parse ``{"vertices": [...], "m": [[...]]}``; 0 or "inf" mean an infinite bond."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        vs = obj["vertices"]
        rows = obj["m"]
    except (KeyError, TypeError):
        raise DiagramError('expected {"vertices": [...], "m": [[...]]}') from None
    conv = [[INF if (x == 0 or x == "inf") else x for x in row] for row in rows]
    return CoxeterDiagram(vs, conv, name=obj.get("name"))


def parse_diagram(source) -> CoxeterDiagram:
    if isinstance(source, CoxeterDiagram):
        return source
    if isinstance(source, dict):
        return diagram_from_json(source)
    s = str(source).strip()
    if s.startswith("{"):
        return diagram_from_json(s)
    return named_diagram(s)


# ---------------------------------------------------------------------------
# Classification of finite types
# ---------------------------------------------------------------------------

def classify(D: CoxeterDiagram):
    """Return the finite type label (e.g. ``"D5"``, ``"I2(7)"``) or ``None`` if infinite.

    Labels are up to isomorphism; ``B`` and ``C`` are not distinguished.
    """
    n = D.rank
    if n == 1:
        return "A1"
    entries = [D.m(a, b) for a, b in combinations(D.vertices, 2)]
    if any(x == INF for x in entries):
        return None
    if n == 2:
        k = entries[0]
        return {3: "A2", 4: "B2", 6: "G2"}.get(k, f"I2({k})")
    edges = [(a, b, D.m(a, b)) for a, b in combinations(D.vertices, 2) if D.m(a, b) >= 3]
    if len(edges) != n - 1:
        return None
    labels = [k for _, _, k in edges]
    if any(k > 5 for k in labels):
        return None
    degree = {v: len(D.adjacency[v]) for v in D.vertices}
    heavy = [(a, b, k) for a, b, k in edges if k >= 4]
    if len(heavy) > 1:
        return None
    branch = [v for v in D.vertices if degree[v] >= 3]
    if branch:
        if heavy or len(branch) > 1 or degree[branch[0]] > 3:
            return None
        c = branch[0]
        arms = []
        for start in D.adjacency[c]:
            length, prev, cur = 1, c, start
            while True:
                nxt = [w for w in D.adjacency[cur] if w != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                length += 1
            arms.append(length + 1)
        p, q, r = sorted(arms)
        if Fraction(1, p) + Fraction(1, q) + Fraction(1, r) <= 1:
            return None
        if p == 2 and q == 2:
            return f"D{n}"
        if (p, q) == (2, 3) and r in (3, 4, 5):
            return f"E{n}"
        return None
    # a path
    if not heavy:
        return f"A{n}"
    a, b, k = heavy[0]
    at_end = degree[a] == 1 or degree[b] == 1
    if k == 4:
        if at_end:
            return f"B{n}"
        if n == 4:
            return "F4"
        return None
    if k == 5 and at_end and n in (3, 4):
        return f"H{n}"
    return None


def is_finite_type(D: CoxeterDiagram) -> bool:
    return classify(D) is not None


_DEGREES = {
    "E6": (2, 5, 6, 8, 9, 12),
    "E7": (2, 6, 8, 10, 12, 14, 18),
    "E8": (2, 8, 12, 14, 18, 20, 24, 30),
    "F4": (2, 6, 8, 12),
    "G2": (2, 6),
    "H3": (2, 6, 10),
    "H4": (2, 12, 20, 30),
}


def degrees(label):
    """Degrees of the basic invariants of a finite irreducible type."""
    if label in _DEGREES:
        return _DEGREES[label]
    mt = re.fullmatch(r"I2\((\d+)\)", label)
    if mt:
        return (2, int(mt.group(1)))
    fam, n = label[0], int(label[1:])
    if fam == "A":
        return tuple(range(2, n + 2))
    if fam in "BC":
        return tuple(range(2, 2 * n + 1, 2))
    if fam == "D":
        return tuple(sorted(list(range(2, 2 * n - 1, 2)) + [n]))
    raise DiagramError(label)


def group_order(label):
    return math.prod(degrees(label))


def family_of(D: CoxeterDiagram):
    """Named classical family and rank (``("A", 3)``) when the diagram carries a Bourbaki label."""
    if not D.name:
        return None
    mt = re.fullmatch(r"([ABCD])(\d+)", D.name)
    if not mt:
        return None
    fam, n = mt.group(1), int(mt.group(2))
    if fam == "C":
        fam = "B"
    if fam == "D" and n == 3:
        return None
    return fam, n
