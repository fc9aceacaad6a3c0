"""Exact linear algebra: sparse rational matrices, fraction-free rank, Smith form."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


class SparseMatrix:
    """A rational matrix stored row-wise as ``{col: value}`` dicts (zeros omitted)."""

    def __init__(self, nrows, ncols, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else [dict() for _ in range(nrows)]

    @classmethod
    def from_triplets(cls, nrows, ncols, triplets):
        M = cls(nrows, ncols)
        for i, j, v in triplets:
            M.add(i, j, v)
        return M

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def from_dense(cls, A):
        nrows = len(A)
        ncols = len(A[0]) if nrows else 0
        return cls(nrows, ncols, [{j: v for j, v in enumerate(r) if v} for r in A])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def add(self, i, j, v):
        if not v:
            return
        r = self.rows[i]
        s = r.get(j, 0) + v
        if s:
            r[j] = s
        else:
            r.pop(j, None)

    def get(self, i, j):
        return self.rows[i].get(j, 0)

    def nnz(self):
        return sum(len(r) for r in self.rows)

    def is_zero(self):
        return not any(self.rows)

    def triplets(self):
        for i, r in enumerate(self.rows):
            for j in sorted(r):
                yield i, j, r[j]

    def transpose(self):
        T = SparseMatrix(self.ncols, self.nrows)
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                T.rows[j][i] = v
        return T

    def to_dense(self):
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out[i][j] = v
        return out

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = SparseMatrix(self.nrows, other.ncols)
        for i, r in enumerate(self.rows):
            acc = {}
            for k, v in r.items():
                for j, w in other.rows[k].items():
                    acc[j] = acc.get(j, 0) + v * w
            out.rows[i] = {j: x for j, x in acc.items() if x}
        return out

    def __eq__(self, other):
        return isinstance(other, SparseMatrix) and self.shape == other.shape and self.rows == other.rows

    def submatrix(self, rows, cols):
        colmap = {c: k for k, c in enumerate(cols)}
        out = SparseMatrix(len(rows), len(cols))
        for k, i in enumerate(rows):
            out.rows[k] = {colmap[j]: v for j, v in self.rows[i].items() if j in colmap}
        return out

    def stack(self, other):
        if self.ncols != other.ncols:
            raise ValueError("column counts differ")
        return SparseMatrix(self.nrows + other.nrows, self.ncols,
                            [dict(r) for r in self.rows] + [dict(r) for r in other.rows])

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def _integral_rows(rows):
    out = []
    for r in rows:
        if not r:
            continue
        den = 1
        for v in r.values():
            if isinstance(v, Fraction):
                den = lcm(den, v.denominator)
        ir = {j: int(v * den) for j, v in r.items()}
        g = 0
        for v in ir.values():
            g = gcd(g, v)
        out.append({j: v // g for j, v in ir.items()})
    return out


def rank(M) -> int:
    """Exact rank by fraction-free sparse elimination.

    Rows are kept primitive (content divided out) so entries stay small; the
    pivot is taken from the shortest remaining row, at its entry of smallest
    absolute value.
    """
    rows = _integral_rows(M.rows if isinstance(M, SparseMatrix) else M)
    if not rows:
        return 0
    live = dict(enumerate(rows))
    colidx = {}
    for i, r in live.items():
        for j in r:
            colidx.setdefault(j, set()).add(i)
    rk = 0
    while live:
        pi = min(live, key=lambda i: (len(live[i]), i))
        prow = live.pop(pi)
        pc = min(prow, key=lambda j: (abs(prow[j]), len(colidx[j]), j))
        a = prow[pc]
        for j in prow:
            colidx[j].discard(pi)
        rk += 1
        for ti in list(colidx[pc]):
            trow = live[ti]
            b = trow[pc]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = {j: fa * v for j, v in trow.items()}
            for j, v in prow.items():
                s = new.get(j, 0) - fb * v
                if s:
                    new[j] = s
                else:
                    new.pop(j, None)
            for j in trow:
                if j not in new:
                    colidx[j].discard(ti)
            if not new:
                del live[ti]
                continue
            c = 0
            for v in new.values():
                c = gcd(c, v)
                if c == 1:
                    break
            if c != 1:
                new = {j: v // c for j, v in new.items()}
            for j in new:
                if j not in trow:
                    colidx.setdefault(j, set()).add(ti)
            live[ti] = new
    return rk


def rref(A):
    """Reduced row echelon form of a dense matrix over Q; returns (R, pivot columns)."""
    R = [[Fraction(x) for x in row] for row in A]
    nrows = len(R)
    ncols = len(R[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(nrows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return R, pivots


def nullspace(A, ncols=None):
    """Basis of {x : A x = 0} as a list of Fraction vectors."""
    if isinstance(A, SparseMatrix):
        ncols = A.ncols
        A = A.to_dense()
    if ncols is None:
        ncols = len(A[0]) if A else 0
    if not A:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, piv = rref(A)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in enumerate(piv):
            v[pc] = -R[row][f]
        basis.append(v)
    return basis


def det(A):
    """Determinant of a square integer or rational matrix (Bareiss)."""
    n = len(A)
    if n == 0:
        return 1
    M = [[Fraction(x) for x in row] for row in A]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if M[k][k] == 0:
            p = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if p is None:
                return 0
            M[k], M[p] = M[p], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev
        prev = M[k][k]
    d = sign * M[n - 1][n - 1]
    return int(d) if d.denominator == 1 else d


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


def identity_matrix(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A):
    """Return (D, U, V) with U A V = D diagonal, U and V unimodular, d_i | d_{i+1}.

    Zero diagonal entries come last.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [[int(x) for x in row] for row in A]
    U = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):  # row_dst += f * row_src
        D[dst] = [x + f * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, f):
        for M in (D, V):
            for row in M:
                row[dst] += f * row[src]

    for t in range(min(m, n)):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(t, i, -q)
                    if D[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(t, j, -q)
                    if D[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: fold in any entry not divisible by the pivot
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return D, U, V


def smith_diagonal(A):
    D, _, _ = smith_normal_form(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]
