"""Closed-form Dynkin cohomology for the dihedral and classical families.

Partitions are tuples of weakly decreasing positive integers.  Class labels
follow the usual signed-cycle-type description of Weyl group classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


def partitions(n, max_part=None):
    """All partitions of ``n`` as descending tuples, in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


@lru_cache(maxsize=None)
def partition_count(n):
    return sum(1 for _ in partitions(n))


def odd_distinct_partitions(m, exclude_one=False):
    """The partitions of ``m`` into odd distinct parts, optionally without a part 1.

    With ``exclude_one`` and ``m == 0`` the answer is ``{()}``.
    """
    out = set()
    for lam in partitions(m):
        if len(set(lam)) != len(lam) or any(k % 2 == 0 for k in lam):
            continue
        if exclude_one and 1 in lam:
            continue
        out.add(lam)
    return out


def O(m):
    return odd_distinct_partitions(m)


def O_star(m):
    return odd_distinct_partitions(m, exclude_one=True)


@dataclass(frozen=True)
class ClassLabel:
    """Conjugacy class label.

    ``kind`` is ``"A"`` (cycle type ``lam``), ``"B"`` or ``"D-I"`` (positive
    cycles ``lam``, negative cycles ``mu``), ``"D-II"`` (``lam`` all even) or
    ``"I2"`` (the rotation ``(st)^p``).
    """

    kind: str
    lam: tuple = ()
    mu: tuple = ()
    p: int = 0

    def __str__(self):
        def fmt(x):
            return "(" + ",".join(map(str, x)) + ")"
        if self.kind == "A":
            return fmt(self.lam)
        if self.kind == "I2":
            return f"(st)^{self.p}"
        if self.kind == "D-II":
            return fmt(self.lam) + ",II"
        return fmt(self.lam) + "|" + fmt(self.mu)


def _ones(k):
    return (1,) * k


def _union(lam, extra):
    return tuple(sorted(lam + extra, reverse=True))


FAMILIES = ("A", "B", "D", "I2")


def _check(family, n):
    if family not in FAMILIES:
        raise ValueError(f"unsupported family {family!r}")
    if family == "A" and n < 1 or family == "B" and n < 2 or family == "D" and n < 3:
        raise ValueError(f"rank {n} out of range for type {family}")
    if family == "I2" and n < 2:
        raise ValueError("I2(m) needs m >= 2")


def epsilon_trivial_labels(family, n):
    """Labels of the classes whose centralizers lie in the kernel of the sign."""
    _check(family, n)
    if family == "D" and n == 3:
        return epsilon_trivial_labels("A", 3)
    if family == "A":
        return {ClassLabel("A", lam) for lam in O(n + 1)}
    if family == "I2":
        return {ClassLabel("I2", p=p) for p in range(1, (n - 1) // 2 + 1)}
    if family == "B":
        if n % 2:
            return set()
        return {ClassLabel("B", (), tuple(2 * k for k in nu)) for nu in partitions(n // 2)}
    out = set()
    for m in range(n + 1):
        for lam in O(m):
            for mu in O(n - m):
                if len(mu) % 2 == 0:
                    out.add(ClassLabel("D-I", lam, mu))
    if n % 2 == 0:
        for nu in partitions(n // 2):
            if len(nu) % 2 == 0:
                out.add(ClassLabel("D-I", (), tuple(2 * k for k in nu)))
    return out


def _hd_A(n, p):
    if p > n:
        return []
    return [ClassLabel("A", _union(lam, _ones(n - p))) for lam in sorted(O_star(p + 1))]


def _hd_B(n, p):
    out = []
    if p <= n - 1:
        out += [ClassLabel("B", _union(lam, _ones(n - p - 1))) for lam in sorted(O_star(p + 1))]
    if p >= 2 and p % 2 == 0 and p <= n:
        out += [ClassLabel("B", _ones(n - p), tuple(2 * k for k in nu)) for nu in partitions(p // 2)]
    return out


def _hd_D(n, p):
    out = []
    if p < n:
        if p >= 2 and p % 2 == 0:
            out += [ClassLabel("D-I", _ones(n - p), tuple(2 * k for k in nu))
                    for nu in partitions(p // 2) if len(nu) % 2 == 0]
        out += [ClassLabel("D-I", _union(lam, _ones(n - p - 1)), ())
                for lam in sorted(O_star(p + 1))]
        return out
    if p == n:
        # m = n is excluded: (lam, ()) with lam in O*_n is a coboundary
        for m in range(n):
            for lam in sorted(O_star(m)):
                for mu in sorted(O(n - m)):
                    if len(mu) % 2 == 0:
                        out.append(ClassLabel("D-I", lam, mu))
        # the even-partition cocycles survive in the top degree as well
        if n % 2 == 0:
            out += [ClassLabel("D-I", (), tuple(2 * k for k in nu))
                    for nu in partitions(n // 2) if len(nu) % 2 == 0]
    return out


def hd_dims_closed_form(family, n):
    """``{p: (dim, labels)}`` for p = 0..rank (``n`` is m for I2(m))."""
    _check(family, n)
    if family == "D" and n == 3:
        return hd_dims_closed_form("A", 3)
    if family == "I2":
        labels = [ClassLabel("I2", p=p) for p in range(1, (n - 1) // 2 + 1)]
        return {0: (0, []), 1: (0, []), 2: (len(labels), labels)}
    fn = {"A": _hd_A, "B": _hd_B, "D": _hd_D}[family]
    out = {}
    for p in range(n + 1):
        labels = fn(n, p)
        out[p] = (len(labels), labels)
    return out


def hd_dims(family, n):
    """Just the dimensions, as a tuple indexed by degree."""
    res = hd_dims_closed_form(family, n)
    return tuple(res[p][0] for p in sorted(res))


# -- generating functions -------------------------------------------------------

def _series_mul(a, b, N):
    out = [0] * (N + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(0, N + 1 - i):
                if j < len(b) and b[j]:
                    out[i + j] += x * b[j]
    return out


def _odd_product(N):
    """Coefficients of prod_{d>=1} (1 + z^(2d+1)) up to z^N."""
    s = [1] + [0] * N
    for d in range(1, N):
        k = 2 * d + 1
        if k > N:
            break
        f = [0] * (N + 1)
        f[0], f[k] = 1, 1
        s = _series_mul(s, f, N)
    return s


def _partition_series(N):
    """Coefficients of prod_{d>=1} (1 - z^(2d))^-1 up to z^N."""
    s = [1] + [0] * N
    for d in range(1, N // 2 + 1):
        k = 2 * d
        f = [1 if j % k == 0 else 0 for j in range(N + 1)]
        s = _series_mul(s, f, N)
    return s


def genfun_coeffs(family, max_q, max_t):
    """Table ``c[n][p]`` (0 <= n <= max_q, 0 <= p <= max_t) of the generating function.

    Computed by truncated series arithmetic of the product formulas in the
    variable ``z = qt``, then dividing by ``t`` (or ``qt``) and multiplying by
    ``1/(1-q)``.
    """
    if family not in ("A", "B"):
        raise ValueError(f"generating functions exist for A and B, not {family!r}")
    if max_q < 0 or max_t < 0:
        raise ValueError("bounds must be nonnegative")
    N = max_q + max_t + 2
    odd = _odd_product(N)
    odd[0] -= 1  # prod - 1
    grid = [[0] * (max_t + 1) for _ in range(max_q + 1)]

    def add_geometric(qexp, texp, coeff):
        # coeff * q^qexp t^texp / (1 - q)
        if texp < 0 or texp > max_t:
            return
        for n in range(max(qexp, 0), max_q + 1):
            grid[n][texp] += coeff

    for m, a in enumerate(odd):
        if not a:
            continue
        if family == "A":
            add_geometric(m - 1, m - 1, a)  # (qt)^m / (qt)
        else:
            add_geometric(m, m - 1, a)  # (qt)^m / t
    if family == "B":
        ps = _partition_series(N)
        ps[0] -= 1
        for m, a in enumerate(ps):
            if a:
                add_geometric(m, m, a)
    lowest = 1 if family == "A" else 2
    for n in range(min(lowest, max_q + 1)):
        grid[n] = [0] * (max_t + 1)
    return grid
