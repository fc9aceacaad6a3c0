"""Signed permutations for the classical families and the fixed class representatives.

A signed permutation on letters ``1..L`` is an int array ``f`` with
``f[i-1] = +-j`` meaning ``e_i -> +-e_j``.  Products are composites of
functions: ``(f*g)(e_i) = f(g(e_i))``.
"""

from __future__ import annotations

import numpy as np


def identity(L):
    return np.arange(1, L + 1, dtype=np.int64)


def compose(f, g):
    """Row-wise ``f o g`` for stacked arrays of shape (..., L)."""
    idx = np.abs(g) - 1
    return np.take_along_axis(f, idx, axis=-1) * np.sign(g)


def generator_images(family, n):
    """Signed permutations of the Bourbaki simple reflections of A_n, B_n or D_n."""
    L = n + 1 if family == "A" else n
    gens = []
    for i in range(1, n + 1):
        f = identity(L)
        if family == "A" or i < n:
            f[i - 1], f[i] = i + 1, i
        elif family == "B":
            f[n - 1] = -n
        else:  # D: (n-1 n) eps_{n-1} eps_n
            f[n - 2], f[n - 1] = -n, -(n - 1)
        gens.append(f)
    return np.array(gens)


def keys(perms):
    """Injective int64 encoding of signed permutations (rows of ``perms``)."""
    perms = np.asarray(perms, dtype=np.int64)
    L = perms.shape[-1]
    w = (2 * L + 1) ** np.arange(L, dtype=np.int64)
    return ((perms + L) * w).sum(axis=-1)


def layout(family, n, vertices):
    """How a connected parabolic of a classical group acts on letters.

    Returns ``(kind, letters)`` with kind one of ``"A"``, ``"A-twisted"``,
    ``"B"``, ``"D"``.  ``"A-twisted"`` is the parabolic containing
    alpha_n but not alpha_{n-1} in type D, identified with its untwisted
    partner through conjugation by eps_n.
    """
    vs = sorted(vertices)
    i, j = vs[0], vs[-1]
    if family == "A":
        return "A", tuple(range(i, j + 2))
    if family == "B":
        if n in vs:
            return "B", tuple(range(i, n + 1))
        return "A", tuple(range(i, j + 2))
    has_p, has_m = (n - 1) in vs, n in vs
    if has_p and has_m:
        return "D", tuple(range(i, n + 1))
    if has_p:
        return "A", tuple(range(i, n + 1))
    if has_m:
        i = min(n - 1, i)
        return "A-twisted", tuple(range(i, n + 1))
    return "A", tuple(range(i, j + 2))


def twist(f):
    """Conjugation by eps_n (the diagram involution swapping alpha_{n-1}, alpha_n)."""
    g = np.array(f, copy=True)
    L = g.shape[-1]
    g[..., L - 1] *= -1
    last = np.abs(g) == L
    g[last] *= -1
    return g


def cycles(f, letters):
    """Signed cycles of ``f`` on ``letters``: list of (length, sign product)."""
    seen = set()
    out = []
    for a in letters:
        if a in seen:
            continue
        length, sign, cur = 0, 1, a
        while True:
            seen.add(cur)
            v = int(f[cur - 1])
            sign *= 1 if v > 0 else -1
            length += 1
            cur = abs(v)
            if cur == a:
                break
        out.append((length, sign))
    return out


def cycle_data(f, letters):
    """(positive cycle lengths, negative cycle lengths), each sorted descending."""
    cs = cycles(f, letters)
    lam = tuple(sorted((k for k, s in cs if s > 0), reverse=True))
    mu = tuple(sorted((k for k, s in cs if s < 0), reverse=True))
    return lam, mu


def _cycle(f, block, negative=False):
    for a, b in zip(block, block[1:] + block[:1]):
        f[a - 1] = b
    if negative:
        f[block[-1] - 1] = -block[0]
    return f


def pattern(L, letters, lam, mu=(), type_ii=False):
    """The fixed representative: positive cycles for ``lam`` then negative ones for ``mu``.

    With ``type_ii`` the product is followed by ``eps_{n-1} eps_n`` on the last
    two letters (type D classes labelled by even partitions).
    """
    f = identity(L)
    letters = list(letters)
    pos = 0
    for k in lam:
        _cycle(f, letters[pos:pos + k])
        pos += k
    for k in mu:
        _cycle(f, letters[pos:pos + k], negative=True)
        pos += k
    if pos != len(letters):
        raise ValueError("partition sizes do not match the letter set")
    if type_ii:
        a, b = letters[-2], letters[-1]
        # f o eps_a eps_b
        f[a - 1] = -f[a - 1]
        f[b - 1] = -f[b - 1]
    return f
