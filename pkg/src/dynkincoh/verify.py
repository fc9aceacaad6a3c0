"""Verification suites run by ``dynkincoh verify``."""

from __future__ import annotations

from dataclasses import dataclass

from . import classical
from .affine import build_affine, hc_f_for_affine
from .complexes import (build_dynkin_complex, build_hc_complex, cohomology_dims, induced_rank,
                        restrict, top_cohomology_basis)
from .diagram import named_diagram
from .group import build_group

# degrees 2..n of the exceptional table
TABLE = {
    "G2": (2,),
    "F4": (3, 0, 5),
    "H3": (3, 0),
    "H4": (3, 0, 16),
    "E6": (1, 0, 2, 0, 4),
    "E7": (1, 0, 2, 0, 7, 0),
    "E8": (1, 0, 2, 0, 6, 1, 17),
}
LARGE = ("E7", "E8")
QUASI_ISO = ("A2", "A3", "B2", "B3", "G2", "I2(5)", "I2(7)", "H3")


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


def engine_dims(label, per_class=False, complex="hc", cap=None):
    kw = {} if cap is None else {"cap": cap}
    G = build_group(named_diagram(label), **kw)
    C = build_hc_complex(G) if complex == "hc" else build_dynkin_complex(G)
    res = cohomology_dims(C, per_class=per_class)
    return G, C, res


def _labelled(G, C, res):
    """{(label string, degree): dim} over nonzero per-class entries."""
    out = {}
    for key, dims in res.per_class.items():
        for p, v in dims.items():
            if v:
                out[(C.system.class_name(key) if hasattr(C, "system") else str(key), p)] = v
    return out


def suite_table(include_large=False):
    out = []
    for lab, row in TABLE.items():
        if lab in LARGE and not include_large:
            continue
        _, _, res = engine_dims(lab, cap=3_000_000 if lab in LARGE else None)
        got = tuple(res.dims[p] for p in range(2, len(row) + 2))
        out.append(Check(f"table {lab}", got == row, f"got {got}, expected {row}"))
    return out


CLASSICAL = ([("A", n) for n in range(1, 6)] + [("B", n) for n in range(2, 5)] + [("D", 4)]
             + [("I2", m) for m in range(3, 9)])


def _label_of(family, n):
    return f"I2({n})" if family == "I2" else f"{family}{n}"


def suite_classical():
    out = []
    for fam, n in CLASSICAL:
        lab = _label_of(fam, n)
        G, C, res = engine_dims(lab, per_class=True)
        cf = classical.hd_dims_closed_form(fam, n)
        want = tuple(cf[p][0] for p in range(G.n + 1))
        got = tuple(res.dims[p] for p in range(G.n + 1))
        out.append(Check(f"closed form {lab}", got == want, f"engine {got}, closed form {want}"))
        want_lab = {(str(x), p) for p, (_, labs) in cf.items() for x in labs}
        got_lab = set(_labelled(G, C, res))
        out.append(Check(f"closed-form classes {lab}", got_lab == want_lab,
                         f"engine {sorted(got_lab)}, closed form {sorted(want_lab)}"))
        eps = {str(c.label) for c in G.whole.eps_trivial_classes()}
        want_eps = {str(x) for x in classical.epsilon_trivial_labels(fam, n)}
        out.append(Check(f"eps-trivial classes {lab}", eps == want_eps,
                         f"engine {sorted(eps)}, closed form {sorted(want_eps)}"))
    return out


def suite_quasi_iso(labels=QUASI_ISO):
    out = []
    for lab in labels:
        G, H, rh = engine_dims(lab, per_class=True)
        _, C, rc = engine_dims(lab, per_class=True, complex="cd")
        ok = rh.dims == rc.dims
        # HC blocks are a subset of the CD blocks; CD blocks missing from HC must be acyclic
        for key, dims in rc.per_class.items():
            hd = rh.per_class.get(key, {p: 0 for p in dims})
            if any(hd.get(p, 0) != v for p, v in dims.items()):
                ok = False
        out.append(Check(f"quasi-iso {lab}", ok, f"HC {rh.as_tuple()}, CD {rc.as_tuple()}"))
    return out


def suite_top(labels=QUASI_ISO + ("A4", "A5")):
    out = []
    for lab in labels:
        G, C, res = engine_dims(lab)
        top = len(top_cohomology_basis(G))
        out.append(Check(f"top cohomology {lab}", top == res.dims[G.n],
                         f"cuspidal {top}, HD^{G.n} = {res.dims[G.n]}"))
    return out


def suite_stabilisation(max_n=8, engine_max=5):
    out = []
    for fam in ("A", "B", "D"):
        lo = {"A": 1, "B": 2, "D": 3}[fam]
        bad = []
        for n in range(lo, max_n + 1):
            big = classical.hd_dims(fam, n)
            for m in range(lo, n + 1):
                small = classical.hd_dims(fam, m)
                for p in range(m + 1):
                    if big[p] != small[p]:
                        bad.append((n, m, p, big[p], small[p]))
        out.append(Check(f"stabilisation {fam}", not bad,
                         "failures (n, m, p, HD(X_n), HD(X_m)): " + str(bad[:6]) if bad else ""))
    for n in range(2, engine_max + 1):
        G = build_group(named_diagram(f"A{n}"))
        C = build_hc_complex(G)
        full = cohomology_dims(C).dims
        for m in range(2, n + 1):
            R = restrict(C, tuple(range(1, m + 1)))
            T = R["target"]
            tdims = cohomology_dims(T).dims
            for p in range(m + 1):
                r = induced_rank(C, T, R["maps"][p], p)
                ok = r == full[p] == tdims[p]
                out.append(Check(f"restriction A{n}->A{m} p={p}", ok,
                                 f"rank {r}, dims {full[p]} and {tdims[p]}"))
    return out


AFFINE_SMALL = ("A1", "A2", "B2", "G2", "A3", "B3", "C3")


def suite_affine(height=3, types=AFFINE_SMALL):
    out = []
    A = build_affine("A1")
    reps = [r for r in A.class_representatives(height) if r.order_infinite]
    ok = all(A.hd_dims_infinite_class(r) == {0: 0, 1: 1, 2: 1} for r in reps if r.v == 0)
    out.append(Check("affine A1 translations", ok and bool(reps)))
    A = build_affine("A2")
    r = next(x for x in A.class_representatives(1) if x.v == 0 and x.t == (1, 0))
    got = A.hd_dims_infinite_class(r)
    out.append(Check("affine A2 coroot translation", got == {0: 0, 1: 1, 2: 2, 3: 1}, str(got)))
    for lab in types:
        A = build_affine(lab)
        try:
            for r in A.class_representatives(height):
                if r.order_infinite:
                    A.hd_dims_infinite_class(r)
            ok, why = True, ""
        except AssertionError as exc:
            ok, why = False, str(exc)
        out.append(Check(f"affine {lab} integrality", ok, why))
        C = hc_f_for_affine(A)
        C.check_square_zero()
    return out


SUITES = {
    "table": suite_table,
    "classical": suite_classical,
    "quasi-iso": suite_quasi_iso,
    "top": suite_top,
    "stabilisation": suite_stabilisation,
    "affine": suite_affine,
}


def run(suite="all", include_large=False):
    names = list(SUITES) if suite == "all" else [suite]
    out = []
    for name in names:
        fn = SUITES[name]
        out += fn(include_large) if name == "table" else fn()
    return out
