"""Command-line interface: ``dynkincoh {hd,verify,genfun,affine,cache}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time

from . import classical
from .affine import build_affine, hc_f_for_affine, rep_key
from .cache import Cache
from .complexes import FULL_CD_CAP, build_dynkin_complex, build_hc_complex, cohomology_dims
from .diagram import DiagramError, classify, family_of, parse_diagram
from .group import DEFAULT_GROUP_CAP, LARGE_GROUP_CAP, CapExceeded, build_group

EXIT_OK, EXIT_PARSE, EXIT_CAP, EXIT_MISMATCH = 0, 1, 2, 3

log = logging.getLogger("dynkincoh")


class UsageError(Exception):
    pass


class Mismatch(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = Parser(prog="dynkincoh", description="Dynkin diagram cohomology of Coxeter groups")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--allow-large", action="store_true",
                   help="raise the group-size cap to allow E7 (hours, about 0.5 GB)")
    p.add_argument("--group-cap", type=int, default=None)
    p.add_argument("--full-cd-cap", type=int, default=FULL_CD_CAP)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    hd = sub.add_parser("hd", help="dimensions of HD^p")
    hd.add_argument("--type", dest="type_", help='type label ("E6", "I2(7)") or family with --rank')
    hd.add_argument("--rank", type=int)
    hd.add_argument("--diagram", help='JSON Coxeter matrix {"vertices": [...], "m": [[...]]}')
    hd.add_argument("--method", choices=("engine", "combinatorial", "both"), default="engine")
    hd.add_argument("--per-class", action="store_true")
    hd.add_argument("--complex", choices=("hc", "cd"), default="hc")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", default="all",
                   choices=("table", "classical", "quasi-iso", "top", "stabilisation", "affine", "all"))

    g = sub.add_parser("genfun", help="generating-function coefficients")
    g.add_argument("--family", required=True)
    g.add_argument("--max-q", type=int, default=6)
    g.add_argument("--max-t", type=int, default=6)

    a = sub.add_parser("affine", help="affine class representatives and their dimensions")
    a.add_argument("--type", dest="type_", required=True)
    a.add_argument("--height", type=int, default=2)
    sel = a.add_mutually_exclusive_group()
    sel.add_argument("--all", action="store_true", help="list every representative (default)")
    sel.add_argument("--class", dest="class_index", type=int, help="only the k-th representative")

    c = sub.add_parser("cache", help="inspect or clear the cache")
    c.add_argument("action", choices=("info", "clear"))
    return p


# -- output ---------------------------------------------------------------------

def emit(fmt, payload, text_lines, csv_rows=None, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        rows = csv_rows if csv_rows is not None else []
        if rows:
            w.writerow(rows[0])
            w.writerows(rows[1:])
        out.write(buf.getvalue())
    else:
        out.write("\n".join(text_lines) + "\n")


# -- hd -------------------------------------------------------------------------

def _resolve_diagram(args):
    if args.diagram:
        return parse_diagram(args.diagram)
    if not args.type_:
        raise UsageError("give --type or --diagram")
    label = args.type_
    if args.rank is not None:
        label = f"{label}{args.rank}"
    return parse_diagram(label)


def closed_form_family(D):
    """(family, n) for the closed forms, or None for exceptional types."""
    if D.name == "D3":
        return ("D", 3)
    fam = family_of(D)
    if fam is not None:
        return fam
    label = classify(D)
    if label is None:
        return None
    if D.rank == 2:
        return ("I2", D.m(*D.vertices))
    if label[0] in "ABD":
        return (label[0], int(label[1:]))
    return None


def _combinatorial(D):
    fam = closed_form_family(D)
    if fam is None:
        raise UsageError(f"no closed form for {D.name or classify(D)}")
    res = classical.hd_dims_closed_form(*fam)
    dims = {p: v for p, (v, _) in res.items()}
    per = {(str(x), p) for p, (_, labs) in res.items() for x in labs}
    return dims, per


def cmd_hd(args, cfg):
    D = _resolve_diagram(args)
    name = D.name or json.dumps(D.to_json())
    cache = cfg["cache"]
    report = {"command": "hd", "diagram": name, "method": args.method, "complex": args.complex}
    cache_hit = False
    t0 = time.time()
    engine = None
    per_rows = []
    if args.method in ("engine", "both"):
        key = f"hd/{args.complex}/{'per-class' if args.per_class else 'total'}"
        hit = cache.result(D, key)
        if hit is not None:
            engine = {int(p): v for p, v in hit["dims"].items()}
            per_rows = [tuple(r) for r in hit.get("per_class", [])]
            cache_hit = True
        else:
            if classify(D) is None:
                raise UsageError(f"{name} is not of finite type; use the affine command")
            G = build_group(D, cap=cfg["group_cap"])
            if args.complex == "cd":
                C = build_dynkin_complex(G, cap=cfg["full_cd_cap"])
            else:
                C = build_hc_complex(G)
            res = cohomology_dims(C, per_class=args.per_class, workers=cfg["parallelism"])
            engine = res.dims
            if args.per_class:
                from .complexes import FiniteSystem
                S = FiniteSystem(G)
                for cid, dims in sorted(res.per_class.items()):
                    for p, v in sorted(dims.items()):
                        if v:
                            per_rows.append((S.class_name(cid), p, v))
            cache.store(D, G, {key: {"dims": {str(p): v for p, v in engine.items()},
                                     "per_class": [list(r) for r in per_rows]}})
    comb = None
    if args.method in ("combinatorial", "both"):
        comb, comb_per = _combinatorial(D)
        if args.method == "combinatorial" and args.per_class:
            per_rows = sorted((lab, p, 1) for lab, p in comb_per)
    dims = engine if engine is not None else comb
    report["degrees"] = sorted(dims)
    report["dims"] = [dims[p] for p in sorted(dims)]
    if comb is not None and engine is not None:
        report["combinatorial_dims"] = [comb.get(p, 0) for p in sorted(dims)]
        report["agree"] = comb == engine
        if args.per_class:
            agree_pc = {(lab, p) for lab, p, _ in per_rows} == comb_per
            report["agree"] = report["agree"] and agree_pc
    if args.per_class:
        report["per_class"] = [{"class_label": lab, "degree": p, "dim": v}
                               for lab, p, v in sorted(per_rows, key=lambda r: (r[1], r[0]))]
    lines = [f"HD^p({name}), method {args.method}:"]
    lines += [f"  p={p}: {dims[p]}" for p in sorted(dims)]
    if "agree" in report:
        lines.append("  engine and closed form " + ("agree" if report["agree"] else "DISAGREE"))
    for row in report.get("per_class", []):
        lines.append(f"  class {row['class_label']}: HD^{row['degree']} = {row['dim']}")
    lines.append(f"  ({time.time() - t0:.2f} s{', cached' if cache_hit else ''})")
    rows = [("diagram", "degree", "dim", "class_label")]
    rows += [(name, p, dims[p], "") for p in sorted(dims)]
    rows += [(name, r["degree"], r["dim"], r["class_label"]) for r in report.get("per_class", [])]
    emit(cfg["format"], report, lines, rows)
    if report.get("agree") is False:
        raise Mismatch("engine and closed form disagree")
    return EXIT_OK


# -- verify ---------------------------------------------------------------------

def cmd_verify(args, cfg):
    from . import verify
    checks = verify.run(args.suite, include_large=cfg["allow_large"])
    failed = [c for c in checks if not c.ok]
    payload = {"command": "verify", "suite": args.suite,
               "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks],
               "passed": not failed}
    if failed:
        payload["first_failure"] = failed[0].name
    lines = [f"{'PASS' if c.ok else 'FAIL'}  {c.name}" + (f"  ({c.detail})" if not c.ok else "")
             for c in checks]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    rows = [("check", "ok", "detail")] + [(c.name, c.ok, c.detail) for c in checks]
    emit(cfg["format"], payload, lines, rows)
    return EXIT_MISMATCH if failed else EXIT_OK


# -- genfun ---------------------------------------------------------------------

def cmd_genfun(args, cfg):
    fam = args.family.upper()
    if fam not in ("A", "B"):
        raise UsageError("--family must be A or B")
    grid = classical.genfun_coeffs(fam, args.max_q, args.max_t)
    lo = 1 if fam == "A" else 2
    check = {}
    for n in range(lo, args.max_q + 1):
        if n <= 5:
            G = build_group(parse_diagram(f"{fam}{n}"), cap=cfg["group_cap"])
            dims = cohomology_dims(build_hc_complex(G)).dims
            check[n] = all(grid[n][p] == dims.get(p, 0) for p in range(args.max_t + 1))
    payload = {"command": "genfun", "family": fam, "max_q": args.max_q, "max_t": args.max_t,
               "coefficients": grid, "engine_agrees": {str(k): v for k, v in check.items()}}
    width = max(3, len(str(max(max(r) for r in grid))) + 1)
    lines = [f"chi^{fam}: coefficient of q^n t^p (rows n, columns p)",
             "n\\p " + "".join(f"{p:>{width}}" for p in range(args.max_t + 1)) + "  engine"]
    for n, row in enumerate(grid):
        flag = {True: "ok", False: "MISMATCH"}.get(check.get(n), "")
        lines.append(f"{n:>3} " + "".join(f"{x:>{width}}" for x in row) + f"  {flag}")
    rows = [("n", "p", "coefficient")] + [(n, p, grid[n][p]) for n in range(len(grid))
                                           for p in range(len(grid[n]))]
    emit(cfg["format"], payload, lines, rows)
    return EXIT_MISMATCH if not all(check.values()) else EXIT_OK


# -- affine ---------------------------------------------------------------------

def cmd_affine(args, cfg):
    label = args.type_
    if label.lower().startswith("affine-"):
        label = label[len("affine-"):]
    D0 = parse_diagram(label)
    try:
        A = build_affine(D0)
    except DiagramError as exc:
        raise _NonCrystallographic(str(exc)) from None
    reps = A.class_representatives(args.height)
    idx = list(range(len(reps)))
    if args.class_index is not None:
        if not 0 <= args.class_index < len(reps):
            raise UsageError(f"class index out of range 0..{len(reps) - 1}")
        idx = [args.class_index]
    hcf = None
    S = None
    rows_out, lines = [], [f"affine-{label}: {len(reps)} representatives with height <= {args.height}"]
    for k in idx:
        r = reps[k]
        entry = {"index": k, "rep": A.describe(r), "infinite_order": r.order_infinite}
        if r.order_infinite:
            dims = A.hd_dims_infinite_class(r)
            entry["dims"] = {str(i): d for i, d in dims.items()}
            txt = " ".join(f"HD^{i}={d}" for i, d in dims.items() if d) or "all zero"
        else:
            if hcf is None:
                C = hc_f_for_affine(A)
                S = C.system
                hcf = (C, cohomology_dims(C, per_class=True))
            C, res = hcf
            key = rep_key(A, r)
            side1 = res.per_class.get(key, {p: 0 for p in C.degrees})
            side2 = A.lambda_formula_dims(r)
            entry["triangle_sides"] = {"hc_f": {str(p): v for p, v in side1.items()},
                                       "lambda_formula": {str(i): d for i, d in side2.items()},
                                       "note": "triangle sides only"}
            txt = ("triangle sides only: HC_f " + str(tuple(side1.values()))
                   + ", formula " + str(tuple(side2.values())))
        rows_out.append(entry)
        lines.append(f"  [{k}] t={r.t} v={entry['rep']['v_word']}"
                     f" {'infinite' if r.order_infinite else 'finite'} order: {txt}")
    payload = {"command": "affine", "diagram": f"affine-{label}", "height": args.height,
               "representatives": rows_out}
    rows = [("diagram", "index", "t", "v_word", "infinite_order", "degree", "dim")]
    for e in rows_out:
        dims = e.get("dims") or e["triangle_sides"]["lambda_formula"]
        for i, d in dims.items():
            rows.append((f"affine-{label}", e["index"], " ".join(map(str, e["rep"]["t"])),
                         e["rep"]["v_word"], e["infinite_order"], i, d))
    emit(cfg["format"], payload, lines, rows)
    return EXIT_OK


class _NonCrystallographic(Exception):
    pass


# -- cache ----------------------------------------------------------------------

def cmd_cache(args, cfg):
    cache = cfg["cache"]
    if args.action == "clear":
        n = cache.clear()
        emit(cfg["format"], {"command": "cache", "action": "clear", "removed": n},
             [f"removed {n} cache files from {cache.dir}"], [("removed",), (n,)])
        return EXIT_OK
    entries = cache.entries()
    lines = [f"cache directory {cache.dir}: {len(entries)} entries"]
    lines += [f"  {e['file']} {e['name']} results={','.join(e['results'])}" for e in entries]
    emit(cfg["format"], {"command": "cache", "action": "info", "directory": str(cache.dir),
                         "entries": entries}, lines,
         [("file", "name", "bytes")] + [(e["file"], e["name"], e["bytes"]) for e in entries])
    return EXIT_OK


COMMANDS = {"hd": cmd_hd, "verify": cmd_verify, "genfun": cmd_genfun, "affine": cmd_affine,
            "cache": cmd_cache}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cap = args.group_cap or (LARGE_GROUP_CAP if args.allow_large else DEFAULT_GROUP_CAP)
    if args.group_cap and args.group_cap > DEFAULT_GROUP_CAP and not args.allow_large:
        print("error: caps above the default need --allow-large", file=sys.stderr)
        return EXIT_CAP
    cfg = {"format": args.format, "group_cap": cap, "full_cd_cap": args.full_cd_cap,
           "allow_large": args.allow_large, "parallelism": max(1, args.parallelism),
           "cache": Cache(args.cache_dir, enabled=not args.no_cache)}
    try:
        return COMMANDS[args.command](args, cfg)
    except (UsageError, DiagramError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"error: {exc}; E7 needs --allow-large, E8 is out of reach", file=sys.stderr)
        return EXIT_CAP
    except _NonCrystallographic as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except Mismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
