"""Command line front end.

    ringext analyze SPEC [--format human|machine] [--check-witness [REPORT]]
    ringext verify-coring SPEC [--format ...]
    ringext sweep-groups [--max-order N] [--format ...]
    ringext catalog

SPEC is a JSON file (or ``builtin:E3``).  Three kinds are accepted:

    {"kind": "builtin", "id": "E3"}
    {"kind": "group", "degree": 3, "generators_G": [[1,2,0],[1,0,2]],
     "generators_H": [[1,2,0]]}
    {"kind": "explicit", "name": "...", "dimA": 2, "dimB": 1,
     "multA": [[i, j, k, "p/q"], ...], "unitA": ["1", "1"],
     "multB": [[0, 0, 0, "1"]], "unitB": ["1"],
     "iota": [["1"], ["1"]]}

mult entries say x_i x_j has coefficient c on x_k; iota is dimA x dimB.
Permutations are 0-based image lists.  Exit status: 0 ok, 2 bad input,
3 failed internal self-check.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from .algebra import Algebra, AlgebraError, Extension, make_extension
from .bicoring import build_coring, build_t_bialgebroid, coaction, coinvariants, galois_check
from .classify import (Context, FrobeniusWitness, check_d2, full_report, verify_centrally_projective,
                       verify_frobenius, verify_hseparable, verify_left_quasibase,
                       verify_right_quasibase, verify_separable, verify_split)
from .endos import compute_E
from .exactlin import ONE, Mat, Q, _axpy, fmt, to_sparse
from .fixtures import BUILTINS, builtin
from .grouphopf import PermGroup, group_catalog, is_normal, subgroup_extension, subgroups
from .tensorsq import SelfCheckError

SCHEMA = "ringext.report/1"
EXIT_OK, EXIT_INPUT, EXIT_SELFCHECK = 0, 2, 3


class SpecError(ValueError):
    """Input spec problem, carrying a location (field path or line/column)."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


# ---------------------------------------------------------------------------
# parsing

def _scalar(x, where):
    if isinstance(x, float):
        raise SpecError(where, f"float {x!r} is not exact; write it as \"p/q\"")
    try:
        return Q(x)
    except (ValueError, TypeError) as e:
        raise SpecError(where, str(e)) from None


def _int(x, where, lo=0, hi=None):
    if not isinstance(x, int) or isinstance(x, bool) or x < lo or (hi is not None and x >= hi):
        raise SpecError(where, f"expected an integer in [{lo}, {hi if hi is not None else 'inf'}), got {x!r}")
    return x


def _need(d, key, where):
    if key not in d:
        raise SpecError(where, f"missing field {key!r}")
    return d[key]


def _algebra_from(spec, dim_key, mult_key, unit_key, name):
    n = _int(_need(spec, dim_key, "spec"), dim_key, 1)
    entries = _need(spec, mult_key, "spec")
    if not isinstance(entries, list):
        raise SpecError(mult_key, "expected a list of [i, j, k, coefficient]")
    prods: dict = {}
    for idx, e in enumerate(entries):
        where = f"{mult_key}[{idx}]"
        if not isinstance(e, list) or len(e) != 4:
            raise SpecError(where, "expected [i, j, k, coefficient]")
        i, j, k = (_int(e[t], f"{where}[{t}]", 0, n) for t in range(3))
        c = _scalar(e[3], f"{where}[3]")
        if c:
            _axpy(prods.setdefault((i, j), {}), c, {k: ONE})
    unit = _need(spec, unit_key, "spec")
    if not isinstance(unit, list) or len(unit) != n:
        raise SpecError(unit_key, f"expected {n} scalars")
    unit = [_scalar(u, f"{unit_key}[{t}]") for t, u in enumerate(unit)]
    return Algebra(n, prods, unit, name)


def _perm(p, degree, where):
    if not isinstance(p, list) or sorted(p) != list(range(degree)):
        raise SpecError(where, f"not a permutation of 0..{degree - 1}")
    return tuple(p)


def extension_from_spec(spec) -> Extension:
    if not isinstance(spec, dict):
        raise SpecError("spec", "top level must be an object")
    kind = _need(spec, "kind", "spec")
    if kind == "builtin":
        ident = _need(spec, "id", "spec")
        if ident not in BUILTINS:
            raise SpecError("id", f"unknown builtin {ident!r}")
        return builtin(ident)
    if kind == "group":
        degree = _int(_need(spec, "degree", "spec"), "degree", 1)
        gg = [_perm(p, degree, f"generators_G[{i}]") for i, p in enumerate(_need(spec, "generators_G", "spec"))]
        hg = [_perm(p, degree, f"generators_H[{i}]") for i, p in enumerate(_need(spec, "generators_H", "spec"))]
        G = PermGroup(degree, gg, spec.get("name_G", "G"))
        H = PermGroup(degree, hg, spec.get("name_H", "H"))
        if not H.issubgroup(G):
            raise SpecError("generators_H", "H is not contained in G")
        return subgroup_extension(G, H, spec.get("name", ""))
    if kind == "explicit":
        name = spec.get("name", "explicit")
        A = _algebra_from(spec, "dimA", "multA", "unitA", "A")
        B = _algebra_from(spec, "dimB", "multB", "unitB", "B")
        rows = _need(spec, "iota", "spec")
        if not isinstance(rows, list) or len(rows) != A.dim:
            raise SpecError("iota", f"expected {A.dim} rows")
        data = []
        for i, r in enumerate(rows):
            if not isinstance(r, list) or len(r) != B.dim:
                raise SpecError(f"iota[{i}]", f"expected {B.dim} entries")
            data.append([_scalar(x, f"iota[{i}][{j}]") for j, x in enumerate(r)])
        return make_extension(B, A, Mat.from_lists(data, B.dim), name)
    raise SpecError("kind", f"unknown kind {kind!r}")


def load_spec(path: str) -> Extension:
    if path.startswith("builtin:"):
        return extension_from_spec({"kind": "builtin", "id": path.split(":", 1)[1]})
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise SpecError(path, str(e)) from None
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"{path}:{e.lineno}:{e.colno}", e.msg) from None
    return extension_from_spec(spec)


# ---------------------------------------------------------------------------
# serialisation

def ser_vec(v, n) -> list:
    v = to_sparse(v)
    return [fmt(v.get(i, 0)) for i in range(n)]


def ser_mat(m: Mat) -> list:
    return [[fmt(x) for x in row] for row in m.entries()]


def ser_tensor(ts, cls) -> list:
    """A representative in A (x) A as [[i, j, "c"], ...]."""
    n = ts.n
    return [[k // n, k % n, fmt(c)] for k, c in sorted(ts.rep(cls).items())]


def de_vec(v) -> dict:
    return {i: Q(x) for i, x in enumerate(v) if Q(x)}


def de_mat(rows) -> Mat:
    return Mat.from_lists([[Q(x) for x in r] for r in rows])


def de_tensor(ts, entries) -> dict:
    acc: dict = {}
    for i, j, c in entries:
        _axpy(acc, Q(c), ts.simple({i: ONE}, {j: ONE}))
    return acc


def build_report(ext: Extension, with_coring: bool = True) -> dict:
    ctx = Context(ext)
    rep = full_report(ctx)
    ts = ctx.ts
    n = ext.n
    w = rep.witnesses
    out = {
        "schema": SCHEMA,
        "extension": {
            "name": ext.name,
            "dimA": n, "dimB": ext.B.dim, "dimR": ext.R.dim,
            "dim_A_tensor_B_A": ts.dim, "dim_T": ctx.T.dim, "dim_S": ctx.S.dim,
            "dim_E": compute_E(ext).dim,
        },
        "properties": dict(rep.flags),
        "gamma_bijective": rep.gamma_bijective,
        "implications": [{"statement": s, "applies": a, "holds": h} for s, a, h in rep.implications],
        "notes": list(rep.notes),
    }
    wit: dict = {}
    if w.split_p is not None:
        wit["split_p"] = ser_mat(w.split_p)
    if w.sep_e is not None:
        wit["separability_element"] = ser_tensor(ts, w.sep_e)
    if w.hsep is not None:
        wit["h_separable"] = [{"e": ser_tensor(ts, e), "r": ser_vec(r, n)} for e, r in w.hsep]
    if w.cproj is not None:
        wit["centrally_projective"] = [{"c": fmt(c), "q": ser_mat(q), "r": ser_vec(r, n)}
                                       for c, q, r in w.cproj]
    qb = w.quasibase
    if qb is not None:
        q: dict = {}
        if qb.left is not None:
            q["left"] = [{"t": ser_tensor(ts, t), "beta": ser_mat(b)} for t, b in qb.left]
        if qb.right is not None:
            q["right"] = [{"gamma": ser_mat(g), "u": ser_tensor(ts, u)} for g, u in qb.right]
        if q:
            wit["quasibase"] = q
    if w.frobenius is not None:
        f = w.frobenius
        wit["frobenius"] = {"E": ser_mat(f.E), "xs": [ser_vec(x, n) for x in f.xs],
                            "ys": [ser_vec(y, n) for y in f.ys]}
    out["witnesses"] = wit
    if with_coring and qb is not None and qb.d2:
        out["coring"] = coring_record(ctx, qb)
    return out


def coring_record(ctx, qb) -> dict:
    bialg, brec = build_t_bialgebroid(ctx, qb)
    cor = build_coring(ctx, qb)
    g = galois_check(ctx, cor)
    co = coaction(ctx, qb, cor)
    sp, equal, excess = coinvariants(ctx, co, cor)
    return {
        "dim_C": cor.dim,
        "t_bialgebroid": dict(brec),
        "coring": dict(g.record),
        "can_bijective": g.can_bijective,
        "beta_bijective": g.beta_bijective,
        "coaction": dict(co.record),
        "coinvariants": {"dim": sp.dim, "equals_B": equal, "excess": excess},
        "all_pass": g.ok and brec.ok and co.record.ok,
    }


def check_witnesses(ext: Extension, report: dict) -> dict:
    """Re-verify every witness in a (parsed) report; returns name -> pass."""
    name = report.get("extension", {}).get("name")
    if name is not None and name != ext.name:
        raise SpecError("report", f"report is for {name!r}, spec is {ext.name!r}")
    ctx = Context(ext)
    ts = ctx.ts
    wit = report.get("witnesses", {})
    q = wit.get("quasibase", {})
    checks = {
        "split_p": lambda: verify_split(ext, de_mat(wit["split_p"])),
        "separability_element": lambda: verify_separable(ts, de_tensor(ts, wit["separability_element"])),
        "h_separable": lambda: verify_hseparable(
            ctx, [(de_tensor(ts, p["e"]), de_vec(p["r"])) for p in wit["h_separable"]]),
        "centrally_projective": lambda: verify_centrally_projective(
            ext, [(Q(p["c"]), de_mat(p["q"]), de_vec(p["r"])) for p in wit["centrally_projective"]]),
        "quasibase.left": lambda: verify_left_quasibase(
            ctx, [(de_tensor(ts, p["t"]), de_mat(p["beta"])) for p in q["left"]]),
        "quasibase.right": lambda: verify_right_quasibase(
            ctx, [(de_mat(p["gamma"]), de_tensor(ts, p["u"])) for p in q["right"]]),
        "frobenius": lambda: verify_frobenius(ext, FrobeniusWitness(
            de_mat(wit["frobenius"]["E"]), [de_vec(x) for x in wit["frobenius"]["xs"]],
            [de_vec(y) for y in wit["frobenius"]["ys"]])),
    }
    present = {k for k in wit if k != "quasibase"} | {f"quasibase.{k}" for k in q}
    res = {}
    for key, fn in checks.items():
        if key not in present:
            continue
        try:
            res[key] = bool(fn())
        except (ValueError, KeyError, TypeError, IndexError):
            # malformed or wrongly shaped witness
            res[key] = False
    return res


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


# ---------------------------------------------------------------------------
# human rendering

def _mark(v):
    return {True: "yes", False: "no", None: "n/a"}[v]


def render_report(rep: dict) -> str:
    e = rep["extension"]
    lines = [f"extension {e['name']}: dim A = {e['dimA']}, dim B = {e['dimB']}, dim R = {e['dimR']}",
             f"  dim A(x)_B A = {e['dim_A_tensor_B_A']}, dim T = {e['dim_T']}, "
             f"dim S = {e['dim_S']}, dim End(A_B) = {e['dim_E']}",
             "properties:"]
    for k, v in rep["properties"].items():
        lines.append(f"  {k:22s} {_mark(v)}")
    lines.append(f"  {'gamma bijective':22s} {_mark(rep['gamma_bijective'])}")
    lines.append("implication audit:")
    for imp in rep["implications"]:
        status = "ok" if (not imp["applies"] or imp["holds"]) else "VIOLATED"
        lines.append(f"  {imp['statement']:50s} {status if imp['applies'] else 'vacuous'}")
    for note in rep["notes"]:
        lines.append(f"note: {note}")
    lines.append("witnesses: " + (", ".join(sorted(rep["witnesses"])) or "none"))
    if "coring" in rep:
        lines.extend(render_coring(rep["coring"]))
    return "\n".join(lines) + "\n"


def render_coring(c: dict) -> list:
    lines = [f"Galois coring A (x)_R T, dim {c['dim_C']}:"]
    for section in ("t_bialgebroid", "coring", "coaction"):
        for k, v in c[section].items():
            lines.append(f"  [{'pass' if v else 'FAIL'}] {k}")
    lines.append(f"  [{'pass' if c['can_bijective'] else 'FAIL'}] can bijective")
    lines.append(f"  [{'pass' if c['beta_bijective'] else 'FAIL'}] beta bijective")
    ci = c["coinvariants"]
    lines.append(f"  coinvariants: dim {ci['dim']}, equal to B: {_mark(ci['equals_B'])}")
    return lines


# ---------------------------------------------------------------------------
# commands

def cmd_analyze(args) -> int:
    ext = load_spec(args.spec)
    rep = build_report(ext)
    if args.check_witness is not None:
        if args.check_witness == "-":
            source = json.loads(dumps(rep))
        else:
            with open(args.check_witness) as fh:
                source = json.load(fh)
        res = check_witnesses(ext, source)
        rep_check = {"schema": SCHEMA, "witness_check": res, "all_verified": all(res.values())}
        sys.stdout.write(dumps(rep_check) if args.format == "machine" else
                         "".join(f"[{'pass' if v else 'FAIL'}] {k}\n" for k, v in res.items()))
        return EXIT_OK if all(res.values()) else EXIT_SELFCHECK
    sys.stdout.write(dumps(rep) if args.format == "machine" else render_report(rep))
    return EXIT_OK


def cmd_verify_coring(args) -> int:
    ext = load_spec(args.spec)
    ctx = Context(ext)
    qb = check_d2(ctx)
    if not qb.d2:
        out = {"schema": SCHEMA, "name": ext.name, "outcome": "not D2",
               "left_d2": qb.left_d2, "right_d2": qb.right_d2}
        sys.stdout.write(dumps(out) if args.format == "machine" else f"{ext.name}: not D2\n")
        return EXIT_OK
    rec = coring_record(ctx, qb)
    items = _itemize(rec)
    out = {"schema": SCHEMA, "name": ext.name, "outcome": "D2", "items": items,
           "detail": rec}
    if args.format == "machine":
        sys.stdout.write(dumps(out))
    else:
        sys.stdout.write(f"{ext.name}: D2\n")
        sys.stdout.write("".join(f"  [{'pass' if v else 'FAIL'}] {k}\n" for k, v in items.items()))
    return EXIT_OK


def _itemize(rec: dict) -> dict:
    c = rec["coring"]

    def allof(*keys):
        return all(c[k] for k in keys)
    return {
        "bimodule axioms": allof("left action associative, right action associative, actions commute",
                                 "1_A acts as identity on both sides", "right A-action well defined"),
        "Delta_C left linear": c["Delta_C left A-linear"],
        "Delta_C right linear": c["Delta_C right A-linear"],
        "coassociativity": c["Delta_C coassociative"] and rec["t_bialgebroid"]["Delta_T coassociative"],
        "counit laws": allof("counit law (eps_C (x) id) Delta_C = id", "counit law (id (x) eps_C) Delta_C = id",
                             "eps_C left A-linear", "eps_C right A-linear"),
        "grouplike": allof("Delta_C(x) = x (x)_A x", "eps_C(x) = 1", "x b = b x for b in B"),
        "can o beta = beta o can = id": allof("can o beta = id", "beta o can = id")
        and rec["can_bijective"] and rec["beta_bijective"],
        "coinvariants = B": rec["coinvariants"]["equals_B"],
    }


def sweep_rows(max_order: int) -> list:
    rows = []
    for G in group_catalog(max_order):
        for H in subgroups(G):
            ext = subgroup_extension(G, H)
            ctx = Context(ext)
            from .classify import check_hseparable
            qb = check_d2(ctx)
            hs = check_hseparable(ctx) is not None
            nrm = is_normal(G, H)
            rows.append({"G": G.name, "order_G": G.order, "H": H.name, "order_H": H.order,
                         "normal": nrm, "d2": qb.d2, "left_d2": qb.left_d2, "right_d2": qb.right_d2,
                         "h_separable": hs,
                         "d2_agrees": qb.d2 == nrm,
                         "hsep_agrees": hs == (H.order == G.order)})
    return rows


def cmd_sweep_groups(args) -> int:
    if args.max_order < 1 or args.max_order > 12:
        raise SpecError("--max-order", "must be between 1 and 12")
    rows = sweep_rows(args.max_order)
    if args.format == "machine":
        sys.stdout.write(dumps({"schema": SCHEMA, "rows": rows,
                                "all_agree": all(r["d2_agrees"] and r["hsep_agrees"] for r in rows)}))
    else:
        hdr = f"{'G':10s} {'|G|':>3s} {'|H|':>3s} {'normal':>6s} {'D2':>4s} {'H-sep':>5s}  agree"
        lines = [hdr]
        for r in rows:
            agree = "ok" if r["d2_agrees"] and r["hsep_agrees"] else "MISMATCH"
            lines.append(f"{r['G']:10s} {r['order_G']:3d} {r['order_H']:3d} {_mark(r['normal']):>6s} "
                         f"{_mark(r['d2']):>4s} {_mark(r['h_separable']):>5s}  {agree}")
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.format == "machine":
        sys.stdout.write(dumps({"schema": SCHEMA, "builtins": {k: d for k, (_, d) in BUILTINS.items()}}))
    else:
        sys.stdout.write("".join(f"{k}  {d}\n" for k, (_, d) in BUILTINS.items()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ringext", description="Exact analysis of finite-dimensional ring extensions.")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt_arg(sp):
        sp.add_argument("--format", choices=("human", "machine"), default="human")

    a = sub.add_parser("analyze", help="decide all extension properties and verify the coring")
    a.add_argument("spec")
    a.add_argument("--check-witness", nargs="?", const="-", default=None, metavar="REPORT",
                   help="re-verify the witnesses of REPORT (default: of a fresh report)")
    fmt_arg(a)
    v = sub.add_parser("verify-coring", help="itemised coring axiom check")
    v.add_argument("spec")
    fmt_arg(v)
    s = sub.add_parser("sweep-groups", help="D2 versus normality over small groups")
    s.add_argument("--max-order", type=int, default=12)
    fmt_arg(s)
    c = sub.add_parser("catalog", help="list built-in extensions")
    fmt_arg(c)
    return p


COMMANDS = {"analyze": cmd_analyze, "verify-coring": cmd_verify_coring,
            "sweep-groups": cmd_sweep_groups, "catalog": cmd_catalog}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        code = COMMANDS[args.command](args)
    except (SpecError, AlgebraError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_INPUT
    except SelfCheckError as e:
        print(f"self-check failed: {e}", file=sys.stderr)
        code = EXIT_SELFCHECK
    print(f"elapsed: {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
