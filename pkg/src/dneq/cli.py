"""Command-line entry point: ``dneq <command> [options]``.

Output is JSON (rationals as strings) unless ``--format table``.  Usage errors
exit with status 2, computation errors with status 1 and the error's class
name on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .numth import rat, rat_str
from .series import DEFAULT_PREC

__all__ = ["main", "build_parser", "verify_pair"]

QEXP_OBJECTS = ("uniformizer", "t", "Q", "phi", "phi_t", "I", "eta")


def _pair(text: str) -> tuple[int, int]:
    try:
        n, d = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N,d but got {text!r}") from None
    if n < 1 or d < 1:
        raise argparse.ArgumentTypeError("N and d must be positive")
    return n, d


def _prime_window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split("-"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO-HI but got {text!r}") from None
    return lo, hi


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _emit(obj, fmt: str, table) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(table(obj))


def _align(rows: list[list[str]]) -> str:
    if not rows:
        return ""
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in rows)


def _matrix_rows(A) -> list[list[str]]:
    # upper triangle, blanks below the diagonal
    return [["" if j < i else x for j, x in enumerate(row)] for i, row in enumerate(A.rows())]


def _pmap(fn, args, jobs: int):
    if jobs <= 1 or len(args) <= 1:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, *zip(*args)))


# ---------------------------------------------------------------------------
# verify


def verify_pair(N: int, d: int, terms: int = DEFAULT_PREC) -> dict:
    """All checks for one tabulated pair; each check is ``{"ok": bool, ...}``."""
    from .fixtures import golden
    from .modular import eta_product_check, phi_in_t
    from .pfit import recover_report
    from .weyl import DPoly, dn_build, formal_adjoint, indicial_at_zero, weyl_apply

    fx = golden(N, d)
    L = fx.operator
    checks: dict[str, dict] = {}

    rep = recover_report(N, d, fx.c0, terms)
    ok = rep["matrix"] == fx.matrix
    checks["recover"] = {"ok": ok}
    if not ok:
        checks["recover"]["got"] = rep["matrix"].rows()
        checks["recover"]["want"] = fx.matrix.rows()

    built = dn_build(fx.matrix)
    checks["dn_build"] = {"ok": built == L}
    if built != L:
        checks["dn_build"].update(got=str(built), want=str(L))

    eta = eta_product_check(N, d, fx.c0, terms)
    checks["eta_product"] = {"ok": eta["ok"], "terms": eta["terms"]}
    if not eta["ok"]:
        checks["eta_product"]["mismatches"] = eta["mismatches"][:10]

    ind = indicial_at_zero(L)
    checks["mum"] = {"ok": ind == DPoly([0, 0, 0, 1]), "indicial": str(ind)}

    adj = formal_adjoint(L)
    checks["adjoint"] = {"ok": adj == -L}

    res = weyl_apply(L, phi_in_t(N, d, fx.c0, terms))
    checks["annihilation"] = {"ok": res.is_zero(), "terms": res.prec}

    return {
        "pair": [N, d],
        "ok": all(c["ok"] for c in checks.values()),
        "checks": checks,
    }


def _verify_table(obj) -> str:
    names = list(obj["results"][0]["checks"]) if obj["results"] else []
    rows = [["pair", *names]]
    for r in obj["results"]:
        rows.append(
            [f"({r['pair'][0]},{r['pair'][1]})"]
            + ["ok" if r["checks"][n]["ok"] else "FAIL" for n in names]
        )
    return _align(rows) + f"{obj['passed']}/{obj['total']} pass\n"


def cmd_verify(args) -> int:
    from .fixtures import golden, golden_pairs

    if args.all:
        pairs = golden_pairs()
    else:
        golden(*args.pair)  # fail fast on unknown pairs
        pairs = [args.pair]
    results = _pmap(verify_pair, [(N, d, args.terms) for N, d in pairs], args.jobs)
    results.sort(key=lambda r: tuple(r["pair"]))
    passed = sum(r["ok"] for r in results)
    obj = {"terms": args.terms, "passed": passed, "total": len(results), "results": results}
    _emit(obj, args.format, _verify_table)
    return 0 if passed == len(results) else 1


# ---------------------------------------------------------------------------
# recover / dn


def cmd_recover(args) -> int:
    from .fixtures import default_c0
    from .pfit import recover_report

    N, d = args.pair
    c0 = rat(args.c0) if args.c0 is not None else default_c0(N)
    rep = recover_report(N, d, c0, args.terms)
    obj = {
        "pair": [N, d],
        "c0": rat_str(rep["c0"]),
        "matrix": rep["matrix"].to_json(),
        "operator": str(rep["operator"]),
        "residuals": "all-zero",
    }

    def table(o):
        head = f"({N},{d})  c0 = {o['c0']}\n"
        return head + _align(_matrix_rows(rep["matrix"])) + f"L = {o['operator']}\n"

    _emit(obj, args.format, table)
    return 0


def cmd_dn(args) -> int:
    from .fixtures import golden
    from .weyl import DNMatrix, dn_build

    if args.matrix is not None:
        A = DNMatrix.from_json(json.loads(Path(args.matrix).read_text()))
    else:
        A = golden(*args.pair).matrix
    L = dn_build(A)
    _emit({"operator": str(L)}, args.format, lambda o: o["operator"] + "\n")
    return 0


# ---------------------------------------------------------------------------
# qexp


def _qexp(obj_name: str, N: int, d: int, c0, terms: int):
    from . import modular as mod
    from .fixtures import default_c0, golden, uniformizer_spec

    if obj_name == "uniformizer":
        return mod.uniformizer_inv(uniformizer_spec(N), terms, c0 if c0 is not None else None)
    golden(N, d)
    if c0 is None:
        c0 = default_c0(N)
    if obj_name == "t":
        return mod.t_of_Q(N, d, c0, terms)
    if obj_name == "Q":
        return mod.Q_of_t(N, d, c0, terms)
    if obj_name == "phi":
        return mod.phi(N, d, terms)
    if obj_name == "phi_t":
        return mod.phi_in_t(N, d, c0, terms)
    if obj_name == "I":
        return mod.i_function(N, d, c0, terms)
    return mod.eta_product(N, d, terms)


def cmd_qexp(args) -> int:
    N, d = args.pair
    s = _qexp(args.object, N, d, rat(args.c0) if args.c0 is not None else None, args.terms)
    obj = {"object": args.object, "pair": [N, d], "series": s.to_json()}

    def table(o):
        ser = o["series"]
        off = Fraction(ser.get("offset", "0"))
        rows = [["exponent", "coefficient"]]
        rows += [[rat_str(off + n), c] for n, c in enumerate(ser["coeffs"])]
        return _align(rows)

    _emit(obj, args.format, table)
    return 0


# ---------------------------------------------------------------------------
# classify


def cmd_classify(args) -> int:
    from .classify import invariants, necessary_pairs, pass_filter

    pairs = sorted(necessary_pairs(args.nmax, args.dmax), key=lambda p: (p[1], p[0]))
    obj: dict = {"nmax": args.nmax, "dmax": args.dmax, "count": len(pairs), "pairs": pairs}
    if args.explain:
        rep = {}
        for N, d in args.explain:
            inv = invariants(N)
            res = pass_filter(N, d) if N >= 2 else None
            rep[f"{N},{d}"] = {
                "g": inv.g,
                "nu2": inv.nu2,
                "nu3": inv.nu3,
                "nu_inf": inv.nu_inf,
                "passed": bool(res) if res is not None else (N, d) in pairs,
                "reasons": list(res.reasons) if res is not None else [],
            }
        obj["explain"] = rep

    def table(o):
        out = _align([["N", "d"]] + [[str(N), str(d)] for N, d in o["pairs"]])
        out += f"{o['count']} pairs\n"
        for key, r in o.get("explain", {}).items():
            verdict = "pass" if r["passed"] else "reject: " + "; ".join(r["reasons"])
            out += f"({key}) g={r['g']} nu2={r['nu2']} nu3={r['nu3']} nu_inf={r['nu_inf']}  {verdict}\n"
        return out

    _emit(obj, args.format, table)
    return 0


# ---------------------------------------------------------------------------
# nilpotence


def _nilpotence_one(label, op_json, lo: int, hi: int) -> dict:
    from .curvature import nilpotence_report, primes_between
    from .weyl import WeylOp

    L = WeylOp.from_json(op_json)
    rep = nilpotence_report(L, primes_between(lo, hi))
    out = {"operator": str(L), "primes": {str(p): v for p, v in rep["primes"].items()}}
    if rep["bad_reasons"]:
        out["bad_reasons"] = {str(p): r for p, r in rep["bad_reasons"].items()}
    out["verdict"] = rep["verdict"]
    if label is not None:
        out = {"pair": list(label), **out}
    return out


def _nilpotence_table(o) -> str:
    reports = o["reports"] if "reports" in o else [o]
    out = ""
    for r in reports:
        tag = f"({r['pair'][0]},{r['pair'][1]}) " if "pair" in r else ""
        bad = [p for p, v in r["primes"].items() if v != "nilpotent"]
        detail = ", ".join(f"{p}:{r['primes'][p]}" for p in bad) or "all nilpotent"
        out += f"{tag}{r['verdict']}  [{detail}]\n"
    return out


def cmd_nilpotence(args) -> int:
    from .curvature import irregular_control_operator
    from .fixtures import golden, load_golden
    from .weyl import WeylOp

    lo, hi = args.primes
    if args.all:
        jobs = [(fx.pair, fx.operator.to_json(), lo, hi) for fx in load_golden()]
        reports = sorted(_pmap(_nilpotence_one, jobs, args.jobs), key=lambda r: tuple(r["pair"]))
        obj: dict = {"reports": reports}
    else:
        if args.pair is not None:
            L, label = golden(*args.pair).operator, args.pair
        elif args.operator is not None:
            L, label = WeylOp.from_json(json.loads(Path(args.operator).read_text())), None
        else:
            L, label = irregular_control_operator(), None
        obj = _nilpotence_one(label, L.to_json(), lo, hi)
    _emit(obj, args.format, _nilpotence_table)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--terms", type=_positive, default=DEFAULT_PREC, help="series precision")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes")

    ap = argparse.ArgumentParser(prog="dneq", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check tabulated pairs end to end")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--all", action="store_true")
    g.add_argument("--pair", type=_pair)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("recover", parents=[common], help="fit the operator and read off the matrix")
    p.add_argument("--pair", type=_pair, required=True)
    p.add_argument("--c0", help="uniformizer constant term (default: tabulated)")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("dn", parents=[common], help="build the DN operator of a matrix")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--matrix", help='matrix JSON file, e.g. {"N": 3, "a": {"00": "24"}}')
    g.add_argument("--pair", type=_pair, help="use a tabulated matrix")
    p.set_defaults(func=cmd_dn)

    p = sub.add_parser("qexp", parents=[common], help="print a q-expansion")
    p.add_argument("--object", choices=QEXP_OBJECTS, required=True)
    p.add_argument("--pair", type=_pair, required=True)
    p.add_argument("--c0")
    p.set_defaults(func=cmd_qexp)

    p = sub.add_parser("classify", parents=[common], help="pairs passing the necessary conditions")
    p.add_argument("--nmax", type=_positive, default=200)
    p.add_argument("--dmax", type=_positive, default=6)
    p.add_argument("--explain", type=_pair, action="append", metavar="N,d")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("nilpotence", parents=[common], help="p-curvature nilpotence screen")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--all", action="store_true")
    g.add_argument("--pair", type=_pair)
    g.add_argument("--operator", help="operator JSON file")
    g.add_argument("--control", action="store_true", help="the irregular operator D - t")
    p.add_argument("--primes", type=_prime_window, default=(5, 43), metavar="LO-HI")
    p.set_defaults(func=cmd_nilpotence)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as e:  # reported, not traced
        name = type(e).__name__
        sys.stderr.write(f"error: {name}: {e}\n")
        residuals = getattr(e, "residuals", None)
        if residuals:
            sys.stderr.write(json.dumps({"error": name, "residuals": residuals}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
