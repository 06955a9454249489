"""Command-line front end.

Every command writes JSON (one object, or one object per line for lists) or
CSV.  Errors are reported as a single JSON object ``{kind, message, context}``
on standard output with exit status 1, or 2 for bound violations.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence, TextIO

from . import config
from .arith.curve import EllipticCurve, curve_create
from .arith.field import field_create, parse_element
from .errors import IsoPowerError, OwnerNotAbove, UsageError


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message, prog=self.prog)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bound-q", type=int, default=None, help="largest field order enumerated")
    p.add_argument("--bound-ext", type=int, default=None, help="largest extension degree")
    p.add_argument("--bound-disc", type=int, default=None, help="largest |D| for class groups")
    p.add_argument("--format", choices=("json", "csv"), default=None)


def _add_curve(p: argparse.ArgumentParser, required: bool = True) -> None:
    nargs = None if required else "?"
    p.add_argument("p", type=int, nargs=nargs, help="characteristic")
    p.add_argument("m", type=int, nargs=nargs, help="extension degree")
    p.add_argument("coeffs", nargs="*" if not required else 5, metavar="a",
                   help="a1 a2 a3 a4 a6; each an integer or a comma list of coefficients")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="isopower", description="Abelian varieties isogenous to powers of an elliptic curve.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("classify-curve", help="decide whether the module functor is an equivalence")
    _add_curve(p)
    _add_common(p)

    p = sub.add_parser("decide", help="verdict with evidence, optionally the image description")
    _add_curve(p)
    p.add_argument("--image", action="store_true")
    p.add_argument("--max-rank", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("enumerate-modules", help="normal forms of modules of rank n")
    p.add_argument("D", type=int)
    p.add_argument("n", type=int)
    _add_common(p)

    p = sub.add_parser("kernel-test", help="kernel-subgroup test for subgroup data read from stdin")
    _add_curve(p, required=False)
    _add_common(p)

    p = sub.add_parser("maximal-scan", help="scan curves over F_{p^2} with N = (p+1)^2")
    p.add_argument("p", type=int)
    p.add_argument("--minimal", action="store_true")
    p.add_argument("--g", type=int, default=3)
    p.add_argument("--sample", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("functor-eval", help="point counts and torsion of HOM_R(M, E)")
    _add_curve(p)
    p.add_argument("--module", required=True, help='{"conductors": [...], "steinitz": [a, b, c]}')
    p.add_argument("--order", type=int, default=None, help="discriminant of R (default: End E)")
    p.add_argument("--m", dest="ms", default="1,2,3", help="comma list of extension degrees")
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--e", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("oracle-compare", help="kernel-subgroup oracle against the commutant criterion")
    _add_curve(p)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--r", type=int, default=1)
    _add_common(p)
    return parser


def parse_curve(p: int, m: int, coeffs: Sequence[str]) -> EllipticCurve:
    if len(coeffs) != 5:
        raise UsageError("a curve needs the five coefficients a1 a2 a3 a4 a6", got=len(coeffs))
    F = field_create(p, m)
    try:
        vals = [parse_element(F, c) for c in coeffs]
    except ValueError as exc:
        raise UsageError("cannot read a field element", error=str(exc)) from None
    return curve_create(F, *vals)


# ---------------------------------------------------------------------------
# commands; each returns a list of JSON-ready records and whether it is a stream

def _cmd_classify(ns, stdin) -> tuple[list, bool]:
    from .decide import decide_equivalence

    return [decide_equivalence(parse_curve(ns.p, ns.m, ns.coeffs)).to_json()], False


def _cmd_decide(ns, stdin) -> tuple[list, bool]:
    from .decide import decide_equivalence, describe_image

    E = parse_curve(ns.p, ns.m, ns.coeffs)
    out = decide_equivalence(E).to_json()
    if ns.image:
        out["image"] = describe_image(E, ns.max_rank)["ranks"]
    return [out], False


def _cmd_enumerate(ns, stdin) -> tuple[list, bool]:
    from .modules import enumerate_modules
    from .orders import order_from_disc

    if ns.n < 1:
        raise UsageError("rank must be positive", n=ns.n)
    return [nf.to_json() for nf in enumerate_modules(order_from_disc(ns.D), ns.n)], True


def _cmd_kernel_test(ns, stdin) -> tuple[list, bool]:
    from .kernels import SubgroupData, commutant, is_kernel_subgroup_for

    try:
        obj = json.loads(stdin.read())
    except json.JSONDecodeError as exc:
        raise UsageError("input is not JSON", error=str(exc)) from None
    if not isinstance(obj, dict):
        raise UsageError("input must be a JSON object")
    if ns.p is not None:
        E = parse_curve(ns.p, ns.m, ns.coeffs)
    elif isinstance(obj.get("curve"), dict):
        c = obj["curve"]
        E = parse_curve(int(c["p"]), int(c["m"]), [str(v) if not isinstance(v, list) else ",".join(map(str, v))
                                                  for v in c["a"]])
    else:
        raise UsageError("no curve given on the command line or in the input")
    data = SubgroupData.from_json(obj)
    C = commutant(E, data.ell, data.e)
    G = data.subgroup()
    return [{"subgroup": data.to_json(), "order": len(G), "commutant": C.to_json(),
             "kernel": is_kernel_subgroup_for(C, G)}], False


def _cmd_maximal_scan(ns, stdin) -> tuple[list, bool]:
    from .decide import maximal_scan

    rep = maximal_scan(ns.p, minimal=ns.minimal, g_max=ns.g, sample=ns.sample)
    rows = [dict(kind="class", mode=rep["mode"], p=rep["p"], q=rep["q"], **c) for c in rep["classes"]]
    rows.append({"kind": "summary", "mode": rep["mode"], "p": rep["p"], "q": rep["q"],
                 "scanned": rep["scanned"], "found": len(rep["curves"]),
                 "products": len(rep["products"]), "ok": rep["ok"]})
    return rows, True


def _cmd_functor_eval(ns, stdin) -> tuple[list, bool]:
    from .decide import end_order
    from .functor import VarietyModel, hom_point_count_report, hom_torsion
    from .modules import ModuleNF, module_from_nf
    from .orders import order_from_disc

    E = parse_curve(ns.p, ns.m, ns.coeffs)
    try:
        nf = ModuleNF.from_json(json.loads(ns.module))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError("cannot read the module", error=str(exc)) from None
    R = order_from_disc(ns.order) if ns.order is not None else end_order(E)
    if any(R.f % c for c in nf.conductors):
        raise OwnerNotAbove("conductors must divide the conductor of the base order",
                            conductors=list(nf.conductors), f=R.f)
    M = module_from_nf(R, nf)
    try:
        ms = [int(x) for x in ns.ms.split(",") if x.strip()]
    except ValueError:
        raise UsageError("--m must be a comma list of integers") from None
    model = VarietyModel(E, M)
    reports = [hom_point_count_report(M, E, k) for k in ms]
    out = model.report(ms=[])
    out["base"] = R.D
    out["counts"] = [{"m": r.m, "count": r.count, "charpoly_route": r.charpoly_route,
                      "saturated": r.saturated} for r in reports]
    if ns.l is not None:
        out["torsion"] = hom_torsion(M, E, ns.l, ns.e).to_json()
    return [out], False


def _cmd_oracle_compare(ns, stdin) -> tuple[list, bool]:
    from .kernels import oracle_compare

    E = parse_curve(ns.p, ns.m, ns.coeffs)
    return [oracle_compare(E, ns.l, ns.e, ns.r).to_json()], False


_COMMANDS = {
    "classify-curve": _cmd_classify,
    "decide": _cmd_decide,
    "enumerate-modules": _cmd_enumerate,
    "kernel-test": _cmd_kernel_test,
    "maximal-scan": _cmd_maximal_scan,
    "functor-eval": _cmd_functor_eval,
    "oracle-compare": _cmd_oracle_compare,
}


# ---------------------------------------------------------------------------
# output

def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_records(records: list, stream: bool, fmt: str, out: TextIO) -> None:
    if fmt == "csv":
        keys = sorted({k for r in records for k in r})
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        for r in records:
            w.writerow([_dumps(r[k]) if isinstance(r.get(k), (list, dict)) else r.get(k, "") for k in keys])
        out.write(buf.getvalue())
        return
    if stream:
        for r in records:
            out.write(_dumps(r) + "\n")
    else:
        out.write(_dumps(records[0]) + "\n")


def run(command: str, args: Sequence[str], cfg: Optional[config.Config] = None,
        stdin: Optional[TextIO] = None, stdout: Optional[TextIO] = None) -> int:
    """Run one subcommand; returns the exit status."""
    return main([command, *args], cfg=cfg, stdin=stdin, stdout=stdout)


def main(argv: Optional[Sequence[str]] = None, cfg: Optional[config.Config] = None,
         stdin: Optional[TextIO] = None, stdout: Optional[TextIO] = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = build_parser().parse_args(argv)
        if ns.command is None:
            raise UsageError("no command given", commands=sorted(_COMMANDS))
        base = cfg or config.from_environment()
        active = base.replace(bound_q=ns.bound_q, bound_ext=ns.bound_ext,
                              bound_disc=ns.bound_disc, format=ns.format)
        with config.using(active):
            records, stream = _COMMANDS[ns.command](ns, stdin)
            write_records(records, stream, active.format, stdout)
        return 0
    except IsoPowerError as err:
        stdout.write(_dumps(err.to_json()) + "\n")
        return err.exit_code


def console() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console()
