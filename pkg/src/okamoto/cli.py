"""Command-line front end: ``okamoto <command> ...`` prints a JSON envelope.

Rationals are accepted as ``p/q``, integers or decimals; decimals are read
exactly (``0.55`` is 11/20) and the conversion is noted in ``warnings``.
A point ``--x`` containing ``(`` is a ternary digit string such as
``0.0220(2000202)``; ``--ternary`` forces that reading for strings like
``0.1``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import beta as B
from . import classifier as C
from . import dimension as D
from . import numerics as N
from . import selfaffine as S
from . import ternary as T
from .errors import OkamotoError, ParseError, ResourceError

# every library operation is reachable from exactly one subcommand
REGISTRY: dict[str, tuple[str, ...]] = {
    "eval": (
        "ternary.expand",
        "ternary.parse_digits",
        "ternary.ones_count_prefix",
        "ternary.total_ones",
        "ternary.run_length",
        "ternary.digit_one_frequency",
        "ternary.in_cantor",
        "selfaffine.fn_eval",
        "selfaffine.fn_slope_right",
        "selfaffine.evaluate",
    ),
    "graph": ("selfaffine.sample_graph",),
    "classify": (
        "classifier.classify",
        "classifier.side_condition",
        "classifier.endpoint_behavior",
        "classifier.dinf_membership_regime",
    ),
    "critical": ("classifier.critical_parameter",),
    "constants": (
        "numerics.constants",
        "numerics.bisect",
        "beta.komornik_loreti",
        "beta.a_hat_n",
        "beta.multinacci",
    ),
    "dim": (
        "dimension.phi",
        "dimension.entropy_h",
        "dimension.d_of_a",
        "dimension.dim_frequency_set",
        "dimension.dim_D0",
        "dimension.dim_Dinf_closed",
        "dimension.dim_Dinf_bounds",
        "dimension.dim_N",
        "dimension.box_dimension_graph",
        "dimension.count_admissible_words",
    ),
    "beta": (
        "beta.pi_lambda",
        "beta.greedy_expansion_of_one",
        "beta.is_unique_expansion",
        "beta.thue_morse",
        "beta.countable_regime_tails",
    ),
}

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_RESOURCE = 0, 2, 3, 4


class UsageError(OkamotoError):
    code = "usage_error"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- input parsing ----------------------------------------------------------


class Inputs:
    """Collects normalized inputs and conversion warnings for the envelope."""

    def __init__(self):
        self.values: dict = {}
        self.warnings: list[str] = []

    def rational(self, name: str, text: str) -> Fraction:
        s = text.strip()
        try:
            value = Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"--{name}: cannot read {text!r} as a rational", text) from None
        if "/" not in s and not s.lstrip("+-").isdigit():
            self.warnings.append(f"{name}: decimal {s} read exactly as {value}")
        self.values[name] = str(value)
        return value

    def point(self, name: str, text: str, ternary: bool = False) -> T.EventuallyPeriodicTernary:
        s = text.strip()
        if ternary or "(" in s:
            t = T.parse_digits(s)
        else:
            t = T.expand(self.rational(name, s))
        self.values[name] = T.format_digits(t)
        self.values[f"{name}_value"] = str(t.value)
        return t

    def lam(self, name: str, text: str):
        """A base parameter: rational, or ``rho`` / ``a<k>`` for exact multinacci numbers."""
        s = text.strip().lower()
        if s == "rho":
            self.values[name] = "rho"
            return B.multinacci_real(2)
        if s.startswith("a") and s[1:].isdigit() and int(s[1:]) >= 2:
            self.values[name] = s
            return B.multinacci_real(int(s[1:]))
        return self.rational(name, text)


def _fmt(v):
    if isinstance(v, Fraction):
        return str(v)
    if v == math.inf:
        return "inf"
    return v


# -- subcommands ------------------------------------------------------------


def cmd_eval(args, inp: Inputs):
    a = inp.rational("a", args.a)
    t = inp.point("x", args.x, args.ternary)
    if args.tol is not None:
        tol = inp.rational("tol", args.tol)
        value = S.evaluate(a, t, tol=tol)
        mode = "approx"
    else:
        value = S.evaluate(a, t)
        mode = "exact"
    n = args.depth or 0
    out = {
        "x": T.format_digits(t),
        "x_value": str(t.value),
        "a": str(a),
        "mode": mode,
        "value": str(value),
        "value_float": float(value),
        "digits": {
            "total_ones": _fmt(t.total_ones()),
            "digit_one_frequency": str(t.digit_one_frequency()),
            "in_cantor": t.in_cantor(),
            "run_length_0": _fmt(t.run_length(n, 0)),
            "run_length_2": _fmt(t.run_length(n, 2)),
        },
    }
    if args.depth is not None:
        inp.values["depth"] = n
        out["depth"] = n
        out["fn"] = str(S.fn_eval(a, n, t.value))
        out["digits"]["ones_count_prefix"] = t.ones_count_prefix(n)
        if t.value < 1:
            out["fn_slope_right"] = str(S.fn_slope_right(a, n, t))
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "a", "value"])
        w.writerow([str(t.value), str(a), str(value)])
        return buf.getvalue()
    return out


def cmd_graph(args, inp: Inputs):
    a = inp.rational("a", args.a)
    inp.values["depth"] = args.depth
    g = S.sample_graph(a, args.depth)
    exact = not args.decimal
    text = g.to_json(exact) if args.json else g.to_csv(exact)
    fmt = "json" if args.json else "csv"
    if args.out == "-":
        return text
    Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
    inp.values["out"] = args.out
    return {"path": args.out, "format": fmt, "depth": g.depth, "points": len(g.points)}


def cmd_classify(args, inp: Inputs):
    a = inp.rational("a", args.a)
    eps = 1e-12
    if args.eps is not None:
        eps = float(inp.rational("eps", args.eps))
    t = inp.point("x", args.x, args.ternary)
    return C.classification_report(S.Param(a, eps), t)


def cmd_critical(args, inp: Inputs):
    t = inp.point("x", args.x, args.ternary)
    tol = inp.rational("tol", args.tol) if args.tol else N.DEFAULT_TOL
    return C.critical_parameter(t, tol).to_dict()


def cmd_constants(args, inp: Inputs):
    tol = inp.rational("tol", args.tol) if args.tol else N.DEFAULT_TOL
    if args.poly is not None:
        coeffs = [Fraction(c) for c in args.poly.split(",")]
        lo, hi = (Fraction(v) for v in args.interval.split(":"))
        inp.values.update(poly=args.poly, interval=args.interval)
        poly = N.Polynomial(coeffs)
        return {"polynomial": poly.format(), "bracket": N.bisect(poly, lo, hi, tol).to_dict()}
    if args.a_hat_n is not None:
        inp.values["a_hat_n"] = args.a_hat_n
        return {f"a_hat_{args.a_hat_n}": B.a_hat_n(args.a_hat_n, tol).to_dict()}
    if args.multinacci is not None:
        k = args.multinacci
        inp.values["multinacci"] = k
        v = B.multinacci(k, tol)
        return {f"a_{k}": {"exact": "1"} if k == 1 else v.to_dict()}
    table = {name: b.to_dict() for name, b in N.constants(tol).items()}
    table["a_hat"] = B.komornik_loreti(tol).to_dict()
    table["a_1"] = {"exact": "1"}
    table["rho"]["exact"] = "(sqrt(5)-1)/2"
    return table


_SETS = ("D0", "Dinf", "N", "graph-box", "phi", "h", "d", "freq", "words")


def _dim_value(kind: str, a, args) -> dict:
    if kind == "D0":
        v = D.dim_D0(a)
        return {"lower": v, "upper": v, "point": v, "method": "ClosedForm"}
    if kind == "N":
        v = D.dim_N(a)
        return {"lower": v, "upper": v, "point": v, "method": "ClosedForm"}
    if kind == "graph-box":
        v = D.box_dimension_graph(a)
        return {"lower": v, "upper": v, "point": v, "method": "ClosedForm"}
    if kind == "Dinf":
        if a <= Fraction(1, 2):
            v = D.dim_Dinf_closed(a)
            return {"lower": v, "upper": v, "point": v, "method": "ClosedForm"}
        return D.dim_Dinf(a, args.entropy_depth).to_dict()
    if kind == "phi":
        return {"value": D.phi(a)}
    if kind == "d":
        return {"value": D.d_of_a(a)}
    raise AssertionError(kind)


def cmd_dim(args, inp: Inputs):
    kind = args.set
    inp.values["set"] = kind
    if kind in ("h", "freq"):
        if args.p is None:
            raise UsageError(f"--set {kind} needs --p")
        p = inp.rational("p", args.p)
        if kind == "h":
            return {"p": str(p), "set": kind, "value": D.entropy_h(p)}
        inp.values["family"] = args.family
        return {"p": str(p), "set": kind, "family": args.family,
                "value": D.dim_frequency_set(p, args.family)}
    if args.sweep is not None:
        parts = args.sweep.split(":")
        if len(parts) != 3:
            raise UsageError("--sweep expects lo:hi:step")
        lo, hi, step = (inp.rational(k, v) for k, v in zip(("lo", "hi", "step"), parts))
        if step <= 0:
            raise UsageError("--sweep step must be positive")
        if (hi - lo) / step > 100000:
            raise ResourceError("sweep has more than 100000 points")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["a", "value", "lower", "upper"])
        a = lo
        while a <= hi:
            try:
                r = _dim_value(kind, a, args)
                val = r.get("point", r.get("value"))
                w.writerow([str(a), repr(val), repr(r.get("lower", val)), repr(r.get("upper", val))])
            except OkamotoError:
                w.writerow([str(a), "", "", ""])
            a += step
        return buf.getvalue()
    if args.a is None:
        raise UsageError(f"--set {kind} needs --a or --sweep")
    a = inp.rational("a", args.a)
    if kind == "words":
        if args.n is None:
            raise UsageError("--set words needs --n")
        inp.values["n"] = args.n
        return {"a": str(a), "set": kind, "n": args.n,
                "count": D.count_admissible_words(a, args.n)}
    return {"a": str(a), "set": kind, **_dim_value(kind, a, args)}


def cmd_beta(args, inp: Inputs):
    op = args.op
    inp.values["op"] = op
    if op == "thue-morse":
        inp.values["n"] = args.n
        return {"n": args.n, "word": "".join(map(str, B.thue_morse(args.n)))}
    if op == "greedy-one":
        lam = inp.lam("a", args.a)
        inp.values["depth"] = args.depth
        e = B.greedy_expansion_of_one(lam, args.depth)
        out = e.to_dict()
        out["self_admissible"] = B.is_self_admissible(e)
        return out
    if op == "unique":
        lam = inp.lam("lambda", args.lam)
        w = B.BinaryEPSeq.parse(args.omega)
        inp.values["omega"] = str(w)
        return {"omega": str(w), **B.is_unique_expansion(lam, w, args.depth).to_dict()}
    if op == "pi":
        lam = inp.lam("lambda", args.lam)
        w = B.BinaryEPSeq.parse(args.omega)
        inp.values["omega"] = str(w)
        v = B.pi_lambda(lam, w)
        return {"omega": str(w), "value": str(v) if isinstance(v, Fraction) else None,
                "value_float": float(v)}
    if op == "tails":
        a = inp.rational("a", args.a)
        tails = B.countable_regime_tails(a)
        return {"a": str(a),
                "tails": [{"binary": str(s), "ternary": T.format_digits(s.to_ternary())} for s in tails]}
    raise AssertionError(op)


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--no-timing", action="store_true", help="omit timing from the envelope")

    p = _Parser(prog="okamoto", description="Okamoto's self-affine functions: evaluation, "
                "derivative classification, beta-expansions and dimension formulas.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", parents=[common], help="F_a(x) and digit statistics of x")
    e.add_argument("--a", required=True)
    e.add_argument("--x", required=True)
    e.add_argument("--ternary", action="store_true", help="read --x as a ternary digit string")
    mode = e.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact value (default)")
    mode.add_argument("--tol")
    e.add_argument("--depth", type=int, help="also report f_n, its right slope and i(n)")
    fmt = e.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    e.set_defaults(func=cmd_eval)

    g = sub.add_parser("graph", parents=[common], help="breakpoints of the approximant f_n")
    g.add_argument("--a", required=True)
    g.add_argument("--depth", type=int, required=True)
    g.add_argument("--out", required=True, help="output path, or - for stdout")
    fmt = g.add_mutually_exclusive_group()
    fmt.add_argument("--csv", action="store_true")
    fmt.add_argument("--json", action="store_true")
    g.add_argument("--decimal", action="store_true", help="decimal instead of exact coordinates")
    g.set_defaults(func=cmd_graph)

    c = sub.add_parser("classify", parents=[common], help="classify F_a'(x)")
    c.add_argument("--a", required=True)
    c.add_argument("--x", required=True)
    c.add_argument("--ternary", action="store_true")
    c.add_argument("--eps")
    c.set_defaults(func=cmd_classify)

    k = sub.add_parser("critical", parents=[common], help="critical parameter a*(x)")
    k.add_argument("--x", required=True)
    k.add_argument("--ternary", action="store_true")
    k.add_argument("--tol")
    k.set_defaults(func=cmd_critical)

    t = sub.add_parser("constants", parents=[common], help="bracketed constants")
    t.add_argument("--tol")
    t.add_argument("--a-hat-n", type=int)
    t.add_argument("--multinacci", type=int)
    t.add_argument("--poly", help="increasing polynomial coefficients c0,c1,... to bisect")
    t.add_argument("--interval", default="0:1", help="lo:hi for --poly")
    t.set_defaults(func=cmd_constants)

    d = sub.add_parser("dim", parents=[common], help="dimension formulas and bounds")
    d.add_argument("--set", required=True, choices=_SETS)
    d.add_argument("--a")
    d.add_argument("--p")
    d.add_argument("--family", default="S_p&S^p", choices=[f.value for f in D.Family])
    d.add_argument("--n", type=int, help="word length for --set words")
    d.add_argument("--sweep", help="lo:hi:step, emits CSV")
    d.add_argument("--entropy-depth", type=int, default=D.WORD_CAP)
    d.set_defaults(func=cmd_dim)

    b = sub.add_parser("beta", parents=[common], help="beta-expansion tools")
    bsub = b.add_subparsers(dest="op", required=True, parser_class=_Parser)
    x = bsub.add_parser("greedy-one", parents=[common])
    x.add_argument("--a", required=True, help="rational, rho, or a<k>")
    x.add_argument("--depth", type=int, default=64)
    x = bsub.add_parser("unique", parents=[common])
    x.add_argument("--lambda", dest="lam", required=True)
    x.add_argument("--omega", required=True)
    x.add_argument("--depth", type=int, default=B.DEFAULT_COMPARE_DEPTH)
    x = bsub.add_parser("pi", parents=[common])
    x.add_argument("--lambda", dest="lam", required=True)
    x.add_argument("--omega", required=True)
    x = bsub.add_parser("thue-morse", parents=[common])
    x.add_argument("--n", type=int, required=True)
    x = bsub.add_parser("tails", parents=[common])
    x.add_argument("--a", required=True)
    b.set_defaults(func=cmd_beta)
    return p


def _exit_code(err: OkamotoError) -> int:
    if isinstance(err, (UsageError, ParseError)):
        return EXIT_USAGE
    if isinstance(err, ResourceError):
        return EXIT_RESOURCE
    return EXIT_DOMAIN


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    command = argv[0] if argv else None
    try:
        args = build_parser().parse_args(argv)
        command = args.command if args.command != "beta" else f"beta {args.op}"
        inp = Inputs()
        start = time.perf_counter()
        result = args.func(args, inp)
        elapsed = time.perf_counter() - start
    except OkamotoError as err:
        payload = {"error": {"code": err.code, "message": str(err), "command": command}}
        stderr.write(json.dumps(payload) + "\n")
        return _exit_code(err)
    if isinstance(result, str):
        stdout.write(result)
        for w in inp.warnings:
            stderr.write(json.dumps({"warning": w}) + "\n")
        return EXIT_OK
    env = {"command": command, "inputs": inp.values, "result": result, "version": __version__}
    if inp.warnings:
        env["warnings"] = inp.warnings
    if not args.no_timing:
        env["timing"] = {"seconds": round(elapsed, 6)}
    stdout.write(json.dumps(env, indent=2) + "\n")
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
