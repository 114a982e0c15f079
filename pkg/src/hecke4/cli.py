"""Command-line interface: `hecke4 <command> ...` prints a JSON (or CSV) report."""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import os
import re
import sys
import time
from fractions import Fraction

from . import acceptance
from .circle import CirclePointQ, circle_lagrange_estimate, lagrange_estimate, pythagoras_tree, romik_orbit, stereo
from .gaps import M0, gap_certify
from .hallray import hall_construct, hall_lagrange_construct
from .hausdim import dim_lower_bound, moment_residual
from .qfield import INF, SQRT2, AlgSum, DyadicInterval, QSqrt2, _lift, minimal_polynomial, sqrt, to_decimal, to_json
from .romik import BiSection, EvPeriodicWord, eval_word, expand, to_word
from .spectra import (
    SplicedBiWord,
    lagrange_ev_periodic,
    markoff_periodic_argmax,
    markoff_spliced,
    section_pair_value,
    section_value,
)
from .triples import discrete_spectrum, enumerate_triples, n2_m2_sets

SCHEMA = "hecke4.report/1"
PRECISION_ENV = "HECKE4_PRECISION"
DEFAULT_PRECISION = 30


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# numeric input


_NAMES = {"sqrt2": SQRT2, "m0": M0}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise UsageError(f"only integer literals are allowed, got {node.value!r}")
        return QSqrt2(node.value)
    if isinstance(node, ast.Name):
        if node.id not in _NAMES:
            raise UsageError(f"unknown name {node.id!r} (known: {', '.join(_NAMES)})")
        return _NAMES[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        left, right = _eval_node(node.left), _eval_node(node.right)
        op = node.op
        if isinstance(op, ast.Add):
            return left + right
        if isinstance(op, ast.Sub):
            return left - right
        if isinstance(op, ast.Mult):
            return left * right
        if isinstance(op, ast.Div):
            if right == 0:
                raise UsageError("division by zero")
            return left / right
        if isinstance(op, ast.Pow):
            if not (isinstance(right, QSqrt2) and right.is_rational and right.a.denominator == 1):
                raise UsageError("exponents must be integers")
            n = int(right.a)
            if abs(n) > 64:
                raise UsageError("exponent too large")
            out = QSqrt2(1)
            for _ in range(abs(n)):
                out = out * left
            return out if n >= 0 else 1 / out
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt":
        if len(node.args) != 1 or node.keywords:
            raise UsageError("sqrt takes one argument")
        return sqrt(_eval_node(node.args[0]))
    raise UsageError(f"unsupported syntax: {ast.dump(node)[:60]}")


def parse_expr(text: str):
    """Exact value of an expression over integers, + - * / **, sqrt(), sqrt2 and m0."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as e:
        raise UsageError(f"malformed expression {text!r}") from e
    try:
        return _eval_node(tree)
    except ValueError as e:
        raise UsageError(str(e)) from e


def parse_rational(text: str) -> Fraction:
    """A positive rational given as an expression (1/10**9) or an exact decimal (1e-9)."""
    try:
        return Fraction(text.strip())
    except ValueError:
        pass
    v = parse_expr(text)
    if not (isinstance(v, QSqrt2) and v.is_rational):
        raise UsageError(f"{text!r} is not rational")
    return v.a


# ---------------------------------------------------------------------------
# report helpers


def _number(v, prec: int) -> dict:
    v = _lift(v)
    return {"exact": to_json(v), "text": str(v), "decimal": to_decimal(v, prec)}


def _interval(iv: DyadicInterval | None, prec: int) -> dict | None:
    if iv is None:
        return None
    return {"lo": str(iv.lo), "hi": str(iv.hi), "lo_decimal": _floor_dec(iv.lo, prec), "hi_decimal": _ceil_dec(iv.hi, prec)}


def _floor_dec(x: Fraction, prec: int) -> str:
    return to_decimal(QSqrt2(Fraction(int((x * 10**prec) // 1), 10**prec)), prec)


def _ceil_dec(x: Fraction, prec: int) -> str:
    return to_decimal(QSqrt2(Fraction(-int((-x * 10**prec) // 1), 10**prec)), prec)


def _minpoly(v) -> list[int] | None:
    try:
        return minimal_polynomial(v)
    except (ArithmeticError, TypeError):
        return None


def _parse_bi_word(text: str):
    text = text.strip()
    m = re.fullmatch(r"\(([123]+)\)([123]*)\(([123]+)\)", text)
    if m:
        return SplicedBiWord(*m.groups())
    m = re.fullmatch(r"\(([123]+)\)", text)
    if m:
        return tuple(map(int, m.group(1)))
    raise UsageError(f"cannot parse bi-infinite word {text!r}; expected '(32)' or '(13)2(31)'")


def _word(text: str) -> EvPeriodicWord:
    try:
        return EvPeriodicWord.parse(text)
    except ValueError as e:
        raise UsageError(str(e)) from e


# ---------------------------------------------------------------------------
# commands; each returns (inputs, results, rows, violations)


def cmd_eval(a, prec):
    w = _word(a.word)
    v = eval_word(w)
    res = {"word": str(w), "value": _number(v, prec), "minimal_polynomial": None if v is INF else _minpoly(v)}
    return {"word": a.word}, res, [{"word": str(w), "value_exact": str(v), "value_decimal": to_decimal(v, prec)}], []


def cmd_expand(a, prec):
    v = parse_expr(a.value)
    digits, rest = expand(v, a.digits)
    res = {"value": _number(v, prec), "digits": "".join(map(str, digits))}
    try:
        res["word"] = str(to_word(v, max_steps=a.max_steps))
    except ArithmeticError:
        res["word"] = None
    res["remainder"] = _number(rest, prec)
    return {"value": a.value, "digits": a.digits}, res, [{"digits": res["digits"], "word": res["word"]}], []


def cmd_markoff(a, prec):
    w = _parse_bi_word(a.word)
    if isinstance(w, SplicedBiWord):
        enc, v = markoff_spliced(w, Fraction(1, 10 ** (prec + 2)))
        res = {"word": str(w), "value": _number(v, prec), "enclosure": _interval(enc, prec)}
    else:
        v, sec = markoff_periodic_argmax(w)
        res = {"word": "(" + "".join(map(str, w)) + ")", "value": _number(v, prec), "section": str(sec)}
    res["minimal_polynomial"] = None if v is INF or isinstance(v, AlgSum) else _minpoly(v)
    row = {"word": res["word"], "value_exact": str(v), "value_decimal": to_decimal(v, prec)}
    return {"word": a.word}, res, [row], []


def cmd_lagrange(a, prec):
    w = _word(a.word)
    v = lagrange_ev_periodic(w)
    res = {"word": str(w), "value": _number(v, prec), "minimal_polynomial": _minpoly(v)}
    return {"word": a.word}, res, [{"word": str(w), "value_exact": str(v), "value_decimal": to_decimal(v, prec)}], []


def cmd_section(a, prec):
    try:
        s = BiSection.parse(a.section)
    except ValueError as e:
        raise UsageError(str(e)) from e
    v, pv = section_value(s), section_pair_value(s)
    res = {"section": str(s), "value": _number(v, prec), "pair_value": _number(pv, prec)}
    return {"section": a.section}, res, [{"section": str(s), "value_decimal": to_decimal(v, prec), "pair_value_decimal": to_decimal(pv, prec)}], []


def cmd_triples(a, prec):
    ts = sorted(enumerate_triples(a.bound), key=lambda t: (t.x, t.y1, t.y2))
    xs, ys = n2_m2_sets(a.bound)
    rows = [{"x": t.x, "y1": t.y1, "y2": t.y2} for t in ts]
    return {"bound": a.bound}, {"count": len(ts), "x_values": xs, "y_values": ys, "triples": rows}, rows, []


def cmd_discrete_spectrum(a, prec):
    vals = discrete_spectrum(a.bound)
    rows = [{"value_exact": str(s.value), "value_decimal": to_decimal(s.value, prec), "source": s.source, "n": s.n} for s in vals]
    res = {"values": [dict(r, exact=to_json(s.value)) for r, s in zip(rows, vals)]}
    return {"bound": a.bound}, res, rows, []


def cmd_gap_check(a, prec):
    lo, hi = parse_expr(a.lo), parse_expr(a.hi)
    rep = gap_certify(lo, hi, a.max_len, jobs=a.jobs)
    viol = [{"word": w, "value": _number(v, prec)} for w, v in rep.violations]
    res = {
        "lo": _number(lo, prec),
        "hi": _number(hi, prec),
        "max_len": a.max_len,
        "words_scanned": rep.words_scanned,
        "words_pruned": rep.words_pruned,
        "violations": viol,
        "endpoint_witnesses": rep.endpoint_witnesses,
        "passed": rep.passed,
    }
    rows = [{"word": w["word"], "value_decimal": w["value"]["decimal"]} for w in viol]
    msgs = [f"M{w['word']} = {w['value']['decimal']} lies inside the interval" for w in viol]
    return {"lo": a.lo, "hi": a.hi, "max_len": a.max_len, "jobs": a.jobs}, res, rows, msgs


def _hall_result(r, prec) -> dict:
    return {
        "n": r.n,
        "P1": str(r.first),
        "P2": str(r.second),
        "T": str(r.word),
        "markoff": _number(r.markoff, prec),
        "enclosure": _interval(r.enclosure, prec),
        "error": _number(r.error, prec),
    }


def cmd_hall(a, prec):
    alpha, eps = parse_expr(a.alpha), parse_rational(a.eps)
    inputs = {"alpha": a.alpha, "eps": a.eps}
    if a.lagrange:
        return _hall_lagrange(alpha, eps, a.depth, inputs, prec)
    r = hall_construct(alpha, eps)
    res = _hall_result(r, prec)
    res["alpha"] = _number(alpha, prec)
    msgs = [] if r.error <= eps else ["construction missed the target"]
    return inputs, res, [{k: res[k] for k in ("n", "P1", "P2", "T")}], msgs


def _hall_lagrange(alpha, eps, depth, inputs, prec):
    r = hall_lagrange_construct(alpha, depth, eps)
    inputs = dict(inputs, depth=depth)
    blocks = ["".join(map(str, b)) for b in r.blocks]
    res = {
        "alpha": _number(alpha, prec),
        "base": _hall_result(r.base, prec),
        "blocks": blocks,
        "enclosures": [_interval(iv, prec) for iv in r.enclosures],
    }
    rows = [{"block": i + 1, "digits": b, "lo": e["lo_decimal"], "hi": e["hi_decimal"]} for i, (b, e) in enumerate(zip(blocks, res["enclosures"]))]
    return inputs, res, rows, []


def cmd_hall_lagrange(a, prec):
    alpha, eps = parse_expr(a.alpha), parse_rational(a.eps)
    return _hall_lagrange(alpha, eps, a.depth, {"alpha": a.alpha, "eps": a.eps}, prec)


def cmd_dim_bound(a, prec):
    eps, tol = parse_rational(a.eps), parse_rational(a.tol)
    enc, spec = dim_lower_bound(eps, tol)
    res = {
        "m": spec.m,
        "c": [_number(c, prec) for c in spec.contractions],
        "s_lo": str(enc.lo),
        "s_hi": str(enc.hi),
        "s_decimal": _interval(enc, prec),
        "residual_at_midpoint": moment_residual(spec, enc.mid()),
    }
    msgs = [] if enc.lo > 0 else ["no positive lower bound"]
    return {"eps": a.eps, "tol": a.tol}, res, [{"m": spec.m, "s_lo": str(enc.lo), "s_hi": str(enc.hi)}], msgs


def _triple(text: str) -> CirclePointQ:
    try:
        a, b, c = (int(x) for x in text.split(","))
        return CirclePointQ(a, b, c)
    except ValueError as e:
        raise UsageError(f"bad triple {text!r}: {e}") from e


def cmd_circle_orbit(a, prec):
    orbit = romik_orbit(_triple(a.triple))
    rows = [{"a": p.a, "b": p.b, "c": p.c, "digit": d} for p, d in orbit]
    digits = "".join(str(r["digit"]) for r in rows[:-1])
    tail = rows[-1]["digit"]
    return {"triple": a.triple}, {"orbit": rows, "word": f"{digits}({tail})"}, rows, []


def cmd_pythagoras_tree(a, prec):
    ts = pythagoras_tree(a.cmax, jobs=a.jobs)
    rows = [{"a": t.a, "b": t.b, "c": t.c} for t in ts]
    return {"cmax": a.cmax, "jobs": a.jobs}, {"count": len(ts), "triples": rows}, rows, []


def _mp_str(v, prec: int) -> str | None:
    import mpmath

    return None if v is None else mpmath.nstr(v, prec)


def cmd_lagrange_est(a, prec):
    t = parse_expr(a.value)
    est = lagrange_estimate(t, a.qmax)
    res = {
        "value": _number(t, prec),
        "estimate": _mp_str(est.value, min(prec, 15)),
        "witness": list(est.witness),
        "window": list(est.window),
        "unbounded": est.unbounded,
        "kind": "finite-window estimate of the limsup",
    }
    if a.hmax:
        c_est = circle_lagrange_estimate(stereo(t), a.hmax) if not est.unbounded else None
        res["circle_estimate_doubled"] = None if c_est is None or c_est.value is None else _mp_str(2 * c_est.value, min(prec, 15))
        res["circle_witness"] = None if c_est is None else list(c_est.witness)
    return {"value": a.value, "qmax": a.qmax, "hmax": a.hmax}, res, [{k: res[k] for k in ("estimate", "unbounded")}], []


def cmd_verify_paper(a, prec):
    ids = [int(x) for x in a.criteria.split(",")] if a.criteria else None
    results = acceptance.run_all(ids, gap_max_len=a.gap_max_len, jobs=a.jobs)
    rows = []
    for r in results:
        bad = [c for c in r.checks if not c.ok]
        rows.append(
            {
                "criterion": r.id,
                "status": r.status,
                "title": r.title,
                "seconds": round(r.seconds, 3),
                "detail": "; ".join(f"{c.status} {c.name}: {c.detail}" for c in bad),
            }
        )
    checks = {
        str(r.id): [{"name": c.name, "status": c.status, "detail": c.detail} for c in r.checks] for r in results
    }
    msgs = [f"criterion {r.id} failed" for r in results if not r.passed]
    return {"criteria": a.criteria, "gap_max_len": a.gap_max_len}, {"table": rows, "checks": checks}, rows, msgs


# ---------------------------------------------------------------------------
# parser


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--precision", type=_positive_int, default=None, help=f"decimal places (default ${PRECISION_ENV} or {DEFAULT_PRECISION})")

    p = argparse.ArgumentParser(prog="hecke4", description="Markoff and Lagrange spectra of the Hecke group H4 via Romik digit expansions.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("eval", cmd_eval, "value [w] of an eventually periodic word, e.g. 3(2)")
    sp.add_argument("--word", required=True)
    sp = add("expand", cmd_expand, "Romik digits of an exact value")
    sp.add_argument("--value", required=True)
    sp.add_argument("--digits", type=_positive_int, default=20)
    sp.add_argument("--max-steps", type=_positive_int, default=2000)
    sp = add("markoff", cmd_markoff, "Markoff value of (cycle) or (left)middle(right)")
    sp.add_argument("--word", required=True)
    sp = add("lagrange", cmd_lagrange, "Lagrange value of an eventually periodic word")
    sp.add_argument("--word", required=True)
    sp = add("section", cmd_section, "value of a section such as (13)2|(31)")
    sp.add_argument("--section", required=True)
    sp = add("triples", cmd_triples, "solutions of 2x^2+y1^2+y2^2 = 4xy1y2 with entries <= N")
    sp.add_argument("--bound", type=_positive_int, required=True)
    sp = add("discrete-spectrum", cmd_discrete_spectrum, "spectrum values below 2*sqrt2 from the triples")
    sp.add_argument("--bound", type=_positive_int, required=True)
    sp = add("gap-check", cmd_gap_check, "scan periodic words for values inside (lo, hi)")
    sp.add_argument("--lo", required=True)
    sp.add_argument("--hi", required=True)
    sp.add_argument("--max-len", type=_positive_int, default=10)
    sp.add_argument("--jobs", type=_positive_int, default=1)
    sp = add("hall", cmd_hall, "word with Markoff value within eps of alpha > 4*sqrt2")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--eps", default="1/10**9")
    sp.add_argument("--lagrange", action="store_true")
    sp.add_argument("--depth", type=_positive_int, default=3)
    sp = add("hall-lagrange", cmd_hall_lagrange, "blocks of a sequence with Lagrange value alpha")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--eps", default="1/10**9")
    sp.add_argument("--depth", type=_positive_int, default=3)
    sp = add("dim-bound", cmd_dim_bound, "lower bound for the dimension of the spectrum near 2*sqrt2")
    sp.add_argument("--eps", default="1/2")
    sp.add_argument("--tol", default="1/10**6")
    sp = add("circle-orbit", cmd_circle_orbit, "Romik orbit of a rational point a,b,c")
    sp.add_argument("--triple", required=True)
    sp = add("pythagoras-tree", cmd_pythagoras_tree, "primitive triples with c <= N")
    sp.add_argument("--cmax", type=_positive_int, required=True)
    sp.add_argument("--jobs", type=_positive_int, default=1)
    sp = add("lagrange-est", cmd_lagrange_est, "finite-window estimate of the approximation constant of a point")
    sp.add_argument("--value", required=True)
    sp.add_argument("--qmax", type=_positive_int, default=10**5)
    sp.add_argument("--hmax", type=_positive_int, default=None, help="also scan circle points with c <= hmax")
    sp = add("verify-paper", cmd_verify_paper, "run the acceptance suite")
    sp.add_argument("--criteria", default=None, help="comma-separated ids, default all")
    sp.add_argument("--gap-max-len", type=_positive_int, default=12)
    sp.add_argument("--jobs", type=_positive_int, default=1)
    return p


def _precision(args) -> int:
    if args.precision is not None:
        return args.precision
    env = os.environ.get(PRECISION_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise UsageError(f"{PRECISION_ENV} must be an integer") from None
        if n >= 1:
            return n
    return DEFAULT_PRECISION


def run(argv=None, parser: argparse.ArgumentParser | None = None) -> dict:
    """Parse argv, run the command and return the report dictionary."""
    parser = parser or build_parser()
    args = parser.parse_args(argv)
    prec = _precision(args)
    t0 = time.perf_counter()
    inputs, results, rows, violations = args.func(args, prec)
    return {
        "schema": SCHEMA,
        "command": args.command,
        "inputs": inputs,
        "precision": prec,
        "results": results,
        "rows": rows,
        "verdict": {"ok": not violations, "violations": violations},
        "timing_s": round(time.perf_counter() - t0, 6),
    }


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, ensure_ascii=False)
    buf = io.StringIO()
    rows = report["rows"] or [
        {"key": k, "value": v} for k, v in report["results"].items() if isinstance(v, (str, int, float, bool))
    ]
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        report = run(argv, parser)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"hecke4: error: {e}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, ZeroDivisionError) as e:
        print(f"hecke4: error: {e}", file=sys.stderr)
        return 1
    fmt = parser.parse_known_args(argv)[0].format
    print(render(report, fmt))
    return 0 if report["verdict"]["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
