"""Command-line front end: every computation as a reproducible JSON or markdown report.

Exit codes: 0 success, 2 input error, 3 a consistency checker flagged a
discrepancy.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import geometry as geo
from .algebra import MultiPoly, PolyError, parse_poly
from .basechange import verify_base_change
from .isogeny import four_torsion_quotient, j_equivalent, two_isogeny
from .surfaces import surface_report
from .weierstrass import WeierstrassModel, classify_all

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_INPUT, EXIT_FLAGGED = 0, 2, 3


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=str) if isinstance(x, (set, frozenset)) else items
    if isinstance(x, float):
        return "-inf" if x == float("-inf") else str(Fraction(x))
    return x


# ---------------------------------------------------------------------------
# commands: each returns (report, flagged)

def _positive(text: str, minimum: int = 1) -> int:
    try:
        v = int(text)
    except ValueError:
        raise InputError(f"expected an integer, got {text!r}") from None
    if v < minimum:
        raise InputError(f"expected an integer >= {minimum}, got {v}")
    return v


def cmd_curve(a):
    n = _positive(a.N, 2)
    data = geo.curve_data(n)
    sing = geo.singular_points_Y2(n)
    return {
        "curve": data.to_dict(),
        "riemann_hurwitz_genus": data.riemann_hurwitz_genus(),
        "singular_points_Y2": len(sing),
        "hodge_h_i0_l2": geo.hodge_h_i0(n, 2),
    }, False


def cmd_surface(a):
    n = _positive(a.N, 1)
    rep = surface_report(geo.z_model(n))
    rep["n"] = n
    if n >= 2:
        rep["homogeneous_equation"] = str(geo.family_weierstrass(n, 2).equations["surface"])
    return rep, False


def cmd_singularities(a):
    n = _positive(a.N, 2)
    rep = {"n": n, "singular_points": [r.to_dict() for r in geo.singular_points_Y2(n)]}
    if n >= 3:
        F1, F2, sections = geo.resolution_fiber_graphs(n)
        rep["F1"] = {"type": F1.recognized_type, "nodes": len(F1.nodes)}
        rep["F2"] = {"type": F2.recognized_type, "nodes": len(F2.nodes)}
        rep["sections"] = sections
        rep["edge_list"] = geo.full_resolution_graph(n).edge_list()
    return rep, False


_A_VARS = ("a1", "a2", "a3", "a4", "a6")


def model_from_equation(lhs: MultiPoly, rhs: MultiPoly) -> WeierstrassModel:
    """Read a1..a6 off y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6."""
    p = lhs - rhs
    used = set(p.used_variables())
    if not {"x", "y"} <= used:
        raise InputError("a Weierstrass equation must involve x and y")
    base = sorted(used - {"x", "y"})
    if len(base) > 1:
        raise InputError(f"more than one base variable: {base}")
    t = base[0] if base else "t"
    f = p.coefficients_in("y")
    if set(f) - {0, 1, 2} or f.get(2) != MultiPoly.constant(1):
        raise InputError("the equation must be monic of degree 2 in y")
    y1 = f.get(1, MultiPoly(())).coefficients_in("x")
    y0 = (-f.get(0, MultiPoly(()))).coefficients_in("x")
    if set(y1) - {0, 1} or set(y0) - {0, 1, 2, 3} or y0.get(3) != MultiPoly.constant(1):
        raise InputError("the equation is not in Weierstrass form")

    def coef(d, k):
        c = d.get(k)
        return MultiPoly((t,)) if c is None else c.with_variables((t,))

    return WeierstrassModel(t, coef(y1, 1), coef(y0, 2), coef(y1, 0), coef(y0, 1), coef(y0, 0))


def read_equation_file(path: str) -> dict[str, tuple[MultiPoly, MultiPoly]]:
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(.+)$", line)
        if not m or m.group(2).count("=") != 1:
            raise InputError(f"{path}:{lineno}: expected 'name: polynomial = polynomial'")
        lhs_s, rhs_s = m.group(2).split("=")
        names = sorted(set(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", lhs_s + rhs_s)))
        try:
            out[m.group(1)] = (parse_poly(lhs_s, names), parse_poly(rhs_s, names))
        except PolyError as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from None
    if not out:
        raise InputError(f"{path}: no equations")
    return out


def cmd_fibers(a):
    models = {}
    if a.builtin:
        m = re.fullmatch(r"z(\d+)|r", a.builtin.lower())
        if not m:
            raise InputError("--builtin expects zN or r")
        models[a.builtin] = geo.z_model(int(m.group(1))) if m.group(1) else geo.r_model()
    else:
        for name, (lhs, rhs) in read_equation_file(a.file).items():
            models[name] = model_from_equation(lhs, rhs)
    rep = {}
    for name, model in models.items():
        config = classify_all(model)
        rep[name] = {"model": model.to_dict(), "configuration": config.summary(),
                     "euler": config.euler_total, "fibers": config.to_list()}
    return {"models": rep}, False


def cmd_base_change(a):
    n, k = _positive(a.N, 1), _positive(a.K, 1)
    report = verify_base_change(geo.z_model(n), k)
    rep = report.to_dict()
    target = classify_all(geo.z_model(n * k)).summary()
    rep["source"] = f"Z_({n})" if n > 1 else "R"
    rep["matches_Z_configuration"] = {"target": f"Z_({n * k})", "configuration": target,
                                      "agrees": report.configuration.matches(target)}
    return rep, not report.consistent


def cmd_isogeny(a):
    n = _positive(a.N, 1)
    z = geo.z_model(n)
    if a.kind == "two":
        q = two_isogeny(z)
        ref = WeierstrassModel.from_strings("t", a2=f"-2+4*t^{n}", a4=f"1-4*t^{n}")
    else:
        q = four_torsion_quotient(z, parse_poly(f"t^{n}", ["t"]))
        ref = WeierstrassModel.from_strings("t", a2=f"-2*(4*t^{n}+1)", a4=f"(4*t^{n}-1)^2")
    config = classify_all(q)
    agrees = j_equivalent(q, ref)
    return {"n": n, "kind": a.kind, "quotient": q.to_dict(), "reference": ref.to_dict(),
            "j_equivalent_to_reference": agrees, "equal_to_reference": q == ref,
            "configuration": config.summary(), "fibers": config.to_list()}, not agrees


def cmd_threefold(a):
    if a.t0 is not None:
        try:
            t0 = Fraction(a.t0)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"cannot read {a.t0!r} as a rational number") from None
        sampled = False
    else:
        rng = random.Random(a.seed)
        t0 = Fraction(rng.choice([-1, 1]) * rng.randint(1, 50), rng.randint(1, 50))
        sampled = True
    rep = geo.k3_fiber_report(t0)
    rep["sampled"] = sampled
    return rep, False


def cmd_lfold(a):
    n, l = _positive(a.N, 2), _positive(a.L, 2)
    fam = geo.family_weierstrass(n, l)
    rep = {"n": n, "l": l, "family": fam.to_dict(), "cover": geo.cover_equation(n, l).to_dict()}
    if l >= 3:
        # genericity sample: at random v values the t-fibration has the fibers of Z_(n)
        rng = random.Random(a.seed)
        values = {}
        for i in range(1, l - 1):
            v = Fraction(rng.randint(2, 30), rng.randint(1, 7))
            values[f"v{i}"] = v
        eq = fam.equations["family"]
        rhs = eq.rhs.specialize(values)
        coeffs = rhs.coefficients_in("X")
        model = WeierstrassModel("t", MultiPoly(("t",)), coeffs[2].specialize({"X": 0, "Y": 0}).with_variables(("t",)),
                                 MultiPoly(("t",)), coeffs[1].specialize({"X": 0, "Y": 0}).with_variables(("t",)),
                                 MultiPoly(("t",)))
        got = classify_all(model).summary()
        want = classify_all(geo.z_model(n)).summary()
        rep["generic_sample"] = {"values": {k: str(v) for k, v in values.items()},
                                 "configuration": got, "expected": want, "agrees": got == want}
    if l in (2, 3):
        rep["structural_identities"] = geo.structural_identities(n)
    rep["kodaira"] = geo.kodaira_bound_chain(n, l)
    return rep, False


def cmd_table_check(a):
    rows = geo.fibration_table_check()
    flagged = [r for r in rows if not r["consistent"]]
    return {"rows": rows, "consistent": len(rows) - len(flagged), "flagged": len(flagged)}, bool(flagged)


def cmd_hodge(a):
    n, l = _positive(a.N, 2), _positive(a.L, 1)
    return {"n": n, "l": l, "h_i0": geo.hodge_h_i0(n, l), "genus": geo.curve_data(n).genus}, False


def cmd_bounds(a):
    n, l = _positive(a.N, 2), _positive(a.L, 1)
    return geo.kodaira_bound_chain(n, l), False


# ---------------------------------------------------------------------------
# markdown rendering

def _md_table(headers, rows) -> str:
    out = ["| " + " | ".join(headers) + " |", "|" + "---|" * len(headers)]
    out += ["| " + " | ".join(str(c) for c in r) + " |" for r in rows]
    return "\n".join(out)


def _md_generic(rep: dict) -> str:
    rows = []
    for k, v in sorted(rep.items()):
        if isinstance(v, (dict, list)):
            v = json.dumps(_jsonable(v), sort_keys=True)
        rows.append((k, str(v).replace("\n", " ")))
    return _md_table(["key", "value"], rows)


def render_markdown(command: str, rep: dict) -> str:
    if command == "surface":
        inv = rep["invariants"]
        body = _md_table(
            ["n", "fibers", "e", "chi", "p_g", "h11", "MW rank", "MW", "class", "modular"],
            [(rep["n"], rep["configuration"], inv["e"], inv["chi"], inv["p_g"], inv["h11"], rep["mw_rank"],
              rep["torsion"]["group"], inv["kodaira_class"], rep["modularity"]["verdict"])],
        )
        return f"# Surface Z_({rep['n']})\n\n{body}\n"
    if command == "table-check":
        body = _md_table(
            ["fibers", "claimed rank", "computed rank", "Euler", "filler", "verdict"],
            [(r["fibers"], r["claimed_rank"], r["computed_rank"], r["euler_reducible"], r["euler_filler"],
              r["verdict"]) for r in rep["rows"]],
        )
        return f"# Fibration table\n\n{body}\n\n{rep['consistent']} consistent, {rep['flagged']} flagged\n"
    if command == "singularities":
        body = _md_table(["representative", "orbit size", "type", "resolution"],
                         [(" x ".join(r["representative"]), r["orbit_size"], r["type"],
                           ", ".join(f"-{b}" for b in r["resolution"])) for r in rep["singular_points"]])
        extra = ""
        if "F1" in rep:
            extra = (f"\n\nF1: {rep['F1']['type']} ({rep['F1']['nodes']} curves); "
                     f"F2: {rep['F2']['type']} ({rep['F2']['nodes']} curves); sections: "
                     + ", ".join(f"{s['label']} ({s['self_intersection']})" for s in rep["sections"]))
        return f"# Singular points of Y_({rep['n']})^(2)\n\n{body}{extra}\n"
    if command == "hodge":
        body = _md_table([f"h^{p},0" for p in range(len(rep["h_i0"]))], [rep["h_i0"]])
        return f"# Hodge numbers of Y_({rep['n']})^({rep['l']})\n\n{body}\n"
    if command == "bounds":
        body = _md_table(["l", "statement", "provenance"],
                         [(x["l"], x["statement"], x["provenance"]) for x in rep["lines"]])
        return f"# Kodaira dimension of Y_({rep['n']})^({rep['l']})\n\n{body}\n\nresult: k {rep['result']}\n"
    if command == "base-change":
        body = _md_table(["place", "original", "ramified", "predicted", "observed", "agrees"],
                         [(r["place"], r["original"], r["ramified"], r["predicted"], r["observed"], r["agrees"])
                          for r in rep["rows"]])
        return f"# Base change of order {rep['n']}\n\n{body}\n\nverdict: {rep['verdict']}\n"
    return f"# {command}\n\n{_md_generic(rep)}\n"


# ---------------------------------------------------------------------------

COMMANDS = {
    "curve": cmd_curve, "surface": cmd_surface, "singularities": cmd_singularities, "fibers": cmd_fibers,
    "base-change": cmd_base_change, "isogeny": cmd_isogeny, "threefold": cmd_threefold, "lfold": cmd_lfold,
    "table-check": cmd_table_check, "hodge": cmd_hodge, "bounds": cmd_bounds,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "markdown"], default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    p = _Parser(prog="ellquot", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("curve", parents=[common]).add_argument("N")
    sub.add_parser("surface", parents=[common]).add_argument("N")
    sub.add_parser("singularities", parents=[common]).add_argument("N")
    f = sub.add_parser("fibers", parents=[common])
    g = f.add_mutually_exclusive_group(required=True)
    g.add_argument("--builtin")
    g.add_argument("--file")
    b = sub.add_parser("base-change", parents=[common])
    b.add_argument("N")
    b.add_argument("K")
    i = sub.add_parser("isogeny", parents=[common])
    i.add_argument("kind", choices=["two", "four"])
    i.add_argument("N")
    sub.add_parser("threefold", parents=[common]).add_argument("--t0")
    for name in ("lfold", "hodge", "bounds"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("N")
        s.add_argument("L")
    sub.add_parser("table-check", parents=[common])
    return p


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    # allow negative rationals after --t0 (argparse would read them as flags)
    for j in range(len(argv) - 1):
        if argv[j] == "--t0" and argv[j + 1].startswith("-"):
            argv[j:j + 2] = [f"--t0={argv[j + 1]}", ""]
    argv = [x for x in argv if x != ""]
    try:
        args = build_parser().parse_args(argv)
        for k, v in (("format", "json"), ("seed", 0), ("out", None)):
            if not hasattr(args, k):
                setattr(args, k, v)
        report, flagged = COMMANDS[args.command](args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (InputError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = {"schema_version": SCHEMA_VERSION, "command": args.command, **report}
    if args.format == "json":
        text = json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"
    else:
        text = render_markdown(args.command, _jsonable(report))
    if args.out:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    return EXIT_FLAGGED if flagged else EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))
