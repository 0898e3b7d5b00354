"""``cfdyn`` command-line tool.

Exit codes: 0 success, 1 failed check, 2 bad input, 3 inconclusive check,
4 I/O failure, 5 orbit requested for a rational ``w``.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import replace

from .arith import GaussianInt, format_complex, is_exact, parse_complex
from .cf import ChoiceFunction, convergents, expand, expansion_to_json
from .config import load_config
from .diamond import branch, classify_cell
from .errors import CfDynError, OriginError, ParseError, PoleError
from .natext import D, F_diamond, V_contains, psi

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE, EXIT_IO, EXIT_RATIONAL_ORBIT = range(6)

# complex literals such as -1+2i or -i must not be taken for options
_LITERAL = re.compile(r"^-(?:[\d.]|[ij]$|[\d./eE+-]*[ij]$)")


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        self._negative_number_matcher = _LITERAL

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> int:
    if out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        print(f"cannot write {out}: {e.strerror or e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _dumps(d) -> str:
    return json.dumps(d, indent=2) + "\n"


# ---------------------------------------------------------------------------
# verbs


def cmd_expand(args) -> int:
    z = parse_complex(args.z)
    exp = expand(z, ChoiceFunction.by_name(args.algorithm), args.steps)
    d = expansion_to_json(exp)
    if args.format == "json":
        return _emit(_dumps(d), args.out)
    lines = [f"input       {d['input']}  ({'exact' if exp.exact else 'float'})",
             f"algorithm   {d['algorithm']}",
             f"digits      [{', '.join(d['digits'])}]",
             f"terminated  {'yes' if exp.terminated else 'no'}",
             "",
             f"{'n':>3}  {'a_n':<10} {'p_n':<22} {'q_n':<22} {'residual':<10} z_n"]
    for n, a in enumerate(d["digits"]):
        cv = d["convergents"][n]
        rem = d["remainders"][n] if n < len(d["remainders"]) else ""
        lines.append(f"{n:>3}  {a:<10} {cv['p']:<22} {cv['q']:<22} {d['residuals'][n]:<10.3e} {rem}")
    return _emit("\n".join(lines) + "\n", args.out)


def cmd_convergents(args) -> int:
    digits = []
    for tok in args.digits:
        v = parse_complex(tok, exact=True)
        if not v.is_gaussian_integer():
            raise ParseError(tok, tok)
        digits.append(v.to_gaussian())
    pairs = convergents(digits)
    rows = [{"n": p.index, "p": format_complex(p.p), "q": format_complex(p.q),
             "value": format_complex(p.value()) if p.q != GaussianInt(0) else None} for p in pairs]
    if args.format == "json":
        return _emit(_dumps({"digits": [format_complex(a) for a in digits], "convergents": rows}), args.out)
    text = "".join(f"{r['n']:>3}  p={r['p']:<16} q={r['q']:<16} p/q={r['value']}\n" for r in rows)
    return _emit(text, args.out)


def cmd_classify(args) -> int:
    w = parse_complex(args.w)
    cell = classify_cell(w, args.epsilon)
    d = {"input": format_complex(w), **cell.to_json()}
    if args.format == "json":
        return _emit(json.dumps(d) + "\n", args.out)
    return _emit(f"{d['input']}  ->  {cell}\n", args.out)


def cmd_orbit(args) -> int:
    z, w = parse_complex(args.z), parse_complex(args.w)
    if is_exact(w):
        print("w is rational: its forward orbit under the diamond map is finite, so the "
              "orbit reaches w = 0 and stops; give w with a decimal point to run a float orbit",
              file=sys.stderr)
        return EXIT_RATIONAL_ORBIT
    z, w = complex(z), complex(w)
    if z == w:
        print("z = w lies on the diagonal, where F is undefined", file=sys.stderr)
        return EXIT_USAGE
    P = psi().psi
    eps = args.epsilon
    steps, entry = [], {"V": None, "Psi": None, "D": None}
    status = EXIT_OK
    for n in range(args.steps + 1):
        flags = {"V": V_contains(z, w), "Psi": P.contains(z, w, eps), "D": D.contains(z, w, eps)}
        for key, hit in flags.items():
            if hit and entry[key] is None:
                entry[key] = n
        row = {"n": n, "z": format_complex(z), "w": format_complex(w), **flags}
        if n < args.steps:
            try:
                row["branch"] = branch(w).name
                z, w = F_diamond(z, w)
            except (PoleError, OriginError) as e:
                row["branch"] = None
                steps.append(row)
                print(f"orbit stopped at step {n}: {e}", file=sys.stderr)
                status = EXIT_FAIL
                break
        steps.append(row)
    if args.format == "json":
        text = _dumps({"entry": entry, "steps": steps})
    else:
        lines = [f"first entry: V={entry['V']} Psi={entry['Psi']} D={entry['D']}",
                 f"{'n':>4}  {'branch':<6} V Psi D  z | w"]
        for r in steps:
            fl = " ".join("x" if r[k] else "." for k in ("V", "Psi", "D"))
            lines.append(f"{r['n']:>4}  {r.get('branch') or '-':<6} {fl:<7} {r['z']} | {r['w']}")
        text = "\n".join(lines) + "\n"
    code = _emit(text, args.out)
    return code if code != EXIT_OK else status


def cmd_verify(args) -> int:
    from .report import validate_report
    from .suites import run_suite

    try:
        cfg = load_config(args.config)
    except OSError as e:
        raise ValueError(f"cannot read config: {e}") from None
    over = {k: getattr(args, k) for k in ("samples", "seed", "epsilon", "grid") if getattr(args, k) is not None}
    cfg = replace(cfg, **over)
    kw = {"pairs": args.samples} if args.suite == "trapping" and args.samples is not None else {}
    rep = run_suite(args.suite, cfg, **kw)
    d = rep.to_json(timing=not args.no_timing)
    validate_report(d)
    if args.format == "json":
        text = _dumps(d)
    else:
        text = "".join(f"{c.status.upper():<13} {c.check}\n" for c in rep.checks)
        text += f"{rep.status.upper():<13} {rep.check} (suite)\n"
    code = _emit(text, args.out)
    if code != EXIT_OK:
        return code
    return {"pass": EXIT_OK, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}[rep.status]


def cmd_render(args) -> int:
    from .render import render_figure

    return _emit(render_figure(args.figure), args.out)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cfdyn", description="Diamond complex continued fractions and their natural extension.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(sp, formats=("text", "json"), default="text"):
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--out", help="write output to this file instead of stdout")

    e = sub.add_parser("expand", help="continued fraction digits, convergents and residuals")
    e.add_argument("z")
    e.add_argument("--algorithm", choices=("diamond", "hurwitz"), default="diamond")
    e.add_argument("--steps", type=_positive, default=40)
    common(e)
    e.set_defaults(func=cmd_expand)

    c = sub.add_parser("convergents", help="p_n, q_n for a digit sequence")
    c.add_argument("digits", nargs="+")
    common(c)
    c.set_defaults(func=cmd_convergents)

    k = sub.add_parser("classify", help="partition cell of a point")
    k.add_argument("w")
    k.add_argument("--epsilon", type=float, default=1e-9)
    common(k, default="json")
    k.set_defaults(func=cmd_classify)

    o = sub.add_parser("orbit", help="iterate the natural extension from (z, w)")
    o.add_argument("z")
    o.add_argument("w")
    o.add_argument("--steps", type=_positive, default=200)
    o.add_argument("--epsilon", type=float, default=1e-9)
    common(o)
    o.set_defaults(func=cmd_orbit)

    v = sub.add_parser("verify", help="run a verification suite and print a JSON report")
    v.add_argument("suite", choices=("partition", "bijectivity", "trapping", "psi", "identities"))
    v.add_argument("--samples", type=_positive)
    v.add_argument("--seed", type=int)
    v.add_argument("--epsilon", type=float)
    v.add_argument("--grid", type=_positive)
    v.add_argument("--config", help="TOML file with [verify] defaults (else $CFDYN_CONFIG)")
    v.add_argument("--no-timing", action="store_true", help="report elapsed_ms as 0 for byte-stable output")
    common(v, default="json")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("render", help="write one of the figures as SVG")
    r.add_argument("figure", choices=("regions", "partition", "dne", "z1hat", "psi"))
    r.add_argument("--out")
    r.set_defaults(func=cmd_render)
    return p


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except (OriginError, ValueError) as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except CfDynError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
