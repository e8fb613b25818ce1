"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import mpmath

from . import bounds, codes, kraft
from .bitio import ContainerError
from .codes import CodeId, code_length, encode
from .dist import (WITNESS_BOUNDS, WITNESS_DD, WITNESS_NU, SpikeUniform,
                   expansion_ratio, parse_distribution, sum_len)
from .kraft import Dyadic
from . import reference


class UsageError(Exception):
    pass


def _code(name: str) -> CodeId:
    try:
        return CodeId.parse(name)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _ints(tokens) -> list[int]:
    out = []
    for tok in tokens:
        try:
            out.append(int(tok))
        except ValueError:
            raise UsageError(f"not an integer: {tok!r}") from None
    return out


def _table(rows, out) -> None:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    for r in rows:
        out.write("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


# --- commands ----------------------------------------------------------------

def cmd_encode(args, out) -> int:
    symbols = _ints(args.symbols if args.symbols else sys.stdin.read().split())
    if args.out:
        with open(args.out, "wb") as f:
            codes.encode_stream(args.code, symbols, f)
    else:
        codes.encode_stream(args.code, symbols, sys.stdout.buffer)
    return 0


def cmd_decode(args, out) -> int:
    if args.file == "-":
        code, symbols = codes.decode_stream(sys.stdin.buffer)
    else:
        with open(args.file, "rb") as f:
            code, symbols = codes.decode_stream(f)
    out.write(" ".join(map(str, symbols)) + "\n")
    return 0


def cmd_lengths(args, out) -> int:
    symbols = _ints(args.symbols) if args.symbols else range(1, args.max + 1)
    rows = [("a", "length", "codeword")]
    for a in symbols:
        ell = code_length(args.code, a)
        word = str(encode(args.code, a)) if ell <= 64 else "..."
        rows.append((a, ell, word))
    _table(rows, out)
    return 0


def _tail(code: CodeId, T: int) -> Dyadic | None:
    """Exact Kraft mass of all blocks after T, when it has a closed form."""
    if code is CodeId.ALPHA:
        return Dyadic.pow2(1 - (1 << (T + 1)))
    if code is CodeId.GAMMA:
        return Dyadic.pow2(-T - 1)
    if code is CodeId.DELTA or (code is CodeId.DELTA_DELTA and T >= 2):
        return kraft.delta_tail(T)
    if code is CodeId.NU and T >= 84:
        return kraft.delta_tail(T)
    return None


def cmd_kraft_check(args, out) -> int:
    code, T = args.code, args.through_block
    ok = True
    partial = kraft.kraft_through_block(code, T)
    out.write(f"code {code.label}\n")
    out.write(f"partial through block {T} = {partial}\n")
    if code is CodeId.BETA:
        out.write("beta is not prefix-free; every block adds 1/2, so the sum diverges\n")
        return 0
    tail = _tail(code, T)
    if tail is not None:
        out.write(f"tail after block {T} = {tail}\n")
        out.write(f"partial + tail = {partial + tail}\n")
        ok &= partial + tail == kraft.ONE
    ok &= partial <= kraft.ONE
    if code in (CodeId.DELTA, CodeId.DELTA_DELTA):
        first7 = kraft.kraft_prefix_sum(code, 7)
        out.write(f"sum over a = 1..7 = {first7}\n")
        ok &= first7 == Dyadic(3, 2)
    if code is CodeId.NU:
        rep = kraft.verify_nu_identity()
        out.write(f"partial through small symbols + S-blocks = {rep.rhs}"
                  f" (delta lengths give {rep.lhs})\n")
        out.write(f"total = {rep.nu_total}\n")
        for msg in rep.failures:
            sys.stderr.write(msg + "\n")
        ok &= rep.ok
    out.write("PASS\n" if ok else "FAIL\n")
    return 0 if ok else 1


def cmd_analyze(args, out) -> int:
    try:
        d = parse_distribution(args.dist)
    except ValueError as e:
        raise UsageError(str(e)) from None
    rep = expansion_ratio(args.code, d, args.digits)
    digits = args.digits or 20
    known = WITNESS_BOUNDS.get((args.code, d)) if isinstance(d, SpikeUniform) else None
    ok = True
    if known is not None:
        ok = rep.ratio > mpmath.mpf(str(known))
    if args.json:
        payload = rep.as_dict(digits)
        payload["dist"] = args.dist
        if known is not None:
            payload["published_lower_bound"] = str(known)
            payload["exceeds_published_bound"] = ok
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        ratio = mpmath.nstr(rep.ratio, digits)
        if known is not None:
            ratio += f"  {'>' if ok else 'NOT >'} {known} (published lower bound)"
        rows = [("code", rep.code.label), ("dist", args.dist),
                ("avg_len", mpmath.nstr(rep.avg_len, digits)),
                ("entropy", mpmath.nstr(rep.entropy, digits)),
                ("ratio", ratio)]
        if rep.exact_len_sum is not None:
            rows.append(("exact_len_sum", rep.exact_len_sum))
        _table(rows, out)
    return 0 if ok else 1


def _cases_rows(rep) -> list[tuple]:
    rows = [("case", "branch", "P(1) from", "P(1) to", "max f", "at P(1)", "bound", "R sign", "shape", "result")]
    for c in rep.cases:
        rows.append((c.spec.case, c.spec.branch, f"{c.lo:.6f}", f"{c.hi:.6f}",
                     f"{c.max_value:.7f}", f"{c.argmax:.5f}", f"{c.spec.claimed_bound}",
                     "ok" if c.r_sign_ok else "BAD",
                     {True: "ok", False: "BAD", None: "-"}[c.shape_ok],
                     "pass" if c.ok else "FAIL"))
    return rows


def _zero_rows(code: CodeId) -> list[tuple]:
    zeros = bounds.zero_points()
    rows = [("point", "kind", "case", "computed", "published", "diff")]
    for zp in bounds.ZERO_POINTS:
        if zp.code is code:
            z = zeros[zp.name]
            rows.append((zp.name, zp.kind, zp.case, f"{z:.9f}", f"{zp.published:.5f}",
                         f"{z - zp.published:+.1e}"))
    return rows


def cmd_verify_bounds(args, out) -> int:
    code = args.code
    if code not in bounds.CASES:
        raise UsageError("verify-bounds supports delta_delta and nu only")
    try:
        rep = bounds.verify_cases(code, args.grid_step)
    except ValueError as e:
        raise UsageError(str(e)) from None
    out.write(f"code {code.label}, grid step {args.grid_step:g}\n\n")
    _table(_cases_rows(rep), out)
    out.write("\n")
    rows = [("function", "at", "value", "claim", "result")]
    for c in rep.constants:
        rows.append((c.branch, c.point, f"{c.value:.9f}", f"{c.relation} {c.printed}",
                     "pass" if c.ok else "FAIL"))
    _table(rows, out)
    out.write("\n")
    _table(_zero_rows(code), out)
    out.write("\n")
    for p in rep.table_problems:
        out.write(f"table problem: {p}\n")
    out.write(f"global max {rep.global_max:.7f} at P(1) = {rep.global_argmax:.5f};"
              f" expansion factor {rep.factor}: {'PASS' if rep.ok else 'FAIL'}\n")
    return 0 if rep.ok else 1


def _sig(n: int, digits: int) -> str:
    """Scientific notation of an exact integer, truncated to ``digits`` significant digits."""
    s = str(n)
    return f"{s[0]}.{s[1:digits]}e{len(s) - 1}"


def cmd_repro(args, out) -> int:
    rows = [("item", "published", "computed", "match")]

    def add(item, published, computed, match):
        rows.append((item, published, computed, "yes" if match else "NO"))

    for a, g, d in reference.GAMMA_DELTA_TABLE:
        cg, cd = str(encode(CodeId.GAMMA, a)), str(encode(CodeId.DELTA, a))
        add(f"gamma({a})", g, cg, g.replace(" ", "") == cg)
        add(f"delta({a})", d, cd, d.replace(" ", "") == cd)
    for a, _, dd in reference.DELTA_DD_TABLE:
        c = str(encode(CodeId.DELTA_DELTA, a))
        add(f"delta_delta({a})", dd, c, dd == c)

    for code in (CodeId.DELTA, CodeId.DELTA_DELTA):
        s = kraft.kraft_prefix_sum(code, 7)
        add(f"Kraft sum a=1..7, {code.label}", "3/4", str(s), s == Dyadic(3, 2))
    rep = kraft.verify_nu_identity()
    add("Kraft identity, delta side", "1187/4096", str(rep.lhs), rep.lhs == rep.expected)
    add("Kraft identity, nu side", "1187/4096", str(rep.rhs), rep.rhs == rep.expected)
    add("nu total Kraft mass", "1", str(rep.nu_total), rep.nu_total == kraft.ONE)

    for code, d, m, printed, digits in ((CodeId.DELTA_DELTA, WITNESS_DD, 68, reference.SUM_LEN_DD_68, 9),
                                        (CodeId.NU, WITNESS_NU, 132, reference.SUM_LEN_NU_132, 10)):
        s = sum_len(code, 2, (1 << m) + 1)
        add(f"sum_len({code.label}, 2, 2^{m}+1)", printed, _sig(s, digits), _sig(s, digits) == printed)
        r = expansion_ratio(code, d, 40).ratio
        bound = WITNESS_BOUNDS[(code, d)]
        add(f"ratio({code.label}, spike {d.p1},{m})", f"> {bound}", mpmath.nstr(r, 12),
            r > mpmath.mpf(str(bound)))

    zeros = bounds.zero_points()
    for zp in bounds.ZERO_POINTS:
        z = zeros[zp.name]
        add(f"zero point {zp.name}", f"{zp.published:.5f}", f"{z:.5f}", abs(z - zp.published) <= 1e-3)
    for code in (CodeId.DELTA_DELTA, CodeId.NU):
        vr = bounds.verify_cases(code, 1e-4)
        for c in vr.constants:
            add(f"{code.label} {c.branch}({c.point})", f"{c.relation} {c.printed}",
                f"{c.value:.7f}", c.ok)
        add(f"{code.label} max over all cases", f"<= {vr.factor}", f"{vr.global_max:.7f}", vr.ok)

    _table(rows, out)
    bad = sum(r[3] == "NO" for r in rows[1:])
    out.write(f"{len(rows) - 1 - bad}/{len(rows) - 1} items match\n")
    return 0 if not bad else 1


# --- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ucikit", description="Universal integer codes: codecs, Kraft sums, ratios and bound checks.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("encode", help="encode integers into a container")
    e.add_argument("--code", type=_code, required=True)
    e.add_argument("--out", help="output file (default: standard output)")
    e.add_argument("symbols", nargs="*", help="integers >= 1 (default: read from standard input)")
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="decode a container and print its integers")
    d.add_argument("file", help="container file, or - for standard input")
    d.set_defaults(func=cmd_decode)

    ln = sub.add_parser("lengths", help="print codeword lengths and codewords")
    ln.add_argument("--code", type=_code, required=True)
    ln.add_argument("--max", type=int, default=16, help="show symbols 1..MAX when none are given")
    ln.add_argument("symbols", nargs="*")
    ln.set_defaults(func=cmd_lengths)

    k = sub.add_parser("kraft-check", help="exact Kraft sums")
    k.add_argument("--code", type=_code, required=True)
    k.add_argument("--through-block", type=int, default=84, metavar="T")
    k.set_defaults(func=cmd_kraft_check)

    a = sub.add_parser("analyze", help="average length, entropy and expansion ratio")
    a.add_argument("--code", type=_code, required=True)
    a.add_argument("--dist", required=True,
                   help="explicit:p1,p2,... | spike:p1,m | geom:r,N | zipf:s,N")
    a.add_argument("--digits", type=int, default=None, help="working precision in digits")
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify-bounds", help="grid-check the expansion factor case analysis")
    v.add_argument("--code", type=_code, required=True)
    v.add_argument("--grid-step", type=float, default=1e-4)
    v.set_defaults(func=cmd_verify_bounds)

    r = sub.add_parser("repro", help="compare computed values with the published ones")
    r.set_defaults(func=cmd_repro)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        return args.func(args, out)
    except (UsageError, ContainerError, codes.UnsupportedCode, OSError) as e:
        sys.stderr.write(f"ucikit {args.command}: {e}\n")
        return 2
    except ValueError as e:
        sys.stderr.write(f"ucikit {args.command}: {e}\n")
        return 2


def main() -> None:
    sys.exit(run())
