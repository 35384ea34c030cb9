"""Command line front end: ``parahecke canon|cosets|mul|verify|map``.

Exit codes: 0 ok, 2 parse error, 3 membership failure, 4 enumeration bound
exceeded, 5 verification failure, 6 level not squarefree.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from .cache import TableCache
from .exactlin import IntMat, is_prime
from .hecke import (
    BoundExceeded,
    EnumerationBound,
    HeckeElement,
    multiply,
    prime_power_label,
)
from .orthogonal import (
    Level,
    MembershipError,
    NotSquarefreeError,
    OrthoDoubleCosetLabel,
    OrthoElement,
    build_form,
    double_coset_canonical,
    make_generator,
    right_coset_canonical,
)
from . import symplectic as sp

EXIT_OK, EXIT_PARSE, EXIT_MEMBERSHIP, EXIT_BOUND, EXIT_VERIFY, EXIT_LEVEL = 0, 2, 3, 4, 5, 6

log = logging.getLogger("parahecke")


class ParseError(ValueError):
    pass


def _env(name: str, default=None):
    return os.environ.get(f"HECKE_{name}", default)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-N", "--level", type=int, default=_env("LEVEL"), help="squarefree level (HECKE_LEVEL)")
    common.add_argument("-p", "--prime", type=int, default=_env("PRIME"), help="prime (HECKE_PRIME)")
    common.add_argument("--bound", type=int, default=_env("BOUND"), help="largest coset denominator to enumerate")
    common.add_argument("--cache-dir", default=_env("CACHE_DIR"), help="table cache directory (HECKE_CACHE_DIR)")
    common.add_argument("--format", choices=("json", "text"), default=_env("FORMAT", "text"))
    common.add_argument("--seed", type=int, default=int(_env("SEED", 0)))
    common.add_argument("--jobs", type=int, default=int(_env("JOBS", 1)), help="worker processes (HECKE_JOBS)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="parahecke", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("canon", parents=[common], help="canonical coset representative and label")
    c.add_argument("--group", choices=("so3", "so5", "param", "param-star"), default="so5")
    c.add_argument("element", help="element JSON, @file, or - for stdin")

    c = sub.add_parser("cosets", parents=[common], help="enumerate right cosets of T1(p) or T2(p)")
    c.add_argument("which", choices=("T1", "T2"))
    c.add_argument("--group", choices=("so5", "param"), default="so5")

    c = sub.add_parser("mul", parents=[common], help="multiply Hecke elements")
    c.add_argument("operands", nargs="+", help="T1, T2, T1(3), W2, unit, or label/element JSON")
    c.add_argument("--group", choices=("so3", "so5", "param"), default="so5")

    c = sub.add_parser("verify", parents=[common], help="run the verification suite")
    c.add_argument("suite", nargs="?", default="paper", choices=("paper",))
    c.add_argument("--samples", type=int, default=1000, help="random samples for stability checks")

    c = sub.add_parser("map", parents=[common], help="symplectic <-> orthogonal")
    c.add_argument("direction", choices=("sp2so", "so2sp"))
    c.add_argument("element", help="element JSON, @file, or - for stdin")
    return parser


# ---------------------------------------------------------------------------
# input parsing


def _read_json(text: str):
    if text == "-":
        text = sys.stdin.read()
    elif text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def _rat(x) -> Fraction:
    try:
        return Fraction(str(x))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {x!r}") from None


def _level_of(data: dict, args) -> int:
    if "N" in data:
        return int(data["N"])
    if args.level is None:
        raise ParseError("level missing: give -N or an \"N\" field")
    return int(args.level)


def parse_ortho(data, args, dim: int) -> OrthoElement:
    """{"N","denom","mat"} or {"N","denom","diag"} or {"N","product":[...]}."""
    if not isinstance(data, dict):
        raise ParseError("element must be a JSON object")
    N = _level_of(data, args)
    form = build_form(N, dim)
    if "product" in data:
        out = OrthoElement(form, IntMat.identity(dim), 1, check=False)
        for part in data["product"]:
            part = dict(part, N=N)
            if "generator" in part:
                out = out @ make_generator(part["generator"], form, part.get("param"))
            else:
                out = out @ parse_ortho(part, args, dim)
        out.validate()
        return out
    denom = int(data.get("denom", 1))
    if "diag" in data:
        entries = [_rat(x) for x in data["diag"]]
        rows = [[entries[i] if i == j else Fraction(0) for j in range(dim)] for i in range(dim)]
    elif "mat" in data:
        rows = [[_rat(x) for x in r] for r in data["mat"]]
    else:
        raise ParseError("element needs one of mat, diag, product")
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise ParseError(f"expected a {dim}x{dim} matrix")
    rows = [[x / denom for x in r] for r in rows]
    return OrthoElement.from_rational(form, rows)


def parse_symp(data, args) -> sp.SympElement:
    """{"N","scale","mat"}, {"diag":[a1,a2,d1,d2],"scale"}, {"W":d}, {"J":true}
    or {"N","product":[...]}; mat entries may be rational strings."""
    if not isinstance(data, dict):
        raise ParseError("element must be a JSON object")
    N = _level_of(data, args)
    if "product" in data:
        out = sp.SympElement.identity(N)
        for part in data["product"]:
            out = out @ parse_symp(dict(part, N=N), args)
        return out
    if "W" in data:
        return sp.W(int(data["W"]), N)
    if data.get("J"):
        return sp.J_N(N)
    scale = int(data.get("scale", 1))
    if "diag" in data:
        d = [_rat(x) for x in data["diag"]]
        rows = [[d[i] if i == j else Fraction(0) for j in range(4)] for i in range(4)]
    elif "mat" in data:
        rows = [[_rat(x) for x in r] for r in data["mat"]]
    else:
        raise ParseError("element needs one of mat, diag, W, J, product")
    if len(rows) != 4 or any(len(r) != 4 for r in rows):
        raise ParseError("expected a 4x4 matrix")
    return sp.SympElement.from_rational(N, rows, scale)


def parse_operand(tok: str, args, group: str) -> HeckeElement:
    N = args.level
    if N is None:
        raise ParseError("mul needs -N")
    kind = "param" if group == "param" else group
    t = tok.strip()
    if t == "unit":
        return HeckeElement.unit(N, kind)
    if t[:2] in ("T1", "T2") and (len(t) == 2 or t[2] == "("):
        p = int(t[3:-1]) if len(t) > 2 else args.prime
        if p is None:
            raise ParseError(f"{t}: prime missing (use {t[:2]}(p) or -p)")
        if group == "param":
            return sp.sigma_T1(N, p) if t[:2] == "T1" else sp.sigma_T2(N, p)
        if group == "so3":
            return HeckeElement.basis(N, OrthoDoubleCosetLabel(p, (1, p, p * p)))
        return HeckeElement.basis(N, prime_power_label(p, 1, 1 if t[:2] == "T1" else 0))
    if t.startswith("W") and t[1:].isdigit():
        if group != "param":
            raise ParseError("W_d operands need --group param")
        return sp.sigma_W(N, int(t[1:]))
    data = _read_json(t)
    if isinstance(data, dict) and "terms" in data:
        return HeckeElement.from_json(data)
    if group == "param":
        return HeckeElement.basis(N, sp.ParamodCosetLabel.from_json(data), "param")
    return HeckeElement.basis(N, OrthoDoubleCosetLabel.from_json(data))


# ---------------------------------------------------------------------------
# output


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=1))
    else:
        print(text)


def _matrix_text(mat: IntMat) -> str:
    return "\n".join("  [" + " ".join(f"{x:>4}" for x in r) + " ]" for r in mat.rows)


def _bound(args) -> EnumerationBound | None:
    if args.bound is None:
        return None
    if int(args.bound) < 1:
        raise ParseError("bound must be at least 1")
    return EnumerationBound(max_m=int(args.bound))


# ---------------------------------------------------------------------------
# commands


def cmd_canon(args) -> int:
    data = _read_json(args.element)
    if args.group in ("so3", "so5"):
        e = parse_ortho(data, args, 3 if args.group == "so3" else 5)
        lab = double_coset_canonical(e)
        form = right_coset_canonical(e)
        rc = form.matrix(e.N)
        payload = {
            "group": args.group,
            "label": lab.to_json(),
            "right_coset": {"N": str(e.N), "dim": str(e.dim), "denom": str(e.denom), "mat": [[str(x) for x in r] for r in rc.rows]},
            "double_coset": lab.representative(e.form).to_json(),
        }
        text = f"double coset {lab}\nright coset representative (1/{e.denom}) *\n{_matrix_text(rc)}"
    elif args.group == "param-star":
        M = parse_symp(data, args)
        lab = sp.sigma_star_canonical(M)
        rep = lab.representative(M.N)
        payload = {"group": args.group, "label": lab.to_json(), "representative": rep.to_json()}
        text = f"Sigma* double coset {lab}\nrepresentative (1/sqrt {rep.scale}) *\n{_matrix_text(rep.mat)}"
    else:
        M = parse_symp(data, args)
        lab = sp.sigma_canonical(M)
        rep = lab.representative(M.N)
        payload = {"group": args.group, "label": lab.to_json(), "nu": str(sp.nu(M)), "representative": rep.to_json()}
        text = f"Sigma double coset {lab}, nu = {sp.nu(M)}\nrepresentative (1/sqrt {rep.scale}) *\n{_matrix_text(rep.mat)}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_cosets(args) -> int:
    if args.level is None or args.prime is None:
        raise ParseError("cosets needs -N and -p")
    N, p = int(args.level), int(args.prime)
    Level(N)
    if not is_prime(p):
        raise ParseError(f"{p} is not prime")
    cache = TableCache(args.cache_dir)
    lab = prime_power_label(p, 1, 1 if args.which == "T1" else 0)
    table, path = cache.get(N, lab, _bound(args), args.jobs)
    count = table.count
    if args.group == "param":
        plab = sp.ParamodCosetLabel(1, 1, 1, p) if args.which == "T1" else sp.ParamodCosetLabel(1, 1, p, 1)
        count = sp.sigma_coset_count(plab, N, _bound(args))
    payload = {"N": str(N), "p": str(p), "which": args.which, "group": args.group, "count": str(count), "cache": str(path)}
    _emit(args, payload, f"{args.which}({p}) at N={N} [{args.group}]: {count} right cosets\ncache: {path}")
    return EXIT_OK


def cmd_mul(args) -> int:
    ops = [parse_operand(t, args, args.group) for t in args.operands]
    if args.cache_dir or _env("CACHE_DIR"):
        cache = TableCache(args.cache_dir)
        for x in ops:
            if x.kind == "so5":
                for lab, _ in x.items():
                    cache.get(x.N, lab, _bound(args), args.jobs)
    out = ops[0]
    for x in ops[1:]:
        out = multiply(out, x, _bound(args))
    text = " + ".join(f"{c} * [{lab}]" for lab, c in out.items()) or "0"
    _emit(args, out.to_json(), text)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suite

    if args.level is not None:
        Level(int(args.level))
    results = run_suite(seed=args.seed, samples=args.samples)
    failed = [r for r in results if not r.passed]
    if args.format == "json":
        payload = {
            "passed": not failed,
            "criteria": [
                {
                    "criterion": str(r.number),
                    "title": r.title,
                    "passed": r.passed,
                    "error": r.error,
                    "rows": [
                        {"item": row.item, "expected": row.expected, "computed": row.computed, "ok": row.ok}
                        for row in r.rows
                    ],
                }
                for r in results
            ],
        }
        print(json.dumps(payload, indent=1, default=str))
    else:
        for r in results:
            print(f"[{'PASS' if r.passed else 'FAIL'}] criterion {r.number}: {r.title}")
            for row in r.rows:
                exp, got = _short(row.expected), _short(row.computed)
                print(f"    {'ok ' if row.ok else 'BAD'} {row.item}: expected {exp}, computed {got}")
            if r.error:
                print(f"    error: {r.error}")
    if failed:
        print(f"first failing claim: criterion {failed[0].number}: {failed[0].first_failure()}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _short(x) -> str:
    s = json.dumps(x, default=str) if isinstance(x, (dict, list)) else str(x)
    return s if len(s) <= 60 else s[:57] + "..."


def cmd_map(args) -> int:
    data = _read_json(args.element)
    if args.direction == "sp2so":
        M = parse_symp(data, args)
        e = sp.to_orthogonal(M)
        _emit(args, e.to_json(), f"(1/{e.denom}) *\n{_matrix_text(e.mat)}")
    else:
        e = parse_ortho(data, args, 5)
        try:
            M = sp.from_orthogonal(e)
        except ValueError as exc:
            raise MembershipError(str(exc)) from None
        _emit(args, M.to_json(), f"(1/sqrt {M.scale}) *\n{_matrix_text(M.mat)}")
    return EXIT_OK


COMMANDS = {"canon": cmd_canon, "cosets": cmd_cosets, "mul": cmd_mul, "verify": cmd_verify, "map": cmd_map}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.level is not None:
            args.level = int(args.level)
            Level(args.level)
        return COMMANDS[args.command](args)
    except NotSquarefreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LEVEL
    except BoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except MembershipError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MEMBERSHIP
    except ArithmeticError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ParseError, ValueError, KeyError, TypeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
