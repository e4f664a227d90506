"""``zhcount`` command line.

Exit codes: 0 success, 2 usage or input errors, 3 verification failure,
4 a size bound was exceeded.  Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Sequence

from . import instances
from .diagram import contract, diagram_to_json, load_diagram
from .errors import BoundExceededError, FormatError, PreconditionError
from .evalzh import eval_via_counting, fragment_of
from .formula import ENUMERATION_BOUND, count_sat, emit_dimacs, parse_dimacs
from .perm import DEFAULT_GADGET, WeightedDigraph, build_permanent_graph, default_gadget, gadget_search, permanent_ryser
from .reduce import load_cert, parse_targets, pipeline, verify_cert
from .zw import emit_xsat, parse_xsat, xsat_count, xsat_to_cnf, xsat_to_perfect_matchings

EXIT_USAGE = 2
EXIT_VERIFY = 3
EXIT_BOUND = 4


class _Fail(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def write_atomic(path: str | Path, data: bytes) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode()


def _emit(data: bytes, out: str | None) -> None:
    if out:
        write_atomic(out, data)
    else:
        sys.stdout.write(data.decode())


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise _Fail(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from exc


# ---------------------------------------------------------------- commands


def cmd_count(a: argparse.Namespace) -> int:
    f = parse_dimacs(_read(a.file))
    n = count_sat(f, a.max_n)
    print(n % a.mod if a.mod else n)
    return 0


def _mode(a: argparse.Namespace):
    if a.exact:
        return "exact"
    if a.mod is None or a.mod < 1:
        raise _Fail(EXIT_USAGE, "give --exact or --mod M with M >= 1")
    return a.mod


def cmd_reduce(a: argparse.Namespace) -> int:
    f = parse_dimacs(_read(a.file))
    g, chain = pipeline(f, parse_targets(a.targets), _mode(a))
    write_atomic(a.output, emit_dimacs(g))
    write_atomic(a.cert, _json_bytes(chain.to_json()))
    print(f"{g.num_vars} variables, {g.num_clauses} clauses, relation {chain.composed.relation}", file=sys.stderr)
    return 0


def cmd_verify(a: argparse.Namespace) -> int:
    orig = parse_dimacs(_read(a.orig))
    red = parse_dimacs(_read(a.reduced))
    cert = load_cert(_read(a.cert))
    ok = verify_cert(orig, red, cert, bound=a.max_n, fallback=a.elim)
    print("verified" if ok else "FAILED")
    return 0 if ok else EXIT_VERIFY


def cmd_perm_build(a: argparse.Namespace) -> int:
    f = parse_dimacs(_read(a.file))
    g = build_permanent_graph(f, default_gadget())
    _emit(_json_bytes(g.to_json()), a.output)
    return 0


def cmd_perm_eval(a: argparse.Namespace) -> int:
    g = WeightedDigraph.loads(_read(a.file))
    p = permanent_ryser(g.adjacency())
    m = len(g.gadget_blocks)
    out = {"permanent": p}
    if m or g.variable_vertices:
        num = p * (1 << g.isolated)
        if num % (4**m):
            raise _Fail(EXIT_VERIFY, f"permanent {p} is not divisible by 4^{m}")
        out["count"] = num // 4**m
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_perm_gadget(a: argparse.Namespace) -> int:
    g = gadget_search(a.range) if a.search else default_gadget()
    if a.search and g != DEFAULT_GADGET:
        print("note: search result differs from the embedded gadget", file=sys.stderr)
    print(json.dumps(g.to_json(), sort_keys=True))
    return 0


def cmd_xsat_count(a: argparse.Namespace) -> int:
    print(xsat_count(parse_xsat(_read(a.file)), a.max_n))
    return 0


def cmd_xsat_to_cnf(a: argparse.Namespace) -> int:
    _emit(emit_dimacs(xsat_to_cnf(parse_xsat(_read(a.file)))), a.output)
    return 0


def cmd_xsat_to_pm(a: argparse.Namespace) -> int:
    cert = xsat_to_perfect_matchings(parse_xsat(_read(a.file)))
    write_atomic(a.output, _json_bytes(cert.to_json()))
    print(f"g1: {cert.g1.n} vertices, g2: {cert.g2.n} vertices, modulus 2^{cert.num_vars + cert.c_exp}+1", file=sys.stderr)
    return 0


def cmd_eval(a: argparse.Namespace) -> int:
    d = load_diagram(_read(a.file))
    if d.boundary:
        raise _Fail(EXIT_USAGE, "eval needs a scalar diagram (empty boundary)")
    out = {"fragment": str(fragment_of(d))}
    values = {}
    if a.method in ("contract", "both"):
        values["contract"] = contract(d)
    if a.method in ("oracle", "both"):
        values["oracle"] = eval_via_counting(d)
    for name, v in values.items():
        out[name] = v.to_json()
    if a.method == "both":
        out["agree"] = values["contract"] == values["oracle"]
    print(json.dumps(out, sort_keys=True))
    if a.method == "both" and not out["agree"]:
        return EXIT_VERIFY
    return 0


def cmd_gen(a: argparse.Namespace) -> int:
    if a.kind == "cnf":
        data = emit_dimacs(instances.random_cnf(a.seed, a.n, a.m, a.max_size))
    elif a.kind == "mon2":
        data = emit_dimacs(instances.random_monotone_2cnf(a.seed, a.n, a.m))
    elif a.kind == "xsat":
        data = emit_xsat(instances.random_xsat(a.seed, a.n, a.m, a.max_size))
    else:
        data = _json_bytes(diagram_to_json(instances.random_zh(a.seed, a.level, a.n)))
    _emit(data, a.output)
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zhcount", description="Graphical counting reductions with certificates.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("count", help="count satisfying assignments of a DIMACS CNF")
    s.add_argument("file")
    s.add_argument("--mod", type=int, help="print the residue modulo M")
    s.add_argument("--max-n", type=int, default=ENUMERATION_BOUND, help="enumeration bound")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("reduce", help="apply reduction stages and write a certificate")
    s.add_argument("file")
    s.add_argument("--targets", required=True, help="comma list from pl,2sat,mon,bi,3deg")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--exact", action="store_true", help="choose moduli so counts are determined")
    g.add_argument("--mod", type=int, help="work modulo M")
    s.add_argument("-o", "--output", required=True, help="reduced DIMACS file")
    s.add_argument("--cert", required=True, help="certificate JSON file")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("verify", help="check a certificate by counting both formulas")
    s.add_argument("--orig", required=True)
    s.add_argument("--reduced", required=True)
    s.add_argument("--cert", required=True)
    s.add_argument("--max-n", type=int, default=ENUMERATION_BOUND, help="enumeration bound")
    s.add_argument("--elim", action="store_true", help="count beyond the bound by variable elimination")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("perm", help="monotone 2-CNF to permanent tools")
    ps = s.add_subparsers(dest="perm_cmd", required=True)
    t = ps.add_parser("build", help="cycle-cover graph of a monotone 2-CNF")
    t.add_argument("file")
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_perm_build)
    t = ps.add_parser("eval", help="permanent of a graph JSON and the implied count")
    t.add_argument("file")
    t.set_defaults(func=cmd_perm_eval)
    t = ps.add_parser("gadget", help="print the clause gadget")
    t.add_argument("--search", action="store_true", help="rerun the bounded search")
    t.add_argument("--range", type=int, default=1, help="initial weight range for --search")
    t.set_defaults(func=cmd_perm_gadget)

    s = sub.add_parser("xsat", help="exactly-one SAT tools")
    xs = s.add_subparsers(dest="xsat_cmd", required=True)
    t = xs.add_parser("count")
    t.add_argument("file")
    t.add_argument("--max-n", type=int, default=ENUMERATION_BOUND)
    t.set_defaults(func=cmd_xsat_count)
    t = xs.add_parser("to-cnf")
    t.add_argument("file")
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_xsat_to_cnf)
    t = xs.add_parser("to-pm", help="reduce to two perfect-matching instances")
    t.add_argument("file")
    t.add_argument("-o", "--output", required=True)
    t.set_defaults(func=cmd_xsat_to_pm)

    s = sub.add_parser("eval", help="evaluate a scalar ZH-diagram (JSON)")
    s.add_argument("file")
    s.add_argument("--method", choices=("contract", "oracle", "both"), default="both")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("gen", help="write a seeded random instance")
    s.add_argument("kind", choices=("cnf", "mon2", "xsat", "zh"))
    s.add_argument("--n", type=int, default=4, help="variables (nodes for zh)")
    s.add_argument("--m", type=int, default=4, help="clauses")
    s.add_argument("--max-size", type=int, default=3, help="largest clause")
    s.add_argument("--level", type=int, default=0, help="fragment level for zh")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)
    return p


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"zhcount: {exc}", file=sys.stderr)
        return exc.code
    except BoundExceededError as exc:
        print(f"zhcount: bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (FormatError, PreconditionError) as exc:
        print(f"zhcount: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
