"""Command-line interface.

Exit codes: 0 success / verified, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import verify as verify_mod
from .bch import BchRequest, compute
from .bernoulli import (
    bernoulli_b,
    bernoulli_table,
    format_rational,
    parse_rational,
    rational_to_json,
)
from .freealg import _latex_rational
from .posetted import (
    ChainPoset,
    NonMonotoneError,
    PosettedTree,
    enumerate_posetted,
    monotonicity_violation,
    power_sequence,
    subroot_factors,
)
from .trees import TreeSyntaxError, enumerate_trees, to_dot

ENGINE_ALIASES = {
    "posetted": "posetted",
    "posetted_reversed": "posetted_reversed",
    "posetted-reversed": "posetted_reversed",
    "reversed": "posetted_reversed",
    "recursive": "recursive",
    "dynkin": "dynkin",
    "log": "log_oracle",
    "log_oracle": "log_oracle",
    "log-oracle": "log_oracle",
    "star": "star",
}


class UsageError(Exception):
    pass


def parse_sequence(text: str | None):
    """``default`` -> b_n; ``h=2`` -> 2^n b_n; ``-1/2,0,...`` -> a_1, a_2, ...

    An explicit list is extended by b_n beyond its length.
    """
    if text is None or text == "default":
        return None
    if text.startswith("h="):
        return power_sequence(parse_rational(text[2:]))
    values = [parse_rational(v) for v in text.split(",")]

    def seq(n: int) -> Fraction:
        return values[n - 1] if 1 <= n <= len(values) else bernoulli_b(n)

    return seq


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {v}")
    return v


def _nonnegative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be a non-negative integer, got {v}")
    return v


def _write(out: str, path: str | None) -> None:
    if path:
        with open(path, "w") as f:
            f.write(out + "\n")
    else:
        print(out)


def cmd_expand(args) -> int:
    engine = ENGINE_ALIASES.get(args.engine)
    if engine is None:
        raise UsageError(f"unknown engine {args.engine!r}")
    if args.format == "dot":
        raise UsageError("dot output applies to the trees command")
    try:
        seq = parse_sequence(args.seq)
        req = BchRequest(
            letters=args.letters,
            max_degree=args.max_degree,
            engine=engine,
            restrict_to_C=args.restrict_c,
            seq=seq if engine == "star" else None,
            ledger=args.ledger,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None
    if seq is not None and engine != "star":
        raise UsageError("--seq applies to the star engine only")
    res = compute(req)
    if args.format == "text":
        out = res.series.to_text()
        if res.ledger is not None:
            rows = [f"{e.tree}\t{format_rational(e.coefficient)}\t{e.bracket}" for e in res.ledger]
            out = "\n".join(rows + [out])
    elif args.format == "json":
        obj = res.series.to_json_obj()
        obj["engine"] = engine
        if res.ledger is not None:
            obj["ledger"] = [e.to_json_obj() for e in res.ledger]
        out = json.dumps(obj, indent=2)
    else:
        out = _latex(res)
    _write(out, args.output)
    return 0


def _latex(res) -> str:
    if res.ledger is None:
        return res.series.to_latex()
    parts = []
    for e in res.ledger:
        c = e.coefficient
        body = e.bracket if isinstance(e.bracket, str) else e.bracket.to_latex()
        mag = abs(c)
        term = body if mag == 1 else f"{_latex_rational(mag)} {body}"
        sign = "-" if c < 0 else "+"
        parts.append(term if not parts and c > 0 else f"{sign} {term}")
    return " ".join(parts) if parts else "0"


def cmd_trees(args) -> int:
    if args.poset is not None:
        try:
            chain = ChainPoset.parse(args.poset)
        except ValueError as e:
            raise UsageError(str(e)) from None
        trees = [pt.labelled() for pt in enumerate_posetted(args.leaves, chain, args.binary)]
    else:
        trees = list(enumerate_trees(args.leaves, args.binary))
    if args.emit == "count":
        out = str(len(trees))
    elif args.emit == "list":
        out = "\n".join(str(t) for t in trees)
    else:
        out = "\n".join(to_dot(t, f"tree{i}") for i, t in enumerate(trees, 1))
    _write(out, args.output)
    return 0


def cmd_coeff(args) -> int:
    try:
        pt = PosettedTree.parse(args.tree)
        chain = ChainPoset.parse(args.poset)
        seq = parse_sequence(args.seq) or bernoulli_b
        bad = monotonicity_violation(pt.tree, pt.labels, chain)
    except (TreeSyntaxError, ValueError) as e:
        raise UsageError(str(e)) from None
    if bad is not None:
        l1, l2 = bad
        raise UsageError(str(NonMonotoneError(bad, (pt.labels[l1 - 1], pt.labels[l2 - 1]))))
    factors = subroot_factors(pt, seq)
    total = Fraction(1)
    for *_, f in factors:
        total *= f
    if args.format == "json":
        obj = {
            "tree": str(pt),
            "poset": str(chain),
            "coefficient": rational_to_json(total),
            "subroots": [
                {
                    "path": list(s.subroot),
                    "m": s.rightmost_leaf,
                    "d": s.distance,
                    "t": t,
                    "factor": rational_to_json(f),
                }
                for s, t, f in factors
            ],
        }
        out = json.dumps(obj, indent=2)
    else:
        lines = [format_rational(total)]
        for s, t, f in factors:
            path = "".join(map(str, s.subroot)) or "root"
            lines.append(f"subroot {path}: m={s.rightmost_leaf} d={s.distance} t={t} factor={format_rational(f)}")
        out = "\n".join(lines)
    _write(out, args.output)
    return 0


def cmd_verify(args) -> int:
    checks = verify_mod.run(args.suite, args.max_degree)
    if args.format == "json":
        out = json.dumps([c.to_json_obj() for c in checks], indent=2)
    else:
        rows = []
        for c in checks:
            row = f"{'PASS' if c.passed else 'FAIL'}\t{c.suite}\t{c.name}"
            if not c.passed and c.detail:
                row += "\t" + c.detail.replace("\n", " | ")
            rows.append(row)
        ok = all(c.passed for c in checks)
        rows.append(f"{'PASS' if ok else 'FAIL'}\t{len(checks)} checks")
        out = "\n".join(rows)
    _write(out, args.output)
    return 0 if all(c.passed for c in checks) else 1


def cmd_bernoulli(args) -> int:
    table = bernoulli_table(args.upto)
    if args.format == "json":
        out = json.dumps([rational_to_json(q) for q in table])
    else:
        out = "\n".join(f"{n}\t{format_rational(q)}" for n, q in enumerate(table))
    _write(out, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="posetbch",
        description="Baker-Campbell-Hausdorff product as a sum over posetted trees.",
    )
    p.add_argument("--threads", type=_positive, default=1, help="parallelism hint (unused)")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("expand", help="expand x0 • x1 • ... up to a degree")
    e.add_argument("--letters", type=_positive, default=2)
    e.add_argument("--max-degree", type=_positive, required=True)
    e.add_argument("--engine", default="posetted", help=", ".join(sorted(ENGINE_ALIASES)))
    e.add_argument("--restrict-c", action="store_true", help="sum only over the C subset")
    e.add_argument("--ledger", action="store_true", help="list every contributing tree")
    e.add_argument("--seq", help="star engine sequence: default | h=<q> | a1,a2,...")
    e.add_argument("--format", choices=("text", "json", "latex", "dot"), default="text")
    e.add_argument("--output", "-o")
    e.set_defaults(func=cmd_expand)

    t = sub.add_parser("trees", help="enumerate (posetted) planar trees")
    t.add_argument("--leaves", type=_positive, required=True)
    t.add_argument("--binary", action="store_true")
    t.add_argument("--poset", help='chain such as "b<=a"')
    t.add_argument("--emit", choices=("count", "list", "dot"), default="count")
    t.add_argument("--output", "-o")
    t.set_defaults(func=cmd_trees)

    c = sub.add_parser("coeff", help="coefficient of one posetted tree")
    c.add_argument("--tree", required=True)
    c.add_argument("--poset", default="b<=a")
    c.add_argument("--seq", default="default")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--output", "-o")
    c.set_defaults(func=cmd_coeff)

    v = sub.add_parser("verify", help="run identity suites")
    v.add_argument("--max-degree", type=_positive, required=True)
    v.add_argument("--suite", choices=("all",) + verify_mod.SUITES, default="all")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--output", "-o")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bernoulli", help="table of b_0..b_n")
    b.add_argument("--upto", type=_nonnegative, required=True)
    b.add_argument("--format", choices=("text", "json"), default="text")
    b.add_argument("--output", "-o")
    b.set_defaults(func=cmd_bernoulli)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"posetbch {args.command}: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
