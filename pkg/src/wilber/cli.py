"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 internal consistency failure
(oracle or identity mismatch), 3 property violation found by ``verify``.

Outputs go to ``--out`` (stdout when omitted). A relative ``--out`` is placed
under ``$WILBER_OUTPUT_DIR`` when that variable is set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .amplification import BASES, AmplifierConfig, amplification_report, amplify
from .bounds import (
    BRUTEFORCE_MAX_KEYS,
    alt_bruteforce,
    alt_exact,
    alt_for_tree,
    funnel_bound,
    funnel_bound_oracle,
)
from .composition import compose, read_composition
from .sequences import (
    format_sequence,
    gen_bit_reversal,
    gen_random,
    gen_sequential,
    geometric_view,
    pad_uniform,
    read_sequence,
)
from .tango import ConsistencyError, TangoTreeK
from .trees import format_tree, read_tree
from .verify import VERIFIERS, verify_amplified_funnel

EXIT_OK, EXIT_USAGE, EXIT_CONSISTENCY, EXIT_VIOLATION = 0, 1, 2, 3
OUTPUT_DIR_ENV = "WILBER_OUTPUT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational(x: Fraction | int | None) -> str | None:
    return None if x is None else str(Fraction(x))


def _output_path(out: str | None) -> Path | None:
    if out is None:
        return None
    path = Path(out)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _emit(text: str, out: str | None) -> None:
    path = _output_path(out)
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def _report(command: str, inputs: dict, results: dict, constants: dict | None = None) -> str:
    doc = {
        "command": command,
        "inputs": inputs,
        "results": results,
        "measured_constants": constants or {},
        "version": __version__,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- commands ------------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.kind in ("sequential", "bitrev") and args.m is not None:
        raise UsageError(f"--m does not apply to {args.kind}")
    if args.kind == "sequential":
        seq = gen_sequential(args.n)
    elif args.kind == "bitrev":
        seq = gen_bit_reversal(args.n)
    else:
        if args.m is None:
            raise UsageError(f"{args.kind} needs --m")
        seq = gen_random(args.n, args.m, args.seed)
        if args.kind == "padded-random":
            seq = pad_uniform(seq)
    _emit(format_sequence(seq), args.out)
    return EXIT_OK


def cmd_bound(args) -> int:
    seq = read_sequence(args.input)
    if args.mode == "alt-tree" and args.tree is None:
        raise UsageError("alt-tree needs --tree")
    P = geometric_view(seq)
    m = len(seq)
    results: dict = {"m": m}
    mismatches = []

    def amortized(v):
        return _rational(Fraction(v, m)) if m else None

    if args.mode in ("alt-exact", "all"):
        value, tree = alt_exact(P)
        results["alt_exact"] = value
        results["amortized_alt_exact"] = amortized(value)
        results["alt_tree_witness"] = format_tree(tree)
        if args.oracle:
            if len(P.xs) <= BRUTEFORCE_MAX_KEYS:
                brute = alt_bruteforce(P)
                results["alt_bruteforce"] = brute
                if brute != value:
                    mismatches.append(f"alt_exact={value} but alt_bruteforce={brute}")
            else:
                results["alt_bruteforce"] = None
    if args.mode == "alt-tree" or (args.mode == "all" and args.tree is not None):
        value = alt_for_tree(P, read_tree(args.tree))
        results["alt_tree"] = value
        results["amortized_alt_tree"] = amortized(value)
    if args.mode in ("funnel", "all"):
        value = funnel_bound(P)
        results["funnel"] = value
        results["amortized_funnel"] = amortized(value)
        if args.oracle:
            oracle = funnel_bound_oracle(P)
            results["funnel_oracle"] = oracle
            if oracle != value:
                mismatches.append(f"funnel_bound={value} but funnel_bound_oracle={oracle}")

    inputs = {"input": str(args.input), "mode": args.mode, "oracle": args.oracle,
              "tree": None if args.tree is None else str(args.tree)}
    _emit(_report("bound", inputs, results), args.out)
    for msg in mismatches:
        print(f"consistency failure: {msg}", file=sys.stderr)
    return EXIT_CONSISTENCY if mismatches else EXIT_OK


def cmd_compose(args) -> int:
    _emit(format_sequence(compose(read_composition(args.input))), args.out)
    return EXIT_OK


def cmd_amplify(args) -> int:
    cfg = AmplifierConfig(args.n, args.R, BASES[args.base], args.min_leaf_universe)
    _emit(format_sequence(amplify(cfg)), args.out)
    return EXIT_OK


def cmd_tango(args) -> int:
    seq = read_sequence(args.input)
    n = args.n if args.n is not None else seq.universe_size
    tree = TangoTreeK(n, args.k)
    cost = tree.run(seq)
    results = {
        "n": n,
        "k": args.k,
        "m": cost.m,
        "levels": tree.num_levels,
        "level_heights": tree.level_heights,
        "alt_tree": cost.alt_tree,
        "total_alternations": cost.total_alternations,
        "total_node_touches": cost.total_touches,
        "total_restructure_ops": cost.total_restructure_ops,
        "total_initializations": sum(s.initializations for s in cost.per_access),
        "amortized_node_touches": _rational(cost.amortized_touches),
        "budget": cost.budget,
    }
    if args.per_access:
        results["per_access"] = [
            {
                "key": s.key,
                "level_alternations": s.level_alternations,
                "node_touches": s.node_touches,
                "restructure_ops": s.restructure_ops,
                "initializations": s.initializations,
            }
            for s in cost.per_access
        ]
    constants = {
        "touch_constant": cost.measured_constant,
        "per_access_touch_constant": cost.max_access_constant,
    }
    inputs = {"input": str(args.input), "k": args.k, "n": n}
    _emit(_report("tango", inputs, results, constants), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.what == "tango-identity":
        if args.n:
            sizes = tuple(args.n)
        else:
            sizes = (8, 16, 32)
        m_factor = 10
        if args.m is not None:
            if len(sizes) != 1:
                raise UsageError("--m needs exactly one --n")
            if args.m % sizes[0]:
                raise UsageError("--m must be a multiple of --n")
            m_factor = args.m // sizes[0]
        report = VERIFIERS["tango-identity"](trials=args.trials, sizes=sizes,
                                             m_factor=m_factor, seed=args.seed)
        inputs = {"sizes": list(sizes), "m_factor": m_factor}
    else:
        report = VERIFIERS[args.what](trials=args.trials, max_l=args.max_l, width=args.width,
                                      max_mj=args.max_mj, seed=args.seed)
        inputs = {"max_l": args.max_l, "width": args.width, "max_mj": args.max_mj}
        if args.what == "directsum" and args.amplified:
            verify_amplified_funnel(args.amplified, report=report)
            inputs["amplified"] = args.amplified
    inputs.update({"what": args.what, "trials": args.trials, "seed": args.seed})
    results = {
        "trials": report.trials,
        "failures": report.failures,
        "max_alt_slack_per_m": _rational(report.max_alt_slack_per_m),
        "min_funnel_margin": report.min_funnel_margin,
        "unclassified_alternations": report.unclassified_alternations,
        "counterexamples": report.counterexamples,
    }
    constants = {}
    for key, value in report.extra.items():
        (constants if isinstance(value, float) else results)[key] = value
    _emit(_report("verify", inputs, results, constants), args.out)
    if not report.ok:
        for ce in report.counterexamples:
            print(f"violation: {json.dumps(ce, sort_keys=True)}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_experiment(args) -> int:
    rows = amplification_report(args.n, args.R, BASES[args.base], args.min_leaf_universe)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["R", "m", "alt", "funnel", "amortized_alt", "amortized_funnel"])
    for row in rows:
        writer.writerow([row.R, row.m, row.alt, row.funnel,
                         _rational(row.amortized_alt), _rational(row.amortized_funnel)])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wilber", description="Wilber bounds, compositions and Tango-style trees.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate an access sequence")
    g.add_argument("kind", choices=["sequential", "bitrev", "random", "padded-random"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bound", help="compute lower bounds of a sequence file")
    b.add_argument("input")
    b.add_argument("--mode", choices=["alt-exact", "alt-tree", "funnel", "all"], default="all")
    b.add_argument("--tree", help="reference tree file for alt-tree")
    b.add_argument("--oracle", action="store_true", help="cross-check with the slow oracles")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bound)

    c = sub.add_parser("compose", help="compose a sequence from a composition file")
    c.add_argument("input")
    c.add_argument("--out")
    c.set_defaults(func=cmd_compose)

    a = sub.add_parser("amplify", help="build an amplified sequence")
    a.add_argument("--base", choices=sorted(BASES), default="bitrev")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--R", type=int, required=True)
    a.add_argument("--min-leaf-universe", type=int, default=2)
    a.add_argument("--out")
    a.set_defaults(func=cmd_amplify)

    t = sub.add_parser("tango", help="serve a sequence file with a level-k Tango tree")
    t.add_argument("input")
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--n", type=int, help="universe size (defaults to the file's n)")
    t.add_argument("--per-access", action="store_true", help="include per-access statistics")
    t.add_argument("--out")
    t.set_defaults(func=cmd_tango)

    v = sub.add_parser("verify", help="randomized property checks")
    v.add_argument("what", choices=sorted(VERIFIERS))
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--n", type=int, action="append", help="tango-identity: universe size (repeatable)")
    v.add_argument("--m", type=int, help="tango-identity: sequence length")
    v.add_argument("--max-l", type=int, default=4)
    v.add_argument("--width", type=int, default=4)
    v.add_argument("--max-mj", type=int, default=16)
    v.add_argument("--amplified", type=int, default=0, metavar="N",
                   help="directsum: also check every level of the amplified sequences on N keys")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="tables of bounds against amplification depth")
    e.add_argument("table", choices=["tradeoff"])
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--R", type=int, nargs="+", required=True)
    e.add_argument("--base", choices=sorted(BASES), default="bitrev")
    e.add_argument("--min-leaf-universe", type=int, default=2)
    e.add_argument("--out")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
