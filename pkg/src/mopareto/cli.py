"""Command-line surface: generate, compute, verify, minimize, lift, stats.

Machine-readable results go to stdout or --out; human-readable summaries go
to stderr.  Exit codes: 0 success, 2 usage error, 3 malformed input file,
4 verification failure, 5 exact-solver limit exceeded.
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

from .constructors import (
    UnsupportedRelationError,
    VerificationFailed,
    construct_grid_approx,
    construct_via_gap,
    verify_approximation,
    weakly_efficient_lift,
)
from .dominance import domination_digraph, efficient_set, weakly_efficient_set
from .domsets import (
    DEFAULT_NODE_LIMIT,
    NodeLimitExceeded,
    exact_min_dominating_set,
    greedy_cover_dominating_set,
    greedy_tournament_dominating_set,
    tournament_view,
)
from .generators import (
    gen_antichain,
    gen_duplicated,
    gen_prop_dominated,
    gen_prop_one_exact,
    gen_quasi2_gap,
    gen_random,
)
from .grid import bucket, diagonal_of, filter_weakly_nondominated_cells
from .model import (
    FormatError,
    Instance,
    RelationKind,
    RelationSpec,
    derive_value_bound,
    load_instance,
    load_set,
    save_instance,
    save_set,
)
from .numerics import parse_rational, render_rational
from .oracles import gap_oracle

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BAD_INPUT = 3
EXIT_UNVERIFIED = 4
EXIT_LIMIT = 5

LIMIT_ENV = "MOPARETO_EXACT_LIMIT"


class UsageError(Exception):
    pass


def _say(message: str) -> None:
    print(message, file=sys.stderr)


def _read_instance(path: str) -> Instance:
    return load_instance(Path(path).read_bytes())


def _write_payload(out: str | None, payload: bytes) -> None:
    if out is None:
        sys.stdout.write(payload.decode())
        return
    target = Path(out)
    tmp = target.with_name(target.name + ".tmp")
    tmp.write_bytes(payload)
    os.replace(tmp, target)


def _relation_from_args(args: argparse.Namespace) -> RelationSpec:
    kind = RelationKind(args.relation)
    k = getattr(args, "k", None)
    if kind in (RelationKind.QUASI_K, RelationKind.ONE_EXACT_QUASI_K):
        if k is None:
            raise UsageError(f"--k is required for --relation {kind.value}")
    elif k is not None:
        raise UsageError(f"--k is not accepted for --relation {kind.value}")
    try:
        return RelationSpec(kind=kind, eps=args.eps, k=k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _node_limit(args: argparse.Namespace) -> int:
    if getattr(args, "limit", None) is not None:
        return args.limit
    env = os.environ.get(LIMIT_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{LIMIT_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_NODE_LIMIT


def _cmd_gen(args: argparse.Namespace) -> int:
    family = args.family
    if family == "prop-dominated":
        instance = gen_prop_dominated(args.eps)
    elif family == "prop-one-exact":
        instance = gen_prop_one_exact(args.delta, args.n, eps=args.eps)
    elif family == "quasi2-gap":
        instance = gen_quasi2_gap(args.eps, args.n)
    elif family == "duplicated":
        base = _read_instance(args.base)
        instance = gen_duplicated(base, args.p, args.mode.replace("-", "_"))
    elif family == "antichain":
        instance = gen_antichain(args.n)
    else:
        instance = gen_random(args.n, args.p, args.seed, args.value_range)
    _write_payload(args.out, save_instance(instance))
    _say(f"generated {family}: {len(instance)} solutions, p={instance.p}")
    return EXIT_OK


def _compute_members(args: argparse.Namespace, instance: Instance, spec: RelationSpec):
    algo = args.algo
    if algo == "grid":
        return construct_grid_approx(instance, spec)
    if algo == "greedy-cover":
        graph = domination_digraph(instance, spec)
        return sorted(greedy_cover_dominating_set(graph), key=instance.position)
    if algo == "gap":
        if spec.kind is not RelationKind.EPSILON:
            raise UsageError("--algo gap computes plain epsilon approximation sets")
        m = derive_value_bound(instance)
        found = construct_via_gap(
            lambda q: gap_oracle(instance, q), spec.eps, m, instance.p
        )
        return [s.id for s in found]
    # biobjective sweeps
    from .oracles import dual_restrict_2approx, greedy_biobjective_min

    if instance.p != 2:
        raise UsageError(f"--algo {algo} requires a biobjective instance")
    if algo == "bi-greedy":
        return list(greedy_biobjective_min(instance, spec.eps).members)
    return list(dual_restrict_2approx(instance, spec.eps).members)


def _cmd_compute(args: argparse.Namespace) -> int:
    spec = _relation_from_args(args)
    instance = _read_instance(args.instance)
    computed = _compute_members(args, instance, spec)
    if isinstance(computed, list):
        result = verify_approximation(instance, computed, spec)
        if not result.ok:
            print(result.counterexample)
            _say(
                f"computed set fails {spec.kind.value} verification at solution "
                f"{result.counterexample!r}"
            )
            return EXIT_UNVERIFIED
        aset = result.approximation
    else:
        aset = computed  # grid pipeline verifies internally
    assert aset is not None
    _write_payload(args.out, save_set(aset))
    _say(f"{args.algo}: {len(aset.members)} members cover {len(instance)} solutions")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    spec = _relation_from_args(args)
    instance = _read_instance(args.instance)
    aset = load_set(Path(args.set).read_bytes())
    try:
        result = verify_approximation(instance, aset.members, spec)
    except KeyError as exc:
        raise FormatError(f"set file: {exc.args[0]}") from None
    if not result.ok:
        print(result.counterexample)
        _say(f"NOT a valid set: solution {result.counterexample!r} is uncovered")
        return EXIT_UNVERIFIED
    assert result.approximation is not None
    _write_payload(args.out, save_set(result.approximation))
    _say(f"verified: {len(aset.members)} members cover {len(instance)} solutions")
    return EXIT_OK


def _cmd_min(args: argparse.Namespace) -> int:
    spec = _relation_from_args(args)
    instance = _read_instance(args.instance)
    graph = domination_digraph(instance, spec)
    members = exact_min_dominating_set(graph, node_limit=_node_limit(args))
    print(len(members))
    ordered = sorted(members, key=instance.position)
    _say(f"minimum {spec.kind.value} set ({len(members)}): {' '.join(ordered)}")
    return EXIT_OK


def _cmd_lift(args: argparse.Namespace) -> int:
    instance = _read_instance(args.instance)
    aset = load_set(Path(args.set).read_bytes())
    try:
        lifted = weakly_efficient_lift(instance, aset.members, args.eps)
    except KeyError as exc:
        raise FormatError(f"set file: {exc.args[0]}") from None
    except VerificationFailed as exc:
        print(exc.counterexample)
        _say(f"input set fails epsilon coverage at solution {exc.counterexample!r}")
        return EXIT_UNVERIFIED
    _write_payload(args.out, save_set(lifted))
    _say(f"lifted to {len(lifted.members)} weakly efficient members")
    return EXIT_OK


def _stats_row(
    args: argparse.Namespace, instance: Instance, eps: Fraction
) -> dict[str, object]:
    kind = RelationKind(args.relation)
    k = getattr(args, "k", None)
    spec = RelationSpec(kind, eps, k)
    bucketing = bucket(instance, eps)
    retained = filter_weakly_nondominated_cells(bucketing)
    row: dict[str, object] = {
        "eps": render_rational(eps),
        "nonempty_cells": len(bucketing.cells),
        "retained_cells": len(retained),
        "nonempty_diagonals": len({diagonal_of(c) for c in bucketing.cells}),
    }
    constructible = kind in (RelationKind.EPSILON, RelationKind.ONE_EXACT) or (
        kind is RelationKind.QUASI_K and k is not None and 2 * k - 1 <= instance.p
    )
    if constructible:
        cell_sizes = []
        members: set[str] = set()
        for cell in sorted(retained):
            ids = bucketing.cells[cell]
            if kind is RelationKind.QUASI_K:
                view = tournament_view([instance.solution(i) for i in ids], k)
                picked = greedy_tournament_dominating_set(view)
            else:
                picked = {
                    min(ids, key=lambda i: (instance.solution(i).f, instance.position(i)))
                }
            cell_sizes.append(len(picked))
            members |= picked
        row["grid_members"] = len(members)
        row["max_cell_set"] = max(cell_sizes) if cell_sizes else 0
    else:
        # no general grid construction for this relation kind
        row["grid_members"] = None
        row["max_cell_set"] = None
    if args.exact:
        limit = _node_limit(args)
        graph = domination_digraph(instance, spec)
        row["exact_min"] = len(exact_min_dominating_set(graph, node_limit=limit))
        eps_graph = domination_digraph(instance, RelationSpec(RelationKind.EPSILON, eps))
        row["exact_min_epsilon"] = len(exact_min_dominating_set(eps_graph, node_limit=limit))
    return row


def _cmd_stats(args: argparse.Namespace) -> int:
    kind = RelationKind(args.relation)
    if kind in (RelationKind.QUASI_K, RelationKind.ONE_EXACT_QUASI_K) and args.k is None:
        raise UsageError(f"--k is required for --relation {kind.value}")
    instance = _read_instance(args.instance)
    if kind is RelationKind.QUASI_K and args.k is not None:
        if 2 * args.k - 1 > instance.p:
            raise UsageError(
                f"per-cell selection needs 2k-1 <= p; got k={args.k}, p={instance.p}"
            )
    summary = {
        "n": len(instance),
        "p": instance.p,
        "value_bound": derive_value_bound(instance),
        "efficient": len(efficient_set(instance)),
        "weakly_efficient": len(weakly_efficient_set(instance)),
    }
    rows = [_stats_row(args, instance, eps) for eps in args.eps]
    if args.csv:
        columns = list(summary) + list(rows[0])
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns)
        writer.writeheader()
        for row in rows:
            writer.writerow({**summary, **row})
        _write_payload(args.out, buf.getvalue().encode())
    else:
        payload = json.dumps({"instance": summary, "grids": rows}, indent=2) + "\n"
        _write_payload(args.out, payload.encode())
    _say(f"stats over {len(rows)} eps value(s) for n={len(instance)}, p={instance.p}")
    return EXIT_OK


def _add_relation_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--relation",
        required=True,
        choices=[kind.value for kind in RelationKind],
        help="approximate-dominance relation",
    )
    parser.add_argument("--eps", type=parse_rational, required=True, help="rational eps > 0")
    parser.add_argument("--k", type=int, help="exact-component count for quasi-k kinds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mopareto",
        description="Exact partially exact approximation sets for explicit multiobjective instances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance file")
    gen_sub = gen.add_subparsers(dest="family", required=True)
    g = gen_sub.add_parser("prop-dominated", help="six-point dominated-cover family")
    g.add_argument("--eps", type=parse_rational, required=True)
    g = gen_sub.add_parser("prop-one-exact", help="first-component-exact chain family")
    g.add_argument("--delta", type=parse_rational, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--eps", type=parse_rational, help="optional cross-check: (1+delta)^(2n)-1")
    g = gen_sub.add_parser("quasi2-gap", help="three-objective cardinality-gap family")
    g.add_argument("--eps", type=parse_rational, required=True)
    g.add_argument("--n", type=int, required=True)
    g = gen_sub.add_parser("duplicated", help="lift a biobjective instance by duplicating objectives")
    g.add_argument("--base", required=True, help="biobjective instance file")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--mode", required=True, choices=["one-exact-quasi2", "quasi-k-over-half"])
    g = gen_sub.add_parser("antichain", help="pairwise nondominated diagonal")
    g.add_argument("--n", type=int, required=True)
    g = gen_sub.add_parser("random", help="seeded random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--value-range", type=int, default=4, dest="value_range")
    for g_parser in gen_sub.choices.values():
        g_parser.add_argument("-o", "--out", help="output file (default: stdout)")
    gen.set_defaults(func=_cmd_gen)

    compute = sub.add_parser("compute", help="construct an approximation set")
    _add_relation_flags(compute)
    compute.add_argument(
        "--algo",
        required=True,
        choices=["grid", "greedy-cover", "gap", "bi-greedy", "bi-dual2"],
    )
    compute.add_argument("-i", "--instance", required=True)
    compute.add_argument("-o", "--out", help="output set file (default: stdout)")
    compute.set_defaults(func=_cmd_compute)

    verify = sub.add_parser("verify", help="verify a set file against an instance")
    _add_relation_flags(verify)
    verify.add_argument("-i", "--instance", required=True)
    verify.add_argument("--set", required=True, dest="set")
    verify.add_argument("-o", "--out", help="write the re-certified set here")
    verify.set_defaults(func=_cmd_verify)

    minimum = sub.add_parser("min", help="exact minimum cardinality (guarded)")
    _add_relation_flags(minimum)
    minimum.add_argument("-i", "--instance", required=True)
    minimum.add_argument("--limit", type=int, help=f"node limit (default {DEFAULT_NODE_LIMIT}, or ${LIMIT_ENV})")
    minimum.set_defaults(func=_cmd_min)

    lift = sub.add_parser("lift", help="replace dominated members by weakly efficient dominators")
    lift.add_argument("--eps", type=parse_rational, required=True)
    lift.add_argument("-i", "--instance", required=True)
    lift.add_argument("--set", required=True, dest="set")
    lift.add_argument("-o", "--out", help="output set file (default: stdout)")
    lift.set_defaults(func=_cmd_lift)

    stats = sub.add_parser("stats", help="grid, efficiency, and cardinality statistics")
    stats.add_argument("--eps", type=parse_rational, required=True, nargs="+")
    stats.add_argument(
        "--relation",
        default=RelationKind.EPSILON.value,
        choices=[kind.value for kind in RelationKind],
    )
    stats.add_argument("--k", type=int)
    stats.add_argument("--exact", action="store_true", help="include exact minimum cardinalities")
    stats.add_argument("--csv", action="store_true", help="emit a plot-ready CSV table")
    stats.add_argument("--limit", type=int)
    stats.add_argument("-i", "--instance", required=True)
    stats.add_argument("-o", "--out", help="output file (default: stdout)")
    stats.set_defaults(func=_cmd_stats)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _say(f"usage error: {exc}")
        return EXIT_USAGE
    except UnsupportedRelationError as exc:
        _say(f"usage error: {exc}")
        return EXIT_USAGE
    except NodeLimitExceeded as exc:
        _say(f"exact-solver limit: {exc}")
        return EXIT_LIMIT
    except FormatError as exc:
        _say(f"bad input file: {exc}")
        return EXIT_BAD_INPUT
    except FileNotFoundError as exc:
        _say(f"bad input file: {exc}")
        return EXIT_BAD_INPUT
    except ValueError as exc:
        _say(f"usage error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
