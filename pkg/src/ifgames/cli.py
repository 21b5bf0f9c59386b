"""Command-line front end.

Subcommands: ``value``, ``condition``, ``corpus``, ``export``, ``simulate``,
``parse``.  Exit status 0 on success, 1 on any diagnostic, 2 when a node or
strategy budget is exceeded.  ``--format structured`` emits stable JSON
(same inputs and configuration give byte-identical output).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .corpus import run_corpus
from .errors import BudgetError, IfGameError
from .game import DEFAULT_NODE_CAP, build_semantic_game, export_dot
from .parser import (
    format_formula,
    parse_event,
    parse_extensive_game,
    parse_formula,
    parse_nature_strategy,
    parse_profile,
    parse_structure,
)
from .solver import (
    build_matrix,
    conditional_value,
    reduce_matrix,
    simulate,
    solve_zero_sum,
)
from .strategy import DEFAULT_STRATEGY_BUDGET, embedded_nature, uniform_nature


@dataclass
class RunConfig:
    node_cap: int = DEFAULT_NODE_CAP
    budget: int = DEFAULT_STRATEGY_BUDGET
    weak_dominance: bool = True
    seed: int = 0
    plays: int = 100_000
    fmt: str = "text"

    def __post_init__(self):
        if self.node_cap <= 0 or self.budget <= 0 or self.plays <= 0:
            raise IfGameError("caps, budgets and play counts must be positive")


def _frac(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}" if value.denominator != 1 \
        else str(value.numerator)


def _mix_payload(mix):
    return [
        {"mass": _frac(w), "strategy": list(s.lines())}
        for s, w in mix.support
    ]


def _load_game(args, config: RunConfig):
    """Resolve the positional inputs into (game, nature strategy)."""
    source = Path(args.input)
    if source.suffix == ".game":
        game = parse_extensive_game(source.read_text(), source.stem)
        if getattr(args, "nature", None) and args.nature != "uniform":
            lam = parse_nature_strategy(Path(args.nature).read_text(), game)
        else:
            lam = embedded_nature(game)
        return game, lam
    if not getattr(args, "structure", None):
        raise IfGameError("a formula input needs a structure file")
    phi = parse_formula(source.read_text())
    structure = parse_structure(Path(args.structure).read_text())
    game = build_semantic_game(structure, phi, config.node_cap)
    nature = getattr(args, "nature", None)
    if nature and nature != "uniform":
        lam = parse_nature_strategy(Path(nature).read_text(), game)
    else:
        lam = uniform_nature(game)
    return game, lam


def _solve(game, lam, config: RunConfig):
    matrix = build_matrix(game, lam, config.budget)
    reduced = reduce_matrix(matrix, config.weak_dominance)
    return solve_zero_sum(reduced), reduced


def _profile_for(args, game, lam, config: RunConfig):
    if getattr(args, "solve", False):
        eq, _ = _solve(game, lam, config)
        return eq.row_strategies(), eq.col_strategies()
    if not getattr(args, "profile", None):
        raise IfGameError("need --profile FILE or --solve")
    return parse_profile(Path(args.profile).read_text(), game)


def cmd_value(args, config: RunConfig) -> int:
    game, lam = _load_game(args, config)
    eq, reduced = _solve(game, lam, config)
    if config.fmt == "structured":
        payload = {
            "value": _frac(eq.value),
            "rows": _mix_payload(eq.row_strategies()),
            "cols": _mix_payload(eq.col_strategies()),
            "reduction": reduced.log,
        }
        print(json.dumps(payload, sort_keys=True, indent=2))
        return 0
    print(f"value = {_frac(eq.value)}")
    for side, mix in (("I", eq.row_strategies()), ("II", eq.col_strategies())):
        print(f"optimal mix for {side}:")
        for strategy, mass in mix.support:
            lines = strategy.lines()
            body = "; ".join(lines) if lines else "(no decisions)"
            print(f"  {_frac(mass)}  {body}")
    for line in reduced.log:
        print(f"reduction: {line}")
    return 0


def cmd_condition(args, config: RunConfig) -> int:
    game, lam = _load_game(args, config)
    row_mix, col_mix = _profile_for(args, game, lam, config)
    event = parse_event(args.event, game) if args.event else None
    result = conditional_value(game, lam, row_mix, col_mix, event)
    if config.fmt == "structured":
        payload = {
            "event": args.event or "true",
            "p_event": _frac(result.p_event),
            "p_win_and_event": _frac(result.p_win_and_event),
            "conditional_value": _frac(result.value),
        }
        print(json.dumps(payload, sort_keys=True, indent=2))
        return 0
    print(f"P(event) = {_frac(result.p_event)}")
    print(f"P(win and event) = {_frac(result.p_win_and_event)}")
    print(f"conditional value = {_frac(result.value)}")
    return 0


def cmd_corpus(args, config: RunConfig) -> int:
    results = run_corpus(args.filter, node_cap=config.node_cap,
                         budget=config.budget,
                         use_weak_dominance=config.weak_dominance)
    failed = [r for r in results if not r.passed]
    if config.fmt == "structured":
        payload = [
            {
                "entry": r.entry,
                "group": r.group,
                "check": r.label,
                "expected": _frac(r.expected),
                "got": None if r.got is None else _frac(r.got),
                "passed": r.passed,
                "error": r.error,
            }
            for r in results
        ]
        print(json.dumps(payload, sort_keys=True, indent=2))
        return 1 if failed else 0
    width = max((len(r.entry) for r in results), default=10) + 2
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        got = "error" if r.got is None else _frac(r.got)
        line = f"{status}  {r.entry:<{width}} {r.label}: " \
               f"expected {_frac(r.expected)}, got {got}"
        if r.error:
            line += f"  [{r.error}]"
        print(line)
    print(f"{len(results) - len(failed)}/{len(results)} corpus checks passed")
    return 1 if failed else 0


def cmd_export(args, config: RunConfig) -> int:
    game, _ = _load_game(args, config)
    text = export_dot(game)
    if args.output:
        Path(args.output).write_text(text)
    else:
        print(text, end="")
    return 0


def cmd_simulate(args, config: RunConfig) -> int:
    game, lam = _load_game(args, config)
    row_mix, col_mix = _profile_for(args, game, lam, config)
    events = {}
    for text in args.event or ():
        events[text] = parse_event(text, game)
    report = simulate(game, lam, row_mix, col_mix, config.plays, config.seed,
                      events)
    if config.fmt == "structured":
        payload = {
            "plays": report.plays,
            "seed": report.seed,
            "wins": report.wins,
            "win_frequency": _frac(report.win_frequency),
            "events": {
                name: {"hits": hits, "wins": wins}
                for name, (hits, wins) in report.event_counts.items()
            },
        }
        print(json.dumps(payload, sort_keys=True, indent=2))
        return 0
    print(f"plays = {report.plays}, seed = {report.seed}")
    print(f"wins = {report.wins}  (frequency {_frac(report.win_frequency)})")
    for name, (hits, wins) in report.event_counts.items():
        print(f"event {name}: hits = {hits}, wins among hits = {wins}")
    return 0


def cmd_parse(args, config: RunConfig) -> int:
    phi = parse_formula(Path(args.input).read_text())
    print(format_formula(phi))
    return 0


def build_arg_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ifgames",
        description="equilibrium values and conditional win probabilities of "
                    "independence-friendly sentences over finite structures",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, structure=True, nature=True):
        p.add_argument("input", help="formula (.if) or extensive game (.game) file")
        if structure:
            p.add_argument("structure", nargs="?",
                           help="structure (.struct) file, for formula inputs")
        if nature:
            p.add_argument("--nature", default=None, metavar="FILE|uniform",
                           help="chance player's behavioral strategy "
                                "(default: uniform)")
        p.add_argument("--budget", type=int, default=DEFAULT_STRATEGY_BUDGET,
                       help="reduced-strategy enumeration budget per player")
        p.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP,
                       help="game tree node cap")
        p.add_argument("--no-weak-dominance", action="store_true",
                       help="only merge duplicates and strict dominance")
        p.add_argument("--format", choices=("text", "structured"),
                       default="text")

    p = sub.add_parser("value", help="equilibrium value of a sentence or game")
    common(p)
    p.set_defaults(fn=cmd_value)

    p = sub.add_parser("condition",
                       help="conditional win probability under a profile")
    common(p)
    p.add_argument("--event", required=True, help="conditioning event")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--profile", help="profile file naming the mixes")
    group.add_argument("--solve", action="store_true",
                       help="condition the computed equilibrium profile")
    p.set_defaults(fn=cmd_condition)

    p = sub.add_parser("corpus", help="replay the bundled result corpus")
    p.add_argument("--filter", default=None,
                   help="only entries whose name contains this substring")
    p.add_argument("--budget", type=int, default=DEFAULT_STRATEGY_BUDGET)
    p.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
    p.add_argument("--no-weak-dominance", action="store_true")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(fn=cmd_corpus)

    p = sub.add_parser("export", help="write the game tree as Graphviz text")
    common(p, nature=False)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_export)

    p = sub.add_parser("simulate", help="Monte Carlo cross-check of a profile")
    common(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--profile")
    group.add_argument("--solve", action="store_true")
    p.add_argument("--plays", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--event", action="append",
                   help="event to tally (repeatable)")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("parse", help="echo a formula in canonical form")
    p.add_argument("input")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(fn=cmd_parse)
    return top


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        config = RunConfig(
            node_cap=getattr(args, "node_cap", DEFAULT_NODE_CAP),
            budget=getattr(args, "budget", DEFAULT_STRATEGY_BUDGET),
            weak_dominance=not getattr(args, "no_weak_dominance", False),
            seed=getattr(args, "seed", 0),
            plays=getattr(args, "plays", 100_000),
            fmt=getattr(args, "format", "text"),
        )
        return args.fn(args, config)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IfGameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
