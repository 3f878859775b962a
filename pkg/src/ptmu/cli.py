"""Command-line front end.

Reports are ``key=value`` lines; payloads (graphs, games, formulas) follow a
``---`` line.  Exit status: 0 success or property holds, 1 property fails or
nothing found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys

from .formula import FormulaSyntaxError, classify, parse, render
from .formula.transform import CaptureError, TranslationError
from .games import GameError, ParityGame, game_check, solve, walukiewicz
from .graph import (
    GraphError, LabeledGraph, abcd_grid, classify_graph, g5, path4, ptc, random_colored_graph,
)
from .reductions import ReductionError, bounded_sat, reduce_mc
from .semantics import SemanticsError, model_check

INPUT_ERRORS = (
    GraphError, GameError, FormulaSyntaxError, CaptureError, TranslationError,
    ReductionError, SemanticsError, OSError, ValueError,
)


class UsageError(Exception):
    pass


def _payload_text(path: str) -> str:
    """File contents; a ``key=value`` header ending in ``---`` is skipped."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if "---" in lines:
        lines = lines[lines.index("---") + 1:]
    return "\n".join(lines) + "\n"


def read_graph(path: str) -> LabeledGraph:
    return LabeledGraph.from_text(_payload_text(path))


def read_game(path: str) -> ParityGame:
    return ParityGame.from_text(_payload_text(path))


def _bool(b: bool) -> str:
    return "true" if b else "false"


def _emit(out, report: list[str], payload: str | None = None) -> None:
    for line in report:
        print(line, file=out)
    if payload is not None:
        print("---", file=out)
        out.write(payload)


def cmd_check(args, out) -> int:
    g = read_graph(args.graph)
    f = parse(args.formula)
    if args.vertex not in g.index:
        raise GraphError(f"no vertex {args.vertex!r}")
    results = {}
    if args.engine in ("direct", "both"):
        results["direct"] = model_check(g, args.vertex, f)
    if args.engine in ("game", "both"):
        results["game"] = game_check(g, args.vertex, f)
    if len(set(results.values())) > 1:
        raise UsageError(f"engines disagree: {results}")
    holds = next(iter(results.values()))
    print(_bool(holds), file=out)
    return 0 if holds else 1


def cmd_classify(args, out) -> int:
    _emit(out, classify_graph(read_graph(args.graph)).lines())
    return 0


def cmd_ptc(args, out) -> int:
    g = read_graph(args.graph)
    h = ptc(g)
    _emit(out, [f"added={h.edge_count - g.edge_count}"], h.to_text())
    return 0


def cmd_reduce(args, out) -> int:
    g = read_graph(args.graph)
    f = parse(args.formula)
    r = reduce_mc(g, args.vertex, f)
    report = [
        f"vertices={r.graph.n}",
        f"edges={r.graph.edge_count}",
        f"initial={r.initial}",
        f"formula={render(r.formula)}",
        f"cost_edges={r.cost['edges']}",
        f"cost_formula_nodes={r.cost['formula_nodes']}",
    ]
    status = 0
    if args.verify:
        a = model_check(g, args.vertex, f)
        b = model_check(r.graph, r.initial, r.formula)
        report.append(f"verified={_bool(a == b)}")
        status = 0 if a == b else 1
    _emit(out, report, r.graph.to_text())
    return status


def cmd_game(args, out) -> int:
    if args.mode == "solve":
        if len(args.inputs) != 1:
            raise UsageError("game solve takes one game file")
        game = read_game(args.inputs[0])
        if game.initial is None:
            raise GameError("game has no ginitial line")
        sol = solve(game)
        winner = sol.winner(game.initial)
        report = [
            f"winner={winner}",
            f"win_d={','.join(v for v in game.vertices if v in sol.win_d)}",
            f"win_c={','.join(v for v in game.vertices if v in sol.win_c)}",
        ]
        report += [f"strategy_d={','.join(f'{v}>{w}' for v, w in sorted(sol.strategy_d.items()))}"]
        report += [f"strategy_c={','.join(f'{v}>{w}' for v, w in sorted(sol.strategy_c.items()))}"]
        _emit(out, report)
        return 0 if winner == "d" else 1
    if args.mode == "eval":
        if len(args.inputs) != 3:
            raise UsageError("game eval takes GRAPH VERTEX FORMULA")
        path, vertex, text = args.inputs
        g = read_graph(path)
        holds = game_check(g, vertex, parse(text))
        _emit(out, [f"winner={'d' if holds else 'c'}"])
        return 0 if holds else 1
    if len(args.inputs) != 1 or not args.inputs[0].isdigit():
        raise UsageError("game wn takes a non-negative integer")
    n = int(args.inputs[0])
    f = walukiewicz(n, p_variant=args.p)
    fc = classify(f)
    _emit(out, [f"n={n}", f"p_variant={_bool(args.p)}", f"sigma={fc.sigma}", f"pi={fc.pi}", f"ad={fc.ad}"],
          render(f) + "\n")
    return 0


def cmd_sat(args, out) -> int:
    f = parse(args.formula)
    w = bounded_sat(f, args.max_n)
    if w is None:
        print(f"none<={args.max_n}", file=out)
        return 1
    _emit(out, [f"witness={w.vertex}", f"vertices={w.graph.n}"], w.graph.to_text())
    return 0


def cmd_gen(args, out) -> int:
    kind, rest = args.kind, args.params
    if kind == "g5" and not rest:
        g = g5()
    elif kind == "path4" and not rest:
        g = path4()
    elif kind == "abcd-grid" and len(rest) == 1:
        g = abcd_grid(int(rest[0]))
    elif kind == "random" and len(rest) in (2, 3):
        seed = int(rest[2]) if len(rest) == 3 else args.seed
        g = random_colored_graph(seed, int(rest[0]), float(rest[1]))
    else:
        raise UsageError("gen takes g5 | path4 | abcd-grid M | random N DENSITY [SEED]")
    _emit(out, [f"kind={kind}", f"vertices={g.n}", f"edges={g.edge_count}"], g.to_text())
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for random generators (default 0)")
    parser = argparse.ArgumentParser(prog="ptmu", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="model check a formula at a vertex")
    p.add_argument("graph")
    p.add_argument("vertex")
    p.add_argument("formula")
    p.add_argument("--engine", choices=("direct", "game", "both"), default="direct")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", parents=[common], help="transitivity, P-transitivity, diameter, wellfoundedness")
    p.add_argument("graph")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("ptc", parents=[common], help="P-transitive closure")
    p.add_argument("graph")
    p.set_defaults(func=cmd_ptc)

    p = sub.add_parser("reduce", parents=[common], help="reduce model checking to a P-transitive graph")
    p.add_argument("graph")
    p.add_argument("vertex")
    p.add_argument("formula")
    p.add_argument("--verify", action="store_true", help="re-check both sides with the direct engine")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("game", parents=[common], help="solve | eval GRAPH VERTEX FORMULA | wn N")
    p.add_argument("mode", choices=("solve", "eval", "wn"))
    p.add_argument("inputs", nargs="*")
    p.add_argument("--p", action="store_true", help="P-variant of the Walukiewicz formula")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("sat", parents=[common], help="bounded satisfiability over P-transitive graphs")
    p.add_argument("formula")
    p.add_argument("--max-n", type=int, default=4)
    p.set_defaults(func=cmd_sat)

    p = sub.add_parser("gen", parents=[common], help="fixture graphs: g5 | path4 | abcd-grid M | random N DENSITY [SEED]")
    p.add_argument("kind")
    p.add_argument("params", nargs="*")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, *INPUT_ERRORS) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
