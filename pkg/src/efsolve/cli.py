"""Command-line front end.

Exit status: 0 on success, 1 on domain errors (bad game, unknown id,
malformed data), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import corpus
from .beliefs import MODES, Belief, BeliefError, BeliefSystem
from .experiments import COUNT, FREQUENCY, ObservationError, classify, load_observations
from .game import CapacityError, Game, GameFormatError, PreconditionError, validate_game
from .render import render_solutions
from .solvers import (
    BACKWARD_LEVEL_K,
    CONCEPTS,
    DELTA_RAT,
    NF_LEVEL_K,
    STRONG_LEVEL_K,
    STRONG_RAT,
    solve,
    witnesses,
)

MODE_ENV = "EFSOLVE_MODE"
_BELIEF_CONCEPTS = {NF_LEVEL_K, STRONG_LEVEL_K, BACKWARD_LEVEL_K}


class DomainError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors exit 2
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _load_game(source: str) -> tuple[Game, corpus.CorpusEntry | None]:
    path = Path(source)
    if source.endswith(".json") or path.exists():
        if not path.exists():
            raise DomainError(f"unknown game {source!r}: no such file")
        return Game.load(path), None
    try:
        return corpus.corpus_load(source)
    except corpus.UnknownGame:
        raise DomainError(f"unknown game {source!r}") from None


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise DomainError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: {exc}") from None


def _beliefs(game: Game, concept: str, spec: str | None) -> dict[str, Any] | None:
    if spec in (None, "uniform"):
        return None
    if concept not in _BELIEF_CONCEPTS:
        raise DomainError(f"--beliefs applies only to {', '.join(sorted(_BELIEF_CONCEPTS))}")
    raw = _read_json(spec)
    out = {}
    for p, doc in raw.items():
        if concept == NF_LEVEL_K:
            nf = game.normal_form_game
            out[p] = Belief.from_json(nf, p, doc)
        else:
            system = BeliefSystem.from_json(game, doc)
            problems = system.problems(game)
            if problems:
                raise DomainError(f"belief system for {p}: {problems[0]}")
            out[p] = system
    return out


def _delta(game: Game, path: str) -> dict[str, list[BeliefSystem]]:
    raw = _read_json(path)
    return {p: [BeliefSystem.from_json(game, doc) for doc in docs] for p, docs in raw.items()}


def _mode(args: argparse.Namespace) -> str:
    mode = args.mode or os.environ.get(MODE_ENV) or "local"
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r} (expected one of {', '.join(MODES)})")
    return mode


def _run_concept(game: Game, concept: str, args: argparse.Namespace):
    if concept not in CONCEPTS:
        raise DomainError(f"unknown concept {concept!r}")
    kw: dict[str, Any] = {}
    beliefs = _beliefs(game, concept, getattr(args, "beliefs", None))
    if beliefs is not None:
        kw["beliefs"] = beliefs
    if getattr(args, "delta", None):
        if concept != DELTA_RAT:
            raise DomainError("--delta applies only to delta-rationalizability")
        kw["delta"] = _delta(game, args.delta)
    if getattr(args, "variant", None):
        if concept != DELTA_RAT:
            raise DomainError("--variant applies only to delta-rationalizability")
        kw["variant"] = args.variant
    if getattr(args, "method", None):
        if concept != STRONG_RAT:
            raise DomainError("--method applies only to strong-rationalizability")
        kw["method"] = args.method
    return solve(game, concept, args.levels, mode=_mode(args), **kw)


def _emit(text: str, out) -> None:
    out.write(text)


# ---------------------------------------------------------------- commands
def cmd_validate(args: argparse.Namespace, out) -> int:
    game, _ = _load_game(args.game)
    problems = validate_game(game)
    if not problems:
        _emit(f"{game.name or args.game}: valid\n", out)
        return 0
    for v in problems:
        _emit(f"{v.kind}: {v.message} [{', '.join(v.nodes)}]\n", out)
    return 1


def _require_valid(game: Game) -> None:
    problems = validate_game(game)
    if problems:
        raise DomainError(f"invalid game: {problems[0].kind}: {problems[0].message}")


def cmd_solve(args: argparse.Namespace, out) -> int:
    game, _ = _load_game(args.game)
    _require_valid(game)
    sol = _run_concept(game, args.concept, args)
    if args.format == "json":
        doc = sol.to_json()
        if args.emit_witness:
            doc["witnesses"] = witnesses(sol)
        _emit(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", out)
        return 0
    _emit(render_solutions([sol], args.format), out)
    if args.emit_witness:
        _emit(json.dumps(witnesses(sol), indent=2, ensure_ascii=False) + "\n", out)
    cyc = sol.cycle
    if cyc is not None and args.format == "table" and cyc[1] > 1:
        _emit(f"cycle: start {cyc[0]}, period {cyc[1]}\n", out)
    return 0


def cmd_compare(args: argparse.Namespace, out) -> int:
    game, _ = _load_game(args.game)
    _require_valid(game)
    concepts = [c.strip() for c in args.concepts.split(",") if c.strip()]
    if not concepts:
        raise DomainError("no concepts given")
    sols = [_run_concept(game, c, args) for c in concepts]
    _emit(render_solutions(sols, args.format), out)
    return 0


def cmd_classify(args: argparse.Namespace, out) -> int:
    game, entry = _load_game(args.game)
    _require_valid(game)
    roles = entry.roles if entry else None
    obs = load_observations(
        args.data, game, game_id=args.game, roles=roles, kind=COUNT if args.counts else FREQUENCY
    )
    concepts = [c.strip() for c in args.concepts.split(",") if c.strip()]
    table = None
    for c in concepts:
        t = classify(obs, _run_concept(game, c, args))
        table = t if table is None else table.merge(t)
    if table is None:
        raise DomainError("no concepts given")
    _emit(table.render(args.format, args.decimals), out)
    return 0


def cmd_list(args: argparse.Namespace, out) -> int:
    for e in corpus.corpus_list():
        _emit(f"{e.id}\t{e.caption}\n", out)
    return 0


def cmd_export(args: argparse.Namespace, out) -> int:
    for p in corpus.export(args.directory):
        _emit(f"{p}\n", out)
    return 0


def _solver_flags(p: argparse.ArgumentParser, many: bool = False) -> None:
    p.add_argument("--game", required=True, help="corpus id or path to a game file")
    if many:
        p.add_argument("--concepts", required=True, help="comma-separated concept ids")
    else:
        p.add_argument("--concept", required=True, help="concept id, e.g. strong-level-k")
    p.add_argument("--levels", type=int, default=4, help="number of levels K (default 4)")
    p.add_argument("--beliefs", default="uniform", help="'uniform' or a JSON file of first-level beliefs")
    p.add_argument("--mode", choices=MODES, help=f"belief-system mode (default ${MODE_ENV} or local)")
    p.add_argument("--delta", help="JSON file with admissible belief systems (delta-rationalizability)")
    p.add_argument("--variant", choices=("standard", "modified"))
    p.add_argument("--method", choices=("dominance", "beliefs"))
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="efsolve", description="Level-k and rationalizability solvers for extensive-form games.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check a game file")
    p.add_argument("game", help="corpus id or path to a game file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="run one solution concept")
    _solver_flags(p)
    p.add_argument("--emit-witness", action="store_true", help="also print the beliefs behind each strategy")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", help="several concepts side by side")
    _solver_flags(p, many=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("classify", help="share of observed choices consistent with each level")
    _solver_flags(p, many=True)
    p.add_argument("--data", required=True, help="CSV with header role,path,weight")
    p.add_argument("--counts", action="store_true", help="weights are counts, not frequencies")
    p.add_argument("--decimals", type=int, default=0, help="decimal places for percentages")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("list-games", help="list corpus games")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("export-corpus", help="write corpus game files to a directory")
    p.add_argument("directory")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if getattr(args, "levels", 1) < 1:
        build_parser().error("--levels must be at least 1")
    try:
        return args.func(args, out)
    except (DomainError, GameFormatError, CapacityError, PreconditionError, BeliefError, ObservationError) as exc:
        sys.stderr.write(f"efsolve: {exc}\n")
        return 1
    except (ValueError, KeyError) as exc:
        sys.stderr.write(f"efsolve: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
