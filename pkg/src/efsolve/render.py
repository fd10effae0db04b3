"""Rendering strategy sets the way solution tables print them.

A set is compressed into wildcard patterns: ``(O1, *)`` stands for every
action at the position marked ``*``.  ``S_<player>`` denotes the full set
and ``∅`` the empty one.  :func:`parse_cell` reads the same notation back.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
from typing import Iterable, Sequence

from .game import Game

WILDCARD = "*"
EMPTY = "∅"

Pattern = tuple[str, ...]


def _expand(game: Game, player: str, pattern: Pattern) -> set[tuple[str, ...]]:
    isets = game.player_infosets[player]
    options = [
        game.infoset_actions(i) if a == WILDCARD else (a,) for i, a in zip(isets, pattern)
    ]
    return set(itertools.product(*options))


def compress(game: Game, player: str, indices: Iterable[int]) -> list[Pattern]:
    """Wildcard patterns covering exactly the given strategies.

    First, actions at information sets a strategy cannot reach itself are
    starred when every completion is in the set.  Then patterns differing in
    a single position are merged when all actions there are present.
    """
    strat = game.strategies(player)
    isets = game.player_infosets[player]
    chosen = {strat[n].actions for n in indices}
    patterns: set[Pattern] = set()
    for n in indices:
        s = strat[n]
        unreached = [pos for pos, i in enumerate(isets) if n not in game.own_reach(player, i)]
        pat = list(s.actions)
        for pos in unreached:
            trial = pat.copy()
            trial[pos] = WILDCARD
            if _expand(game, player, tuple(trial)) <= chosen:
                pat = trial
        patterns.add(tuple(pat))
    changed = True
    while changed:
        changed = False
        for pos in range(len(isets)):
            acts = game.infoset_actions(isets[pos])
            groups: dict[Pattern, set[str]] = {}
            for p in patterns:
                if p[pos] != WILDCARD:
                    groups.setdefault(p[:pos] + p[pos + 1 :], set()).add(p[pos])
            for rest, have in groups.items():
                if set(acts) <= have:
                    for a in acts:
                        patterns.discard(rest[:pos] + (a,) + rest[pos:])
                    patterns.add(rest[:pos] + (WILDCARD,) + rest[pos:])
                    changed = True
    # drop patterns subsumed by others
    expanded = {p: _expand(game, player, p) for p in patterns}
    keep = [p for p in patterns if not any(q != p and expanded[p] < expanded[q] for q in patterns)]
    order = {s.actions: n for n, s in enumerate(strat)}
    return sorted(keep, key=lambda p: min(order[a] for a in expanded[p]))


def format_pattern(pattern: Pattern) -> str:
    if len(pattern) == 1:
        return pattern[0]
    return "(" + ", ".join(pattern) + ")"


def format_set(game: Game, player: str, indices: Sequence[int], *, wildcards: bool = True) -> str:
    indices = list(indices)
    if not indices:
        return EMPTY
    if len(indices) == len(game.strategies(player)) and len(indices) > 1:
        return f"S_{player}"
    if wildcards:
        items = [format_pattern(p) for p in compress(game, player, indices)]
    else:
        items = [game.strategies(player)[n].label for n in indices]
    return "{" + ", ".join(items) + "}"


def _split_top(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [x.strip() for x in out if x.strip()]


def parse_cell(game: Game, player: str, text: str) -> tuple[int, ...]:
    """Strategy indices denoted by table notation such as ``{(O1, *), (C1, c1)}``."""
    text = text.strip()
    if text in (EMPTY, "{}", "empty"):
        return ()
    if text.replace(" ", "") in (f"S_{player}", f"S{player}"):
        return tuple(range(len(game.strategies(player))))
    if text.startswith("{") and text.endswith("}"):
        text = text[1:-1]
    isets = game.player_infosets[player]
    wanted: set[tuple[str, ...]] = set()
    for item in _split_top(text):
        if item.startswith("(") and item.endswith(")"):
            pattern = tuple(a.strip() for a in item[1:-1].split(","))
        else:
            pattern = (item,)
        if len(pattern) != len(isets):
            raise ValueError(f"{item!r} does not fit player {player!r}'s {len(isets)} information sets")
        for i, a in zip(isets, pattern):
            if a != WILDCARD and a not in game.infoset_actions(i):
                raise ValueError(f"unknown action {a!r} for player {player!r}")
        wanted |= _expand(game, player, pattern)
    return tuple(n for n, s in enumerate(game.strategies(player)) if s.actions in wanted)


# ------------------------------------------------------------------ tables
def solution_rows(solutions: Sequence, *, wildcards: bool = True) -> tuple[list[str], list[list[str]]]:
    """Header and rows for one or more LevelSolutions on the same game."""
    game = solutions[0].game
    header = ["level"]
    for sol in solutions:
        header += [f"{sol.concept}:{p}" for p in game.players]
    K = max(sol.K for sol in solutions)
    rows = []
    for k in range(1, K + 1):
        row = [str(k)]
        for sol in solutions:
            for p in game.players:
                row.append(format_set(game, p, sol.indices(k, p), wildcards=wildcards) if k <= sol.K else "")
        rows.append(row)
    return header, rows


def render_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    lines = ["  ".join(str(h).ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def render_csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def render_solutions(solutions: Sequence, fmt: str = "table") -> str:
    if fmt == "json":
        docs = [sol.to_json() for sol in solutions]
        return json.dumps(docs[0] if len(docs) == 1 else docs, indent=2, ensure_ascii=False) + "\n"
    header, rows = solution_rows(solutions, wildcards=fmt == "table")
    if fmt == "csv":
        return render_csv(header, rows)
    if fmt == "table":
        return render_table(header, rows)
    raise ValueError(f"unknown format {fmt!r}")
