"""Observed choices versus predicted strategy sets.

Observations come as CSV rows ``role,path,weight``.  ``path`` lists the
actions a subject in that role took at the decision points they reached,
joined with ``/`` (``In/2``); ``weight`` is a rational string.  A responder's
path is recorded conditional on reaching their move, so its weights are
shares of the responders who actually got to play.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .game import Game, format_rational, parse_rational

FREQUENCY = "frequency"
COUNT = "count"

DEFAULT_ROLES = {"row": 0, "column": 1, "col": 1}


class ObservationError(ValueError):
    pass


@dataclass(frozen=True)
class Record:
    role: str
    path: tuple[str, ...]
    weight: Fraction


@dataclass
class ObservationSet:
    game_id: str
    records: list[Record]
    roles: dict[str, str] = field(default_factory=dict)  # role label -> player id
    kind: str = FREQUENCY

    def role_labels(self) -> list[str]:
        seen: dict[str, None] = {}
        for r in self.records:
            seen.setdefault(r.role, None)
        return list(seen)

    def by_role(self, role: str) -> list[Record]:
        return [r for r in self.records if r.role == role]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["role", "path", "weight"])
        for r in self.records:
            w.writerow([r.role, "/".join(r.path), format_rational(r.weight)])
        return buf.getvalue()


def resolve_role(game: Game, role: str, aliases: Mapping[str, str] | None = None) -> str:
    """Player id behind a role label (a player id, a corpus alias, or row/column)."""
    if aliases and role in aliases:
        return aliases[role]
    if role in game.players:
        return role
    key = role.lower()
    if key in DEFAULT_ROLES and DEFAULT_ROLES[key] < len(game.players):
        return game.players[DEFAULT_ROLES[key]]
    if key.startswith("player") and key[6:].strip() in game.players:
        return key[6:].strip()
    raise ObservationError(f"unknown role {role!r}")


def own_paths(game: Game, player: str) -> dict[tuple[str, ...], list[tuple[tuple[str, str], ...]]]:
    """Every sequence of the player's own actions along some play.

    Maps the action sequence to the (information set, action) lists realizing it.
    """
    out: dict[tuple[str, ...], list[tuple[tuple[str, str], ...]]] = {}
    for z in game.terminals:
        steps = []
        cur = z
        while game.parent[cur] is not None:
            par, profile = game.parent[cur]
            node = game.nodes[par]
            if player in node.movers:
                act = profile[node.movers.index(player)]
                steps.append((game.node_infoset[(player, par)], act))
            cur = par
        steps.reverse()
        key = tuple(a for _, a in steps)
        if not key:
            continue
        seq = tuple(steps)
        bucket = out.setdefault(key, [])
        if seq not in bucket:
            bucket.append(seq)
    return out


def load_observations(
    source: str | Path | io.TextIOBase,
    game: Game,
    **kwargs,
) -> ObservationSet:
    """Read and validate a ``role,path,weight`` CSV file against ``game``."""
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    return parse_observations(text, game, **kwargs)


def parse_observations(
    text: str,
    game: Game,
    *,
    game_id: str | None = None,
    roles: Mapping[str, str] | None = None,
    kind: str = FREQUENCY,
) -> ObservationSet:
    if kind not in (FREQUENCY, COUNT):
        raise ValueError(f"unknown weight kind {kind!r}")
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and not r[0].startswith("#")]
    if not rows or [c.strip() for c in rows[0]] != ["role", "path", "weight"]:
        raise ObservationError("expected header 'role,path,weight'")
    resolved: dict[str, str] = {}
    paths_cache: dict[str, dict] = {}
    records = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise ObservationError(f"line {lineno}: expected 3 fields, got {len(row)}")
        role, path_text, weight_text = (c.strip() for c in row)
        player = resolve_role(game, role, roles)
        resolved[role] = player
        path = tuple(a.strip() for a in path_text.split("/")) if path_text else ()
        if player not in paths_cache:
            paths_cache[player] = own_paths(game, player)
        known = {a for i in game.player_infosets[player] for a in game.infoset_actions(i)}
        for a in path:
            if a not in known:
                raise ObservationError(f"line {lineno}: unknown action {a!r} for role {role!r}")
        if path not in paths_cache[player]:
            raise ObservationError(f"line {lineno}: {path_text!r} is not a possible path for role {role!r}")
        try:
            weight = parse_rational(weight_text)
        except (ValueError, ZeroDivisionError):
            raise ObservationError(f"line {lineno}: bad weight {weight_text!r}") from None
        if weight < 0:
            raise ObservationError(f"line {lineno}: negative weight")
        records.append(Record(role, path, weight))
    obs = ObservationSet(game_id or game.name, records, resolved, kind)
    if kind == FREQUENCY:
        for role in obs.role_labels():
            total = sum(r.weight for r in obs.by_role(role))
            if total != 1:
                raise ObservationError(f"frequencies for role {role!r} sum to {total}, not 1")
    return obs


def _consistent(game: Game, player: str, indices: Iterable[int], steps: list[tuple[tuple[str, str], ...]]) -> bool:
    strat = game.strategies(player)
    for n in indices:
        s = strat[n]
        for seq in steps:
            if all(s[i] == a for i, a in seq):
                return True
    return False


def consistent_share(game: Game, obs: ObservationSet, role: str, indices: Iterable[int]) -> Fraction:
    player = obs.roles.get(role) or resolve_role(game, role)
    paths = own_paths(game, player)
    recs = obs.by_role(role)
    total = sum((r.weight for r in recs), Fraction(0))
    if total == 0:
        return Fraction(0)
    idx = list(indices)
    hit = sum((r.weight for r in recs if _consistent(game, player, idx, paths[r.path])), Fraction(0))
    return hit / total


@dataclass
class ConsistencyTable:
    game_id: str
    roles: list[str]
    # (concept, level, role) -> share
    shares: dict[tuple[str, int, str], Fraction]

    def concepts(self) -> list[str]:
        seen: dict[str, None] = {}
        for c, _, _ in self.shares:
            seen.setdefault(c, None)
        return list(seen)

    def levels(self, concept: str) -> list[int]:
        return sorted({k for c, k, _ in self.shares if c == concept})

    def share(self, concept: str, level: int, role: str) -> Fraction:
        return self.shares[(concept, level, role)]

    def percent(self, concept: str, level: int, role: str, decimals: int = 0) -> str:
        return format_percent(self.share(concept, level, role), decimals)

    def merge(self, other: ConsistencyTable) -> ConsistencyTable:
        return ConsistencyTable(self.game_id, self.roles, {**self.shares, **other.shares})

    def rows(self, decimals: int = 0) -> tuple[list[str], list[list[str]]]:
        header = ["level"] + [f"{c}:{r}" for c in self.concepts() for r in self.roles]
        K = max((k for _, k, _ in self.shares), default=0)
        rows = []
        for k in range(1, K + 1):
            row = [str(k)]
            for c in self.concepts():
                for r in self.roles:
                    key = (c, k, r)
                    row.append(format_percent(self.shares[key], decimals) if key in self.shares else "")
            rows.append(row)
        return header, rows

    def to_json(self) -> dict:
        return {
            "game": self.game_id,
            "roles": self.roles,
            "cells": [
                {"concept": c, "level": k, "role": r, "share": format_rational(v)}
                for (c, k, r), v in self.shares.items()
            ],
        }

    def render(self, fmt: str = "table", decimals: int = 0) -> str:
        from .render import render_csv, render_table

        if fmt == "json":
            return json.dumps(self.to_json(), indent=2) + "\n"
        header, rows = self.rows(decimals)
        return render_csv(header, rows) if fmt == "csv" else render_table(header, rows)


def format_percent(share: Fraction, decimals: int = 0) -> str:
    """``share`` as a percentage rounded half-up to ``decimals`` places."""
    value = Decimal(share.numerator * 100) / Decimal(share.denominator)
    q = Decimal(1).scaleb(-decimals)
    return f"{value.quantize(q, rounding=ROUND_HALF_UP)}%"


def classify(obs: ObservationSet, solution, game_id: str | None = None) -> ConsistencyTable:
    """Share of each role's observed choices consistent with each level's prediction."""
    if game_id is not None and obs.game_id and game_id != obs.game_id:
        raise ObservationError(f"observations are for {obs.game_id!r}, not {game_id!r}")
    game = solution.game
    roles = obs.role_labels()
    shares = {}
    for k in range(1, solution.K + 1):
        for role in roles:
            player = obs.roles.get(role) or resolve_role(game, role)
            shares[(solution.concept, k, role)] = consistent_share(game, obs, role, solution.indices(k, player))
    return ConsistencyTable(obs.game_id, roles, shares)


def synthesize(game: Game, player: str, indices: Sequence[int], role: str | None = None) -> list[Record]:
    """Uniform frequencies over the paths some strategy in ``indices`` can produce."""
    paths = own_paths(game, player)
    hits = [p for p, steps in paths.items() if _consistent(game, player, indices, steps)]
    hits.sort()
    if not hits:
        return []
    w = Fraction(1, len(hits))
    return [Record(role or player, p, w) for p in hits]
