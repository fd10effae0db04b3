"""Bundled example games with their expected solution tables.

The game files live next to this module in ``games/``; ``index.json`` lists
each entry with its caption, role aliases and the expected tables written in
the usual set notation (see :func:`efsolve.render.parse_cell`).
"""
from __future__ import annotations

import json
import shutil
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from ..build import build, leaf, move, simultaneous
from ..game import Game, NormalForm
from ..render import parse_cell


class UnknownGame(KeyError):
    def __str__(self) -> str:
        return f"unknown game {self.args[0]!r}"


@dataclass(frozen=True)
class ExpectedTable:
    """Expected per-level sets for one concept; ``params`` are solver keyword arguments."""

    key: str
    concept: str
    params: dict[str, Any]
    rows: tuple[dict[str, str], ...]
    cycle: tuple[int, int] | None = None

    @property
    def K(self) -> int:
        return len(self.rows)

    def sets(self, game: Game) -> list[dict[str, tuple[int, ...]]]:
        return [{p: parse_cell(game, p, cell) for p, cell in row.items()} for row in self.rows]


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    file: str
    caption: str
    note: str = ""
    roles: dict[str, str] = field(default_factory=dict)
    expected: dict[str, ExpectedTable] = field(default_factory=dict)
    matrix: dict[str, Any] | None = None

    def load(self) -> Game:
        return _load_game(self.file)

    def normal_form(self) -> NormalForm | None:
        if self.matrix is None:
            return None
        m = self.matrix
        cells = [[tuple(Fraction(x) for x in cell) for cell in row] for row in m["cells"]]
        return NormalForm.from_matrix(m["rows"], m["cols"], cells)


def _data_dir():
    return resources.files(__name__)


@lru_cache(maxsize=None)
def _index() -> dict[str, CorpusEntry]:
    raw = json.loads((_data_dir() / "index.json").read_text(encoding="utf-8"))
    out = {}
    for doc in raw["games"]:
        expected = {}
        for key, table in doc.get("expected", {}).items():
            cyc = table.get("cycle")
            expected[key] = ExpectedTable(
                key,
                table["concept"],
                dict(table.get("params", {})),
                tuple(dict(r) for r in table["levels"]),
                None if cyc is None else (int(cyc["start"]), int(cyc["period"])),
            )
        out[doc["id"]] = CorpusEntry(
            doc["id"],
            doc["file"],
            doc.get("caption", ""),
            doc.get("note", ""),
            dict(doc.get("roles", {})),
            expected,
            doc.get("matrix"),
        )
    return out


@lru_cache(maxsize=None)
def _load_game(file: str) -> Game:
    text = (_data_dir() / "games" / file).read_text(encoding="utf-8")
    return Game.from_dict(json.loads(text))


def corpus_list() -> list[CorpusEntry]:
    return list(_index().values())


def corpus_ids() -> list[str]:
    return list(_index())


def corpus_entry(game_id: str) -> CorpusEntry:
    try:
        return _index()[game_id]
    except KeyError:
        raise UnknownGame(game_id) from None


def corpus_load(game_id: str) -> tuple[Game, CorpusEntry]:
    entry = corpus_entry(game_id)
    return entry.load(), entry


def export(directory: str | Path) -> list[Path]:
    """Copy every corpus game file into ``directory``; returns the written paths."""
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for entry in corpus_list():
        dest = target / entry.file
        with resources.as_file(_data_dir() / "games" / entry.file) as src:
            shutil.copyfile(src, dest)
        written.append(dest)
    return written


def observations_path(name: str):
    """Bundled observation CSV (``cooper``, ``bn``, ``er``)."""
    return _data_dir() / "observations" / f"{name}.csv"


# ------------------------------------------------------------------ families
def bos_outside_option(
    outside: Fraction | int | str,
    bb: Sequence[Any] = (5, 1),
    ss: Sequence[Any] = (1, 5),
    mismatch: Sequence[Any] = (0, 0),
    outside_p2: Fraction | int | str = 0,
    name: str = "",
) -> Game:
    """Battle of the sexes preceded by player 1's outside option.

    Player 1 picks ``Out`` (payoff ``outside``) or ``In``; after ``In`` both
    players choose ``B`` or ``S`` simultaneously.  With the default diagonal,
    ``In`` followed by ``B`` is worth 5/2 to player 1 under a uniform belief.
    """
    v = Fraction(outside)
    sub = simultaneous(
        ["1", "2"],
        {
            ("B", "B"): leaf(*bb),
            ("B", "S"): leaf(*mismatch),
            ("S", "B"): leaf(*mismatch),
            ("S", "S"): leaf(*ss),
        },
    )
    return build(["1", "2"], move("1", {"Out": leaf(v, Fraction(outside_p2)), "In": sub}), name=name or f"bos[{v}]")
